from typing import Any

import numpy as np
from pydantic import Field, field_validator

# --- Project Imports ---
from models.common import ArrayModel, ModelSpace, SpinLabel


# ---------- POINTS ----------
class S3Point(ArrayModel):
    """Point of S^3 = SU(2) as a special unitary 2x2 matrix"""
    g: np.ndarray

    @field_validator("g")
    @classmethod
    def check_special_unitary(cls, g: np.ndarray) -> np.ndarray:
        g = np.asarray(g, dtype=complex)
        if g.shape != (2, 2):
            raise ValueError("S3 points are 2x2 matrices")
        if np.linalg.norm(g.conj().T @ g - np.eye(2)) > 1e-12:
            raise ValueError("S3 point is not unitary")
        if abs(np.linalg.det(g) - 1.0) > 1e-12:
            raise ValueError("S3 point does not have determinant 1")
        return g

    @classmethod
    def identity(cls) -> "S3Point":
        return cls(g=np.eye(2, dtype=complex))

    @classmethod
    def from_quaternion(cls, q: np.ndarray) -> "S3Point":
        a0, a1, a2, a3 = np.asarray(q, dtype=float) / np.linalg.norm(q)
        g = np.array([[a0 + 1j * a1, a2 + 1j * a3],
                      [-a2 + 1j * a3, a0 - 1j * a1]])
        return cls(g=g)

    @property
    def inverse(self) -> np.ndarray:
        return self.g.conj().T

    @property
    def key(self) -> bytes:
        return self.g.tobytes()


class H3Point(ArrayModel):
    """Upper half-space point (x1 > 0)"""
    x1: float = Field(gt=0)
    x2: float
    x3: float

    @property
    def z(self) -> complex:
        return complex(self.x2, self.x3)


class R3Point(ArrayModel):
    x: np.ndarray

    @field_validator("x")
    @classmethod
    def check_vector(cls, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (3,):
            raise ValueError("R3 points are 3-vectors")
        return x


class ConePoint(ArrayModel):
    """Point (x, r) of the cone over S^3 with metric r^2 g + dr^2"""
    base: S3Point
    r: float = Field(gt=0)


# ---------- FRAMES ----------
class ConnectionTerm(ArrayModel):
    """coefficient * pi(sigma_index); a missing index means the zero term"""
    coefficient: float = 0.0
    sigma_index: int | None = None


class FrameSpec(ArrayModel):
    """Trivialized spinor connection nabla_{e_i} = d_{e_i} + C_i"""
    space: ModelSpace
    connection_terms: tuple[ConnectionTerm, ConnectionTerm, ConnectionTerm]
    structure_constants: np.ndarray
    scalar_curvature: float


class So4Splitting(ArrayModel):
    """Self-dual and anti-self-dual triples in Lambda^2 R^4"""
    sd_basis: tuple[np.ndarray, np.ndarray, np.ndarray]
    asd_basis: tuple[np.ndarray, np.ndarray, np.ndarray]


# ---------- KILLING SPINORS ----------
class KillingBasis(ArrayModel):
    """Basis of the Killing spinors with Killing number ``mu`` at one level"""
    space: ModelSpace
    label: SpinLabel
    mu: complex
    fields: tuple[Any, ...]

    @property
    def size(self) -> int:
        return len(self.fields)
