import numpy as np
from pydantic import model_validator

# --- Project Imports ---
from models.common import ArrayModel, BasisConvention, SpinLabel


class RepMatrices(ArrayModel):
    """Images of H, E, F and the Pauli triple in one basis convention"""
    label: SpinLabel
    basis: BasisConvention
    h: np.ndarray
    e: np.ndarray
    f: np.ndarray
    sigma: tuple[np.ndarray, np.ndarray, np.ndarray]

    @model_validator(mode="after")
    def check_shapes(self):
        size = self.label.dim
        for m in (self.h, self.e, self.f, *self.sigma):
            if m.shape != (size, size):
                raise ValueError(
                    f"expected {size}x{size} matrices for {self.label}")
        return self

    @property
    def dim(self) -> int:
        return self.label.dim

    @property
    def weights(self) -> np.ndarray:
        return np.real(np.diag(self.h))


class DecompositionBlock(ArrayModel):
    """One irreducible summand of W (x) C^3 with its isometric embedding"""
    component: SpinLabel
    isometry: np.ndarray
    casimir: float


class TensorDecomposition(ArrayModel):
    label: SpinLabel
    blocks: list[DecompositionBlock]

    def block(self, two_s: int) -> DecompositionBlock | None:
        for block in self.blocks:
            if block.component.two_s == two_s:
                return block
        return None


class CliffordTriple(ArrayModel):
    """
    Normalized Clifford homomorphisms at one level: pi(e_i) on the same level,
    pi^+(e_i) one level up and pi^-(e_i) one level down.
    """
    label: SpinLabel
    same_level: tuple[np.ndarray, np.ndarray, np.ndarray]
    raise_maps: tuple[np.ndarray, np.ndarray, np.ndarray]
    lower_maps: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None

    @model_validator(mode="after")
    def check_shapes(self):
        n = self.label.two_s
        for m in self.same_level:
            if m.shape != (n + 1, n + 1):
                raise ValueError("same-level maps must be square")
        for m in self.raise_maps:
            if m.shape != (n + 3, n + 1):
                raise ValueError("raise maps must be (N+3)x(N+1)")
        if self.lower_maps is not None:
            for m in self.lower_maps:
                if m.shape != (n - 1, n + 1):
                    raise ValueError("lower maps must be (N-1)x(N+1)")
        return self

    @property
    def has_lower(self) -> bool:
        return self.lower_maps is not None
