"""
Closed-form spinor and vector fields on the model spaces.

Every field is expressed in the trivialization given by the orthonormal frame
of its space, and ``derivative(i)`` returns another field: the exact frame
derivative e_i(field). Fields are immutable and may be shared across threads.
"""
from abc import ABC, abstractmethod

import numpy as np

# --- Project Imports ---
from core.exceptions import DimensionMismatchException, SpaceMismatchException
from core.linalg import adjoint_matrices, nilpotent_exp
from models.common import BasisConvention, ModelSpace, SpinLabel
from models.geometry import H3Point, R3Point, S3Point
from services.irrep_service import irrep_service

Point = S3Point | H3Point | R3Point


# ---------- VECTOR FIELDS ----------
class VectorField(ABC):
    """Vector field by its components in the orthonormal frame"""

    def __init__(self, space: ModelSpace):
        self.space = space

    @abstractmethod
    def components(self, point: Point) -> np.ndarray:
        ...

    @abstractmethod
    def derivative(self, i: int) -> "VectorField":
        ...

    @property
    def is_left_invariant(self) -> bool:
        return False

    @property
    def is_right_invariant(self) -> bool:
        return False


class ConstantVectorField(VectorField):
    """Constant frame components; on S^3 a left-invariant field"""

    def __init__(self, space: ModelSpace, a):
        super().__init__(space)
        self.a = np.asarray(a, dtype=complex)

    def components(self, point: Point) -> np.ndarray:
        return self.a

    def derivative(self, i: int) -> VectorField:
        return ConstantVectorField(self.space, np.zeros(3))

    @property
    def is_left_invariant(self) -> bool:
        return self.space == ModelSpace.S3


class MappedVectorField(VectorField):
    """Pointwise image M * X of a vector field"""

    def __init__(self, matrix: np.ndarray, base: VectorField):
        super().__init__(base.space)
        self.matrix = matrix
        self.base = base

    def components(self, point: Point) -> np.ndarray:
        return self.matrix @ self.base.components(point)

    def derivative(self, i: int) -> VectorField:
        return MappedVectorField(self.matrix, self.base.derivative(i))


class AdjointVectorField(VectorField):
    """
    Right-invariant field on S^3 generated by A = sum a_m sigma_m; its left
    frame components at x are those of x^-1 A x.
    """

    def __init__(self, a):
        super().__init__(ModelSpace.S3)
        self.a = np.asarray(a, dtype=float)
        rep = irrep_service.build_irrep(SpinLabel(two_s=1))
        self._generator = sum(self.a[m] * rep.sigma[m] for m in range(3))

    def components(self, point: S3Point) -> np.ndarray:
        y = point.inverse @ self._generator @ point.g
        return np.array([y[0, 0].imag, y[0, 1].real, y[0, 1].imag], dtype=complex)

    def derivative(self, i: int) -> VectorField:
        return MappedVectorField(-adjoint_matrices()[i], self)

    @property
    def is_right_invariant(self) -> bool:
        return True


# ---------- SPINOR FIELDS ----------
class SpinorField(ABC):
    """Section of the spin bundle at ``label`` in trivialized form"""

    def __init__(self,
                 space: ModelSpace,
                 label: SpinLabel,
                 basis: BasisConvention = BasisConvention.UNITARY):
        self.space = space
        self.label = label
        self.basis = basis

    @property
    def rep(self):
        return irrep_service.build_irrep(self.label, self.basis)

    @abstractmethod
    def value(self, point: Point) -> np.ndarray:
        ...

    @abstractmethod
    def derivative(self, i: int) -> "SpinorField":
        ...

    def describe(self) -> str:
        return f"{type(self).__name__}({self.space.value}, {self.label})"


class ZeroField(SpinorField):

    def value(self, point: Point) -> np.ndarray:
        return np.zeros(self.label.dim, dtype=complex)

    def derivative(self, i: int) -> SpinorField:
        return self


class ConstantField(SpinorField):
    """x -> psi"""

    def __init__(self,
                 space: ModelSpace,
                 label: SpinLabel,
                 psi,
                 basis: BasisConvention = BasisConvention.UNITARY):
        super().__init__(space, label, basis)
        self.psi = np.asarray(psi, dtype=complex)
        if self.psi.shape != (label.dim, ):
            raise DimensionMismatchException(
                f"spinor of size {self.psi.size} at {label}")

    def value(self, point: Point) -> np.ndarray:
        return self.psi

    def derivative(self, i: int) -> SpinorField:
        return ZeroField(self.space, self.label, self.basis)


class ConjTranslateField(SpinorField):
    """x -> pi(x^-1) psi on S^3; e_i acts as -pi(sigma_i)"""

    def __init__(self,
                 label: SpinLabel,
                 psi,
                 basis: BasisConvention = BasisConvention.UNITARY):
        super().__init__(ModelSpace.S3, label, basis)
        self.psi = np.asarray(psi, dtype=complex)
        if self.psi.shape != (label.dim, ):
            raise DimensionMismatchException(
                f"spinor of size {self.psi.size} at {label}")

    def value(self, point: S3Point) -> np.ndarray:
        return irrep_service.inverse_element(self.rep, point) @ self.psi

    def derivative(self, i: int) -> SpinorField:
        return TransformedField(-self.rep.sigma[i], self)


class PowerExpField(SpinorField):
    """
    Upper half-space field x^{-sign H/2} exp(i w M) psi with (w, M) = (z, E)
    for sign +1 and (conj z, F) for sign -1.
    """

    def __init__(self,
                 label: SpinLabel,
                 psi,
                 sign: int,
                 basis: BasisConvention = BasisConvention.UNITARY):
        super().__init__(ModelSpace.H3, label, basis)
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        self.psi = np.asarray(psi, dtype=complex)
        self.sign = sign

    @property
    def ladder(self) -> np.ndarray:
        rep = self.rep
        return rep.e if self.sign > 0 else rep.f

    def value(self, point: H3Point) -> np.ndarray:
        rep = self.rep
        w = point.z if self.sign > 0 else point.z.conjugate()
        powers = point.x1**(-self.sign * rep.weights / 2.0)
        return powers * (nilpotent_exp(1j * w * self.ladder) @ self.psi)

    def derivative(self, i: int) -> SpinorField:
        rep = self.rep
        if i == 0:
            return TransformedField(-0.5 * self.sign * rep.h, self)
        if i == 1:
            return TransformedField(1j * self.ladder, self)
        return TransformedField(-self.sign * self.ladder, self)


class AffineTwistorField(SpinorField):
    """x -> u + pi(x) v on flat space"""

    def __init__(self,
                 label: SpinLabel,
                 u,
                 v,
                 basis: BasisConvention = BasisConvention.UNITARY):
        super().__init__(ModelSpace.R3, label, basis)
        self.u = np.asarray(u, dtype=complex)
        self.v = np.asarray(v, dtype=complex)

    def value(self, point: R3Point) -> np.ndarray:
        return self.u + irrep_service.rep_of_vector(self.rep, point.x) @ self.v

    def derivative(self, i: int) -> SpinorField:
        return ConstantField(self.space, self.label, self.rep.sigma[i] @ self.v,
                             self.basis)


class TransformedField(SpinorField):
    """Pointwise image M * field; M may change the level"""

    def __init__(self, matrix: np.ndarray, base: SpinorField):
        if matrix.shape[1] != base.label.dim:
            raise DimensionMismatchException(
                f"cannot apply {matrix.shape} matrix to {base.label}")
        super().__init__(base.space, SpinLabel(two_s=matrix.shape[0] - 1),
                         base.basis)
        self.matrix = matrix
        self.base = base

    def value(self, point: Point) -> np.ndarray:
        return self.matrix @ self.base.value(point)

    def derivative(self, i: int) -> SpinorField:
        inner = self.base.derivative(i)
        if isinstance(inner, ZeroField):
            return ZeroField(self.space, self.label, self.basis)
        return TransformedField(self.matrix, inner)


class LinearComboField(SpinorField):
    """sum_k c_k field_k over fields of one level"""

    def __init__(self, terms: list[tuple[complex, SpinorField]]):
        if not terms:
            raise ValueError("empty linear combination")
        first = terms[0][1]
        for _, field in terms:
            if field.label != first.label:
                raise DimensionMismatchException(
                    f"cannot add fields at {first.label} and {field.label}")
            if field.space != first.space:
                raise SpaceMismatchException()
        super().__init__(first.space, first.label, first.basis)
        self.terms = [(c, f) for c, f in terms
                      if c != 0 and not isinstance(f, ZeroField)]

    def value(self, point: Point) -> np.ndarray:
        out = np.zeros(self.label.dim, dtype=complex)
        for c, field in self.terms:
            out = out + c * field.value(point)
        return out

    def derivative(self, i: int) -> SpinorField:
        terms = [(c, f.derivative(i)) for c, f in self.terms]
        terms = [(c, f) for c, f in terms if not isinstance(f, ZeroField)]
        if not terms:
            return ZeroField(self.space, self.label, self.basis)
        return LinearComboField(terms)


class CliffordMultipliedField(SpinorField):
    """x -> sum_k X_k(x) maps[k] field(x) for a vector field X"""

    def __init__(self, maps: tuple[np.ndarray, ...], vector: VectorField,
                 base: SpinorField):
        if vector.space != base.space:
            raise SpaceMismatchException()
        if maps[0].shape[1] != base.label.dim:
            raise DimensionMismatchException(
                f"Clifford maps of shape {maps[0].shape} on {base.label}")
        super().__init__(base.space, SpinLabel(two_s=maps[0].shape[0] - 1),
                         base.basis)
        self.maps = maps
        self.vector = vector
        self.base = base

    def value(self, point: Point) -> np.ndarray:
        x = self.vector.components(point)
        phi = self.base.value(point)
        out = np.zeros(self.label.dim, dtype=complex)
        for k in range(3):
            if x[k] != 0:
                out = out + x[k] * (self.maps[k] @ phi)
        return out

    def derivative(self, i: int) -> SpinorField:
        return LinearComboField([
            (1.0, CliffordMultipliedField(self.maps, self.vector.derivative(i),
                                          self.base)),
            (1.0, CliffordMultipliedField(self.maps, self.vector,
                                          self.base.derivative(i))),
        ])
