"""
Symmetric tensor fields built from Killing spinors, integral spin solutions
and the weight bookkeeping of the tensors K^m_{k,l}.

Tensors are evaluators: ``value(point, vectors)`` takes m frame-component
vectors (complex vectors allowed, the evaluation is complex multilinear).
"""
from abc import ABC, abstractmethod
from functools import lru_cache
from itertools import combinations
from math import factorial

import numpy as np

# --- Project Imports ---
from core.config import settings
from core.exceptions import DimensionMismatchException, SpaceMismatchException
from core.linalg import adjoint_matrices, residual
from core.logger import logger
from models.common import ModelSpace, SpinLabel
from models.geometry import R3Point
from models.report import IdentityCheck, VerificationReport
from services.clifford_service import clifford_service
from services.geometry_service import geometry_service
from services.helpers import make_check, shortfall, validate_killing_number
from services.irrep_service import irrep_service
from services.killing_service import killing_service
from services.spinor_fields import ConstantField, Point, SpinorField

KILLING_TENSOR = "symmetrized products of Killing spinors are Killing tensors"
INTEGRAL = "integral spin Killing-type equation and traceless Killing tensors"
PARALLEL = "parallel traceless symmetric powers on flat space"
WEIGHTS = "weights and highest weight vectors among the tensors K^m_{k,l}"
SYMBOL = "first order operators on vector fields as curl, gradient and divergence"
EMBEDDING = "Cartesian embedding of integral spin representations"

# complex frame vectors acting as E and F through pi
E_VECTOR = np.array([0.0, 0.5, -0.5j])
F_VECTOR = np.array([0.0, -0.5, -0.5j])


# ---------- EMBEDDING ----------


@lru_cache(maxsize=32)
def _embedding(two_s: int) -> np.ndarray:
    if two_s == 0:
        return np.ones((1, 1), dtype=complex)
    below = _embedding(two_s - 2)
    isometry = clifford_service.tensor_decompose(SpinLabel(two_s=two_s - 2)).block(
        two_s).isometry
    out = np.kron(below, np.eye(3)) @ isometry
    out.setflags(write=False)
    return out


def _kron_all(vectors: list[np.ndarray]) -> np.ndarray:
    out = np.ones(1, dtype=complex)
    for v in vectors:
        out = np.kron(out, v)
    return out


def symmetrized_product(maps: tuple[np.ndarray, ...], vectors: list[np.ndarray]) -> np.ndarray:
    """
    1/m! sum over orderings of pi(v_s1) ... pi(v_sm), accumulated over
    subsets: W(S) = sum_{i in S} pi(v_i) W(S - i).
    """
    dim = maps[0].shape[0]
    if not vectors:
        return np.eye(dim, dtype=complex)
    images = [clifford_service.apply(maps, v) for v in vectors]
    m = len(images)
    words = {0: np.eye(dim, dtype=complex)}
    for size in range(1, m + 1):
        longer = {}
        for members in combinations(range(m), size):
            mask = sum(1 << i for i in members)
            longer[mask] = sum(images[i] @ words[mask ^ (1 << i)] for i in members)
        words = longer
    return words[(1 << m) - 1] / factorial(m)


# ---------- TENSOR FIELDS ----------
class SymmetricTensorField(ABC):
    """Symmetric m-tensor field evaluated on frame-component vectors"""

    def __init__(self, space: ModelSpace, degree: int):
        self.space = space
        self.degree = degree

    @abstractmethod
    def value(self, point: Point, vectors: list[np.ndarray]) -> complex:
        ...

    @abstractmethod
    def frame_derivative(self, point: Point, b: int, vectors: list[np.ndarray]) -> complex:
        """e_b of the function x -> K_x(v_1, ..., v_m) for frame-constant v."""


class SpinorPairTensor(SymmetricTensorField):
    """K^m(X_1..X_m) = < pi(X_1) (.) ... (.) pi(X_m) phi, psi >"""

    def __init__(self, degree: int, phi: SpinorField, psi: SpinorField):
        if phi.label != psi.label:
            raise DimensionMismatchException(
                f"cannot pair spinors at {phi.label} and {psi.label}")
        if phi.space != psi.space:
            raise SpaceMismatchException()
        super().__init__(phi.space, degree)
        self.phi = phi
        self.psi = psi
        self.maps = tuple(phi.rep.sigma)

    def _pair(self, phi: np.ndarray, psi: np.ndarray, vectors) -> complex:
        return complex(np.vdot(psi, symmetrized_product(self.maps, vectors) @ phi))

    def value(self, point: Point, vectors: list[np.ndarray]) -> complex:
        return self._pair(self.phi.value(point), self.psi.value(point), vectors)

    def frame_derivative(self, point: Point, b: int, vectors: list[np.ndarray]) -> complex:
        product = symmetrized_product(self.maps, vectors)
        phi, psi = self.phi.value(point), self.psi.value(point)
        d_phi = self.phi.derivative(b).value(point)
        d_psi = self.psi.derivative(b).value(point)
        return complex(np.vdot(psi, product @ d_phi) + np.vdot(d_psi, product @ phi))


class SpinorFamilyTensor(SymmetricTensorField):
    """
    Every K^m_{a,b} of two spinor families at once: value[b, a] pairs phi_a
    with psi_b. Field values are cached for the last point evaluated.
    """

    def __init__(self, degree: int, phis: list[SpinorField], psis: list[SpinorField]):
        fields = [*phis, *psis]
        if not phis or not psis:
            raise ValueError("spinor families must be nonempty")
        if len({f.label for f in fields}) != 1:
            raise DimensionMismatchException("spinor families live at different levels")
        if len({f.space for f in fields}) != 1:
            raise SpaceMismatchException()
        super().__init__(phis[0].space, degree)
        self.phis = list(phis)
        self.psis = list(psis)
        self.maps = tuple(phis[0].rep.sigma)
        self._derivatives = [([f.derivative(b) for f in self.phis],
                              [f.derivative(b) for f in self.psis]) for b in range(3)]
        self._point = None
        self._frames = {}

    @property
    def pairs(self) -> int:
        return len(self.phis) * len(self.psis)

    def _columns(self, point: Point, key) -> np.ndarray:
        if self._point is not point:
            self._point, self._frames = point, {}
        if key not in self._frames:
            if key == "phi":
                fields = self.phis
            elif key == "psi":
                fields = self.psis
            else:
                side, b = key
                fields = self._derivatives[b][0 if side == "phi" else 1]
            self._frames[key] = np.column_stack([f.value(point) for f in fields])
        return self._frames[key]

    def value(self, point: Point, vectors: list[np.ndarray]) -> np.ndarray:
        product = symmetrized_product(self.maps, vectors)
        return self._columns(point, "psi").conj().T @ product @ self._columns(point, "phi")

    def frame_derivative(self, point: Point, b: int, vectors: list[np.ndarray]) -> np.ndarray:
        product = symmetrized_product(self.maps, vectors)
        phi, psi = self._columns(point, "phi"), self._columns(point, "psi")
        d_phi, d_psi = self._columns(point, ("phi", b)), self._columns(point, ("psi", b))
        return psi.conj().T @ product @ d_phi + d_psi.conj().T @ product @ phi


class MetricProductTensor(SymmetricTensorField):
    """g (.) K, two degrees above K"""

    def __init__(self, base: SymmetricTensorField):
        super().__init__(base.space, base.degree + 2)
        self.base = base

    def _split(self, vectors):
        m = len(vectors)
        for i in range(m):
            for j in range(i + 1, m):
                rest = [v for k, v in enumerate(vectors) if k not in (i, j)]
                yield np.dot(vectors[i], vectors[j]), rest

    def value(self, point: Point, vectors: list[np.ndarray]) -> complex:
        pairs = list(self._split(vectors))
        return sum(g * self.base.value(point, rest) for g, rest in pairs) / len(pairs)

    def frame_derivative(self, point: Point, b: int, vectors: list[np.ndarray]) -> complex:
        pairs = list(self._split(vectors))
        return sum(g * self.base.frame_derivative(point, b, rest)
                   for g, rest in pairs) / len(pairs)


class RealPartTensor(SymmetricTensorField):
    """Real part of a tensor, for real arguments"""

    def __init__(self, base: SymmetricTensorField):
        super().__init__(base.space, base.degree)
        self.base = base

    def value(self, point: Point, vectors: list[np.ndarray]) -> complex:
        return np.real(self.base.value(point, vectors))

    def frame_derivative(self, point: Point, b: int, vectors: list[np.ndarray]) -> complex:
        return np.real(self.base.frame_derivative(point, b, vectors))


class IntegralSpinTensor(SymmetricTensorField):
    """Section of the integral spin bundle at 2j read as a symmetric j-tensor"""

    def __init__(self, field: SpinorField):
        if field.label.is_half_integral:
            raise DimensionMismatchException(
                f"{field.label} is not an integral spin level")
        super().__init__(field.space, field.label.two_s // 2)
        self.field = field
        self.embedding = _embedding(field.label.two_s)

    def value(self, point: Point, vectors: list[np.ndarray]) -> complex:
        return complex(_kron_all(vectors) @ self.embedding @ self.field.value(point))

    def frame_derivative(self, point: Point, b: int, vectors: list[np.ndarray]) -> complex:
        derivative = self.field.derivative(b).value(point)
        return complex(_kron_all(vectors) @ self.embedding @ derivative)


class TensorService:
    """Killing tensors from spinors, integral spin solutions and weight checks"""

    # ---------- CONSTRUCTION ----------

    def killing_tensor_from_spinors(self, degree: int, phi: SpinorField,
                                    psi: SpinorField) -> SpinorPairTensor:
        """
        Raises:
            DimensionMismatchException: If the spinors live at different levels.
        """
        if degree < 0:
            raise ValueError("tensor degree must be nonnegative")
        return SpinorPairTensor(degree, phi, psi)

    def covariant_derivative(self, tensor: SymmetricTensorField, point: Point, b: int,
                             vectors: list[np.ndarray]) -> complex:
        """(nabla_{e_b} K)(v_1..v_m) = e_b K(v) - sum_i K(.., nabla_{e_b} v_i, ..)"""
        gamma = geometry_service.levi_civita_table(tensor.space)
        out = tensor.frame_derivative(point, b, vectors)
        for i, v in enumerate(vectors):
            moved = gamma[b].T @ v
            if np.any(moved):
                out = out - tensor.value(point, vectors[:i] + [moved] + vectors[i + 1:])
        return out

    def symmetrized_derivative(self, tensor: SymmetricTensorField, point: Point,
                               vectors: list[np.ndarray]) -> complex:
        """sum_i (nabla_{v_i} K)(v_0, .., v_i omitted, .., v_m)"""
        total = 0j
        for i, v in enumerate(vectors):
            rest = vectors[:i] + vectors[i + 1:]
            for b in range(3):
                if v[b] != 0:
                    total += v[b] * self.covariant_derivative(tensor, point, b, rest)
        return total

    # ---------- VERIFICATION ----------

    def verify_killing_tensor(self,
                              tensor: SymmetricTensorField,
                              points: list[Point],
                              tolerance: float | None = None,
                              rng: np.random.Generator | None = None,
                              name: str = "killing_tensor.equation",
                              label: SpinLabel | None = None) -> VerificationReport:
        """Symmetrized covariant derivative on random frame vectors, relative to |K|."""
        tol = tolerance or settings.ALGEBRA_TOLERANCE
        rng = rng or np.random.default_rng(tensor.degree)
        worst = 0.0
        for p in points:
            vectors = [rng.normal(size=3) for _ in range(tensor.degree + 1)]
            size = np.abs(tensor.value(p, vectors[1:]))
            drift = np.abs(self.symmetrized_derivative(tensor, p, vectors)) / (1.0 + size)
            worst = max(worst, float(np.max(drift)))
        check = make_check(name, worst, tol, KILLING_TENSOR, label, tensor.degree)
        return VerificationReport.build("tensors", [check], KILLING_TENSOR)

    def symmetry_check(self, tensor: SymmetricTensorField, points: list[Point],
                       rng: np.random.Generator, tolerance: float,
                       label: SpinLabel | None = None) -> IdentityCheck:
        worst = 0.0
        for p in points:
            vectors = [rng.normal(size=3) for _ in range(tensor.degree)]
            reference = tensor.value(p, vectors)
            shuffled = [vectors[k] for k in rng.permutation(tensor.degree)]
            drift = np.abs(tensor.value(p, shuffled) - reference) / (1.0 + np.abs(reference))
            worst = max(worst, float(np.max(drift)))
        return make_check("killing_tensor.symmetric", worst, tolerance, KILLING_TENSOR,
                          label, tensor.degree)

    def killing_tensor_family(self, degree: int, phis: list[SpinorField],
                              psis: list[SpinorField]) -> SpinorFamilyTensor:
        """
        All K^m_{a,b} for phi_a in ``phis`` and psi_b in ``psis`` as one
        matrix-valued tensor.

        Raises:
            DimensionMismatchException: If the spinors live at different levels.
        """
        if degree < 0:
            raise ValueError("tensor degree must be nonnegative")
        return SpinorFamilyTensor(degree, phis, psis)

    def spinor_tensor_checks(self,
                             label: SpinLabel,
                             degree: int,
                             points: list[Point],
                             tolerance: float,
                             rng: np.random.Generator) -> list[IdentityCheck]:
        """Every K^m_{a,b} from same-mu basis pairs on S^3, plus controls."""
        checks = []
        plus = list(killing_service.generate(ModelSpace.S3, label, 0.5).fields)
        minus = list(killing_service.generate(ModelSpace.S3, label, -0.5).fields)
        for name, family in (("left", plus), ("right", minus)):
            tensor = self.killing_tensor_family(degree, family, family)
            report = self.verify_killing_tensor(tensor, points, tolerance, rng,
                                                f"killing_tensor.{name}", label)
            checks.extend(report.checks)
            checks.append(self.symmetry_check(tensor, points[:3], rng, tolerance, label))
            real = RealPartTensor(tensor)
            checks.extend(
                self.verify_killing_tensor(real, points[:5], tolerance, rng,
                                           f"killing_tensor.{name}_real", label).checks)
        metric = MetricProductTensor(self.killing_tensor_family(0, plus, plus))
        checks.extend(
            self.verify_killing_tensor(metric, points[:5], tolerance, rng,
                                       "killing_tensor.metric_product", label).checks)
        if degree >= 1:
            mixed = self.killing_tensor_family(degree, plus, minus)
            report = self.verify_killing_tensor(mixed, points[:5], tolerance, rng)
            checks.append(
                make_check("killing_tensor.mixed_mu_fails",
                           shortfall(report.summary.max_residual, 1e-6), tolerance,
                           KILLING_TENSOR, label, degree))
        return checks

    # ---------- INTEGRAL SPIN ----------

    def embedding(self, label: SpinLabel) -> np.ndarray:
        """Isometric equivariant embedding V_j -> (C^3)^(x j) for twoS = 2j."""
        if label.is_half_integral:
            raise DimensionMismatchException(f"{label} is not an integral spin level")
        return _embedding(label.two_s)

    def embedding_checks(self, label: SpinLabel, tolerance: float) -> list[IdentityCheck]:
        emb = self.embedding(label)
        j = label.two_s // 2
        rep = irrep_service.build_irrep(label)
        ad = adjoint_matrices()
        checks = [
            make_check("embedding.isometric",
                       residual(emb.conj().T @ emb, np.eye(label.dim)), tolerance,
                       EMBEDDING, label),
        ]
        equivariance = 0.0
        for i in range(3):
            slots = sum(
                np.kron(np.kron(np.eye(3**s), ad[i]), np.eye(3**(j - s - 1)))
                for s in range(j)) if j else np.zeros((1, 1))
            equivariance += residual(emb @ rep.sigma[i], slots @ emb)
        checks.append(make_check("embedding.equivariant", equivariance, tolerance,
                                 EMBEDDING, label))
        symmetric, traceless = 0.0, 0.0
        for column in emb.T:
            t = column.reshape((3, ) * j)
            for s in range(j - 1):
                symmetric += residual(t, np.swapaxes(t, s, s + 1))
            if j >= 2:
                traceless += residual(np.trace(t, axis1=0, axis2=1))
        checks.append(make_check("embedding.symmetric", symmetric, tolerance, EMBEDDING,
                                 label))
        checks.append(make_check("embedding.traceless", traceless, tolerance, EMBEDDING,
                                 label))
        checks.append(
            make_check("embedding.zero_weight", abs(np.linalg.det(rep.sigma[0])),
                       tolerance, EMBEDDING, label))
        return checks

    def generate_integral(self, label: SpinLabel, mu: float) -> list[SpinorField]:
        """
        Solutions of nabla_X K = mu rho(X) K on S^3 at even ``label``.

        Raises:
            InadmissibleKillingNumberException: If mu is not +1/2 or -1/2.
        """
        if label.is_half_integral:
            raise DimensionMismatchException(f"{label} is not an integral spin level")
        validate_killing_number(ModelSpace.S3, mu)
        return list(killing_service.generate(ModelSpace.S3, label, mu).fields)

    def integral_checks(self,
                        label: SpinLabel,
                        points: list[Point],
                        tolerance: float,
                        rng: np.random.Generator) -> list[IdentityCheck]:
        checks = self.embedding_checks(label, tolerance)
        family = []
        for mu, name in ((0.5, "left"), (-0.5, "right")):
            solutions = self.generate_integral(label, mu)
            family.extend(solutions)
            worst = max(
                killing_service.verify_killing(f, mu, points, tolerance).summary.max_residual
                for f in solutions)
            checks.append(make_check(f"integral.{name}.equation", worst, tolerance,
                                     INTEGRAL, label))
            if label.two_s >= 2:
                k = int(rng.integers(0, label.dim))
                tensor = IntegralSpinTensor(solutions[k])
                checks.extend(
                    self.verify_killing_tensor(tensor, points[:5], tolerance, rng,
                                               f"integral.{name}.killing_tensor",
                                               label).checks)
        if label.two_s >= 2:
            rank = killing_service.family_rank(family, points[:4])
            checks.append(make_check("integral.solution_rank", abs(rank - 2 * label.dim),
                                     0.5, INTEGRAL, label))
        return checks

    def parallel_flat_check(self,
                            label: SpinLabel,
                            tolerance: float | None = None,
                            vector=None) -> VerificationReport:
        """
        Traceless part of V^(x j) for a constant V on flat space: a nonzero
        parallel solution with mu = 0.
        """
        tol = tolerance or settings.ALGEBRA_TOLERANCE
        emb = self.embedding(label)
        j = label.two_s // 2
        v = np.asarray(vector if vector is not None else [1.0, 0.0, 0.0], dtype=complex)
        power = _kron_all([v] * j)
        traceless = emb @ (emb.conj().T @ power)
        field = ConstantField(ModelSpace.R3, label, emb.conj().T @ traceless)
        points = [R3Point(x=np.array(x)) for x in ((0.0, 0.0, 0.0), (0.3, -0.2, 0.1),
                                                   (-1.0, 0.5, 2.0))]
        report = killing_service.verify_killing(field, 0.0, points, tol)
        checks = [
            make_check("parallel.equation", report.summary.max_residual, tol, PARALLEL,
                       label),
            make_check("parallel.nonzero", shortfall(np.linalg.norm(traceless), 1e-3),
                       tol, PARALLEL, label),
        ]
        tensor_report = self.verify_killing_tensor(IntegralSpinTensor(field), points, tol,
                                                   name="parallel.killing_tensor",
                                                   label=label)
        checks.extend(tensor_report.checks)
        if j == 2:
            expected = (np.outer(v, v) - np.dot(v, v) * np.eye(3) / 3.0).reshape(-1)
            checks.append(make_check("parallel.trace_subtraction",
                                     residual(traceless, expected), tol, PARALLEL, label))
        return VerificationReport.build("tensors", checks, PARALLEL)

    # ---------- WEIGHTS ----------

    @staticmethod
    def weight_index(label: SpinLabel, k: int) -> int:
        """Basis index of the weight vector psi_k, k = N, N-2, .., -N."""
        return (label.two_s - k) // 2

    def pair_value(self, label: SpinLabel, phi: np.ndarray, psi: np.ndarray,
                   vectors: list[np.ndarray]) -> complex:
        rep = irrep_service.build_irrep(label)
        return complex(np.vdot(psi, symmetrized_product(tuple(rep.sigma), vectors) @ phi))

    def weight_checks(self,
                      label: SpinLabel,
                      degree: int,
                      tolerance: float | None = None,
                      rng: np.random.Generator | None = None) -> VerificationReport:
        """
        Vanishing for 2m < |k-l|, the (0,H) eigenvalue k-l, the nonzero
        value of K^m_{N,N-2m}(F..F) and its annihilation by (0,E). The (0,X)
        action moves the second spinor slot by -X^*, which is -F for E and
        -H for H.
        """
        tol = tolerance or settings.ALGEBRA_TOLERANCE
        rng = rng or np.random.default_rng(label.two_s * 31 + degree)
        n = label.two_s
        rep = irrep_service.build_irrep(label)
        basis = np.eye(label.dim, dtype=complex)
        weights = list(range(n, -n - 1, -2))
        vectors = []
        for _ in range(degree):
            v = rng.normal(size=3) + 1j * rng.normal(size=3)
            vectors.append(v / np.linalg.norm(v))
        # values[b, a] = K^m(psi_a, psi_b) on the random arguments
        values = symmetrized_product(tuple(rep.sigma), vectors)
        scale = 1.0 + max(n, 1) * float(np.max(np.abs(values)))
        h_moved = values @ rep.h - rep.h.conj().T @ values

        vanishing, h_action = 0.0, 0.0
        for k in weights:
            for l in weights:
                a, b = self.weight_index(label, k), self.weight_index(label, l)
                if 2 * degree < abs(k - l):
                    vanishing = max(vanishing, abs(values[b, a]))
                h_action = max(h_action, abs(h_moved[b, a] - (k - l) * values[b, a]))
        checks = [
            make_check("weights.vanishing", vanishing, tol, WEIGHTS, label, degree),
            make_check("weights.h_action", h_action / scale, tol, WEIGHTS, label, degree),
        ]
        if degree <= n:
            top = basis[0]
            target = basis[self.weight_index(label, n - 2 * degree)]
            f_args = [F_VECTOR] * degree
            value = self.pair_value(label, top, target, f_args)
            checks.append(
                make_check("weights.highest_nonzero", shortfall(abs(value), 1e-6), tol,
                           WEIGHTS, label, degree))
            e_action = np.vdot(target, (values @ rep.e - rep.f.conj().T @ values) @ top)
            checks.append(make_check("weights.highest_weight", abs(e_action) / scale, tol,
                                     WEIGHTS, label, degree))
        return VerificationReport.build("tensors", checks, WEIGHTS)

    # ---------- SYMBOLS ----------

    def symbol_fits(self) -> tuple[dict[str, list[complex]], dict[str, float]]:
        """
        Fitted constants c with symbol = c * model at xi = e_1, e_2, e_3, and
        the worst fit residual, for the curl, gradient and divergence symbols.
        """
        label = SpinLabel(two_s=2)
        u = clifford_service.tensor_decompose(SpinLabel(two_s=0)).block(2).isometry
        rep = irrep_service.build_irrep(label)
        functions = clifford_service.build_clifford(SpinLabel(two_s=0))
        vectors = clifford_service.build_clifford(label)
        frame = np.eye(3)
        constants = {"curl": [], "grad": [], "div": []}
        fit_gap = {"curl": 0.0, "grad": 0.0, "div": 0.0}
        for i in range(3):
            cross = np.array([[np.cross(frame[i], frame[k])[m] for k in range(3)]
                              for m in range(3)])
            symbols = {
                "curl": (u @ (rep.sigma[i] / label.two_s) @ u.conj().T, cross),
                "grad": (u @ functions.raise_maps[i], frame[:, [i]]),
                "div": (vectors.lower_maps[i] @ u.conj().T, frame[[i], :]),
            }
            for name, (symbol, model) in symbols.items():
                c = complex(np.vdot(model, symbol) / np.vdot(model, model))
                constants[name].append(c)
                fit_gap[name] = max(fit_gap[name], residual(symbol, c * model))
        return constants, fit_gap

    def d1_symbol_check(self, tolerance: float | None = None) -> VerificationReport:
        """
        On vector fields (twoS = 2) the same-level symbol is a multiple of the
        curl symbol; from functions the raise symbol is a multiple of xi and
        the lower symbol contracts with xi. Constants are logged, not asserted.
        """
        tol = tolerance or settings.ALGEBRA_TOLERANCE
        constants, fit_gap = self.symbol_fits()
        checks = []
        for name, values in constants.items():
            spread = max(abs(c - values[0]) for c in values)
            checks.append(make_check(f"d1_symbol.{name}", fit_gap[name] + spread, tol,
                                     SYMBOL, 2))
            logger.info(f"Symbol constant for {name}: {values[0]:.6g}")
        return VerificationReport.build("tensors", checks, SYMBOL)

    # ---------- SUITE ----------

    def run_level(self, label: SpinLabel, tolerance: float, samples: int,
                  rng: np.random.Generator, max_degree: int = 4) -> list[IdentityCheck]:
        points = geometry_service.sample_points(ModelSpace.S3, rng, samples)
        checks: list[IdentityCheck] = []
        if label.is_half_integral:
            for degree in range(0, label.two_s + 2):
                checks.extend(self.weight_checks(label, degree, tolerance, rng).checks)
            for degree in range(0, max_degree + 1):
                checks.extend(
                    self.spinor_tensor_checks(label, degree, points, tolerance, rng))
        else:
            checks.extend(self.integral_checks(label, points, tolerance, rng))
            if label.two_s >= 2:
                checks.extend(self.parallel_flat_check(label, tolerance).checks)
        logger.info(f"Tensor checks at {label}: {len(checks)} rows")
        return checks


tensor_service = TensorService()
