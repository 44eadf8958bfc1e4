from functools import lru_cache
from math import sqrt

import numpy as np

# --- Project Imports ---
from core.config import settings
from core.exceptions import DecompositionException, DimensionMismatchException
from core.linalg import FRAME, adjoint_matrices, normalize_phase, residual
from core.logger import logger
from models.common import BasisConvention, SpinLabel
from models.report import IdentityCheck, VerificationReport
from models.representation import (CliffordTriple, DecompositionBlock,
                                   TensorDecomposition)
from services.helpers import make_check
from services.irrep_service import irrep_service

P_RELATIONS = "relations of the Clifford homomorphisms p_lambda (n=3 blocks)"
NORMALIZATION = "normalized Clifford homomorphisms pi, pi^+, pi^-"


# ---------- NORMALIZATION CONSTANTS ----------


def raise_scale(two_s: int) -> float:
    """pi^+ = raise_scale * p^+"""
    return sqrt(2.0 * (two_s + 1) / (two_s + 2))


def lower_scale(two_s: int) -> float:
    """pi^- = lower_scale * p^-"""
    return sqrt(2.0 * (two_s + 1) / two_s)


def same_scale(two_s: int) -> float:
    """pi = same_scale * p"""
    return sqrt(two_s * (two_s + 2.0))


# ---------- TENSOR PRODUCT ----------


def tensor_generators(two_s: int) -> list[np.ndarray]:
    """sigma_i acting on W (x) C^3, index a*3 + i"""
    rep = irrep_service.build_irrep(SpinLabel(two_s=two_s))
    ad = adjoint_matrices()
    eye_w = np.eye(two_s + 1)
    eye_3 = np.eye(3)
    return [
        np.kron(rep.sigma[i], eye_3) + np.kron(eye_w, ad[i]) for i in range(3)
    ]


def slot_embedding(two_s: int, i: int) -> np.ndarray:
    """phi -> phi (x) e_i as a (3(N+1)) x (N+1) matrix"""
    return np.kron(np.eye(two_s + 1), FRAME[:, [i]])


@lru_cache(maxsize=128)
def _decompose(two_s: int) -> TensorDecomposition:
    generators = tensor_generators(two_s)
    casimir = sum(t @ t for t in generators)
    values, vectors = np.linalg.eigh(casimir)
    weight_op = -1j * generators[0]
    lowering = -0.5 * (generators[1] + 1j * generators[2])

    expected = [two_s + 2]
    if two_s >= 1:
        expected.append(two_s)
    if two_s >= 2:
        expected.append(two_s - 2)

    blocks = []
    for m in expected:
        target = -float(m * (m + 2))
        mask = np.abs(values - target) < settings.CLUSTER_TOLERANCE * max(1.0, abs(target))
        if int(np.sum(mask)) != m + 1:
            raise DecompositionException(
                f"twoS={two_s}: eigenvalue {target} has multiplicity "
                f"{int(np.sum(mask))}, expected {m + 1}")
        space = vectors[:, mask]
        local = space.conj().T @ weight_op @ space
        local = 0.5 * (local + local.conj().T)
        _, local_vectors = np.linalg.eigh(local)
        top = normalize_phase(space @ local_vectors[:, -1])
        columns = [top / np.linalg.norm(top)]
        for k in range(1, m + 1):
            columns.append(lowering @ columns[-1] / sqrt(k * (m + 1 - k)))
        isometry = np.column_stack(columns)
        blocks.append(
            DecompositionBlock(component=SpinLabel(two_s=m),
                               isometry=isometry,
                               casimir=target))
    if sum(b.component.dim for b in blocks) != 3 * (two_s + 1):
        raise DecompositionException(f"twoS={two_s}: blocks do not span")
    logger.debug(f"Decomposed twoS={two_s} into {[b.component.two_s for b in blocks]}")
    return TensorDecomposition(label=SpinLabel(two_s=two_s), blocks=blocks)


@lru_cache(maxsize=256)
def _raise_maps(two_s: int, phase: float) -> tuple[np.ndarray, ...]:
    block = _decompose(two_s).block(two_s + 2)
    u_star = block.isometry.conj().T
    factor = raise_scale(two_s) * np.exp(1j * phase)
    return tuple(factor * (u_star @ slot_embedding(two_s, i)) for i in range(3))


@lru_cache(maxsize=256)
def _build(two_s: int, phases: tuple[tuple[int, float], ...]) -> CliffordTriple:
    table = dict(phases)
    rep = irrep_service.build_irrep(SpinLabel(two_s=two_s))
    raise_maps = _raise_maps(two_s, table.get(two_s, 0.0))
    lower_maps = None
    if two_s >= 2:
        below = _raise_maps(two_s - 2, table.get(two_s - 2, 0.0))
        lower_maps = tuple(-m.conj().T for m in below)
    return CliffordTriple(label=SpinLabel(two_s=two_s),
                          same_level=tuple(rep.sigma),
                          raise_maps=raise_maps,
                          lower_maps=lower_maps)


class CliffordService:
    """Tensor decompositions and the Clifford homomorphisms built from them"""

    def tensor_decompose(self, label: SpinLabel) -> TensorDecomposition:
        """
        Split W (x) C^3 into Casimir eigenspaces labelled N+2, N, N-2.

        Raises:
            DecompositionException: If multiplicities contradict Clebsch-Gordan.
        """
        return _decompose(label.two_s)

    def build_clifford(self,
                       label: SpinLabel,
                       phases: dict[int, float] | None = None) -> CliffordTriple:
        """
        Clifford triple at ``label``; ``phases`` optionally rotates the raise
        map of a level by exp(i*phase), the lower map follows by adjoint.
        """
        key = tuple(sorted((phases or {}).items()))
        return _build(label.two_s, key)

    def apply(self, maps: tuple[np.ndarray, ...], x) -> np.ndarray:
        """Linear extension of e_i -> maps[i] to a (complex) vector x."""
        out = np.zeros_like(maps[0], dtype=complex)
        for i in range(3):
            if x[i] != 0:
                out = out + x[i] * maps[i]
        return out

    def p_maps(self, two_s: int, component: int) -> tuple[np.ndarray, ...] | None:
        """Un-normalized p-maps of level ``two_s`` into block ``component``."""
        triple = self.build_clifford(SpinLabel(two_s=two_s))
        if component == two_s + 2:
            return tuple(m / raise_scale(two_s) for m in triple.raise_maps)
        if component == two_s and two_s >= 1:
            return tuple(m / same_scale(two_s) for m in triple.same_level)
        if component == two_s - 2 and triple.has_lower:
            return tuple(m / lower_scale(two_s) for m in triple.lower_maps)
        return None

    def decomposition_checks(self, label: SpinLabel,
                             tolerance: float) -> list[IdentityCheck]:
        decomposition = self.tensor_decompose(label)
        generators = tensor_generators(label.two_s)
        casimir = sum(t @ t for t in generators)
        size = 3 * label.dim
        projector = np.zeros((size, size), dtype=complex)
        checks = []
        for block in decomposition.blocks:
            u = block.isometry
            m = block.component
            rep = irrep_service.build_irrep(m)
            projector = projector + u @ u.conj().T
            checks.append(
                make_check(f"decompose.isometry[{m.two_s}]",
                           residual(u.conj().T @ u, np.eye(m.dim)), tolerance,
                           "decomposition into three irreducible components",
                           label))
            checks.append(
                make_check(f"decompose.casimir_eigenspace[{m.two_s}]",
                           residual(casimir @ u, block.casimir * u), tolerance,
                           "decomposition into three irreducible components",
                           label))
            checks.append(
                make_check(
                    f"decompose.intertwines[{m.two_s}]",
                    sum(
                        residual(generators[i] @ u, u @ rep.sigma[i])
                        for i in range(3)), tolerance,
                    "decomposition into three irreducible components", label))
        checks.append(
            make_check("decompose.span", residual(projector, np.eye(size)),
                       tolerance,
                       "decomposition into three irreducible components",
                       label))
        return checks

    def verify_p_relations(self,
                           label: SpinLabel,
                           tolerance: float | None = None,
                           rng: np.random.Generator | None = None) -> VerificationReport:
        """
        Projection relations of the p-maps for every block of ``label``:
        sum p* p is the dimension ratio, sum p p* the identity, and the maps
        into and out of a block are minus adjoints up to sqrt of that ratio.
        """
        tol = tolerance or settings.ALGEBRA_TOLERANCE
        rng = rng or np.random.default_rng(label.two_s)
        n = label.two_s
        checks = []
        x = rng.normal(size=3)
        for component in (n + 2, n, n - 2):
            p = self.p_maps(n, component)
            if p is None:
                continue
            ratio = (component + 1) / (n + 1)
            lhs1 = sum(m.conj().T @ m for m in p)
            lhs2 = sum(m @ m.conj().T for m in p)
            checks.append(
                make_check(f"p_relations.sum_pstar_p[{component}]",
                           residual(lhs1, ratio * np.eye(n + 1)), tol, P_RELATIONS,
                           label))
            checks.append(
                make_check(f"p_relations.sum_p_pstar[{component}]",
                           residual(lhs2, np.eye(component + 1)), tol, P_RELATIONS,
                           label))
            back = self.p_maps(component, n)
            if back is None:
                continue
            adjoint = sum(
                residual(p[i].conj().T, -sqrt(ratio) * back[i])
                for i in range(3))
            adjoint += residual(
                self.apply(p, x).conj().T, -sqrt(ratio) * self.apply(back, x))
            checks.append(
                make_check(f"p_relations.adjoint[{component}]", adjoint, tol, P_RELATIONS,
                           label))
        return VerificationReport.build(suite="clifford",
                                        checks=checks,
                                        provenance=P_RELATIONS)

    def structure_checks(self,
                         label: SpinLabel,
                         tolerance: float | None = None,
                         rng: np.random.Generator | None = None) -> list[IdentityCheck]:
        """Adjoint pinning, equivariance, Schur vanishing, phase insensitivity."""
        tol = tolerance or settings.ALGEBRA_TOLERANCE
        rng = rng or np.random.default_rng(label.two_s)
        n = label.two_s
        triple = self.build_clifford(label)
        upper = self.build_clifford(label.shifted(2))
        rep = irrep_service.build_irrep(label)
        rep_up = irrep_service.build_irrep(label.shifted(2))
        checks = []

        if any(m.shape != (n + 1, n + 1) for m in triple.same_level):
            raise DimensionMismatchException(f"same-level maps at {label}")
        x = rng.normal(size=3)
        pinning = sum(
            residual(triple.raise_maps[i].conj().T, -upper.lower_maps[i])
            for i in range(3))
        pinning += residual(
            self.apply(triple.raise_maps, x).conj().T,
            -self.apply(upper.lower_maps, x))
        checks.append(
            make_check("clifford.adjoint_pinning", pinning, tol, NORMALIZATION,
                       label))

        ad = adjoint_matrices()
        generators = {
            "H": (rep.h, rep_up.h, -1j * ad[0]),
            "E": (rep.e, rep_up.e, 0.5 * (ad[1] - 1j * ad[2])),
            "F": (rep.f, rep_up.f, -0.5 * (ad[1] + 1j * ad[2])),
        }
        for name, (a_low, a_up, a_vec) in generators.items():
            total = 0.0
            for i in range(3):
                lhs = a_up @ triple.raise_maps[i] - triple.raise_maps[i] @ a_low
                total += residual(lhs, self.apply(triple.raise_maps, a_vec[:, i]))
            checks.append(
                make_check(f"clifford.equivariance[{name}]", total, tol,
                           NORMALIZATION, label))

        schur = residual(
            sum(triple.raise_maps[i] @ triple.same_level[i] for i in range(3)))
        if triple.has_lower:
            schur += residual(
                sum(triple.lower_maps[i] @ triple.same_level[i]
                    for i in range(3)))
        checks.append(
            make_check("clifford.schur_vanishing", schur, tol,
                       "Killing spinors lie in ker T^+ and ker T^-", label))

        phases = {m: float(rng.uniform(0, 2 * np.pi)) for m in (n - 2, n, n + 2) if m >= 0}
        rotated = self.build_clifford(label, phases)
        rotated_up = self.build_clifford(label.shifted(2), phases)
        drift = 0.0
        for k in range(3):
            for l in range(3):
                drift += residual(
                    upper.lower_maps[k] @ triple.raise_maps[l],
                    rotated_up.lower_maps[k] @ rotated.raise_maps[l])
                if triple.has_lower:
                    below = self.build_clifford(label.shifted(-2))
                    rotated_below = self.build_clifford(label.shifted(-2), phases)
                    drift += residual(
                        below.raise_maps[k] @ triple.lower_maps[l],
                        rotated_below.raise_maps[k] @ rotated.lower_maps[l])
        checks.append(
            make_check("clifford.phase_insensitive", drift, tol, NORMALIZATION,
                       label))
        return checks


clifford_service = CliffordService()
