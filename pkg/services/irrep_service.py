from functools import lru_cache

import numpy as np
from scipy.linalg import expm

# --- Project Imports ---
from core.config import settings
from core.linalg import commutator, residual
from core.logger import logger
from models.common import BasisConvention, SpinLabel
from models.geometry import S3Point
from models.report import IdentityCheck
from models.representation import RepMatrices
from services.helpers import make_check

PROVENANCE = "finite-dimensional irreducible representations of su(2)"


# ---------- CACHED CONSTRUCTION ----------


def _ladder_entries(two_s: int) -> np.ndarray:
    """k(N+1-k) for k = 1..N"""
    k = np.arange(1, two_s + 1)
    return (k * (two_s + 1 - k)).astype(float)


@lru_cache(maxsize=256)
def _build(two_s: int, basis: BasisConvention) -> RepMatrices:
    size = two_s + 1
    h = np.diag(np.arange(two_s, -two_s - 1, -2)).astype(complex)
    e = np.zeros((size, size), dtype=complex)
    f = np.zeros((size, size), dtype=complex)
    entries = _ladder_entries(two_s)
    if basis == BasisConvention.UNITARY:
        roots = np.sqrt(entries)
        e[np.arange(two_s), np.arange(1, size)] = roots
        f[np.arange(1, size), np.arange(two_s)] = roots
    else:
        e[np.arange(two_s), np.arange(1, size)] = entries
        f[np.arange(1, size), np.arange(two_s)] = 1.0
    sigma = (1j * h, e - f, 1j * (e + f))
    for m in (h, e, f, *sigma):
        m.setflags(write=False)
    return RepMatrices(label=SpinLabel(two_s=two_s),
                       basis=basis,
                       h=h,
                       e=e,
                       f=f,
                       sigma=sigma)


@lru_cache(maxsize=4096)
def _group_element(two_s: int, basis: BasisConvention, key: bytes) -> np.ndarray:
    g = np.frombuffer(key, dtype=complex).reshape(2, 2)
    a0, a1 = g[0, 0].real, g[0, 0].imag
    a2, a3 = g[0, 1].real, g[0, 1].imag
    axis = np.array([a1, a2, a3])
    length = float(np.linalg.norm(axis))
    theta = float(np.arctan2(length, a0))
    direction = axis / length if length > 1e-15 else np.array([1.0, 0.0, 0.0])
    rep = _build(two_s, basis)
    generator = sum(theta * direction[i] * rep.sigma[i] for i in range(3))
    return expm(generator)


class IrrepService:
    """Builds and manipulates the irreducible su(2) representations"""

    def build_irrep(
            self,
            label: SpinLabel,
            basis: BasisConvention = BasisConvention.UNITARY) -> RepMatrices:
        """
        Representation matrices for doubled highest weight ``label.two_s``.

        Basis vector 0 is the highest weight vector; weights decrease by 2.
        """
        return _build(label.two_s, basis)

    def casimir_check(self, rep: RepMatrices) -> complex:
        """
        Scalar c with sum_i sigma_i^2 = c * Id.

        The returned value is the trace average; use ``casimir_residual`` to
        see how far the sum is from being scalar.
        """
        total = sum(s @ s for s in rep.sigma)
        return complex(np.trace(total) / rep.dim)

    def casimir_residual(self, rep: RepMatrices) -> float:
        total = sum(s @ s for s in rep.sigma)
        c = self.casimir_check(rep)
        return residual(total, c * np.eye(rep.dim))

    def rep_of_vector(self, rep: RepMatrices, x) -> np.ndarray:
        """pi(X) = sum_i x_i sigma_i, complex-linear in x."""
        x = np.asarray(x)
        out = np.zeros((rep.dim, rep.dim), dtype=complex)
        for i in range(3):
            if x[i] != 0:
                out = out + x[i] * rep.sigma[i]
        return out

    def change_basis(
            self, rep: RepMatrices,
            target: BasisConvention) -> tuple[RepMatrices, np.ndarray]:
        """
        Conjugate ``rep`` into ``target``.

        Returns:
            Tuple of (new representation, P) with new = P^-1 * old * P for
            every generator; P is diagonal.
        """
        two_s = rep.label.two_s
        if rep.basis == target:
            return rep, np.eye(rep.dim, dtype=complex)
        scale = np.concatenate(([1.0], np.cumprod(np.sqrt(_ladder_entries(two_s)))))
        if target == BasisConvention.UNITARY:
            scale = 1.0 / scale
        p = np.diag(scale).astype(complex)
        p_inv = np.diag(1.0 / scale).astype(complex)

        def conj(m: np.ndarray) -> np.ndarray:
            return p_inv @ m @ p

        converted = RepMatrices(label=rep.label,
                                basis=target,
                                h=conj(rep.h),
                                e=conj(rep.e),
                                f=conj(rep.f),
                                sigma=tuple(conj(s) for s in rep.sigma))
        logger.debug(f"Changed basis of {rep.label} to {target.value}")
        return converted, p

    def group_element(self, rep: RepMatrices, point: S3Point) -> np.ndarray:
        """pi(g) for g in SU(2), through g = exp(theta * n.sigma)."""
        return _group_element(rep.label.two_s, rep.basis, point.key)

    def inverse_element(self, rep: RepMatrices, point: S3Point) -> np.ndarray:
        """pi(g^-1)"""
        return _group_element(rep.label.two_s, rep.basis,
                              point.inverse.tobytes())

    def verify_irrep(self,
                     label: SpinLabel,
                     basis: BasisConvention,
                     tolerance: float | None = None) -> list[IdentityCheck]:
        """Commutator, Pauli, Casimir and skewness checks for one label."""
        tol = tolerance or settings.ALGEBRA_TOLERANCE
        rep = self.build_irrep(label, basis)
        h, e, f = rep.h, rep.e, rep.f
        s1, s2, s3 = rep.sigma
        n = label.two_s
        checks = [
            make_check("irrep.bracket_HE", residual(commutator(h, e), 2 * e),
                       tol, PROVENANCE, label),
            make_check("irrep.bracket_HF", residual(commutator(h, f), -2 * f),
                       tol, PROVENANCE, label),
            make_check("irrep.bracket_EF", residual(commutator(e, f), h), tol,
                       PROVENANCE, label),
            make_check("irrep.sigma_from_HEF",
                       residual(s1, 1j * h) + residual(s2, e - f) +
                       residual(s3, 1j * (e + f)), tol, PROVENANCE, label),
            make_check(
                "irrep.pauli_brackets",
                residual(commutator(s1, s2), 2 * s3) +
                residual(commutator(s2, s3), 2 * s1) +
                residual(commutator(s3, s1), 2 * s2), tol, PROVENANCE, label),
            make_check(
                "irrep.casimir",
                self.casimir_residual(rep) +
                abs(self.casimir_check(rep) + n * (n + 2)), tol,
                "action of the Casimir element: sum sigma_i^2 = -N(N+2)",
                label),
        ]
        if basis == BasisConvention.UNITARY:
            checks.append(
                make_check("irrep.skew_hermitian",
                           sum(residual(s + s.conj().T) for s in rep.sigma),
                           tol, PROVENANCE, label))
        return checks


irrep_service = IrrepService()
