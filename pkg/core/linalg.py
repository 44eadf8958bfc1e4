"""
Small dense-matrix helpers shared by the representation, geometry and
verification services.
"""
from math import factorial

import numpy as np

# ---------- CONSTANTS ----------

EPSILON = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    EPSILON[_i, _j, _k] = 1.0
    EPSILON[_j, _i, _k] = -1.0

FRAME = np.eye(3)


# ---------- MATRIX HELPERS ----------


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def residual(a: np.ndarray, b: np.ndarray | None = None) -> float:
    """Frobenius norm of ``a - b`` (or of ``a`` alone) as a python float."""
    diff = a if b is None else a - b
    return float(np.linalg.norm(diff))


def adjoint_matrices() -> list[np.ndarray]:
    """Matrices of ad(sigma_i) on C^3 in the frame basis: e_k -> 2 eps_{ikm} e_m."""
    return [2.0 * EPSILON[i].T.astype(complex) for i in range(3)]


def bracket_vector(k: int, l: int) -> np.ndarray:
    """Frame components of the su(2) bracket [e_k, e_l] = 2 eps_{klm} e_m."""
    return 2.0 * EPSILON[k, l]


def combine(coefficients: np.ndarray, matrices: list[np.ndarray]) -> np.ndarray:
    """Linear combination sum_i c_i M_i, complex coefficients allowed."""
    out = np.zeros_like(matrices[0], dtype=complex)
    for c, m in zip(coefficients, matrices):
        if c != 0:
            out = out + c * m
    return out


def normalize_phase(vector: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Rotate ``vector`` so its first entry above ``tol`` is positive real."""
    for entry in vector:
        if abs(entry) > tol:
            return vector * (abs(entry) / entry)
    return vector


def nilpotent_exp(matrix: np.ndarray) -> np.ndarray:
    """Exact exponential of a nilpotent matrix by its finite power series."""
    size = matrix.shape[0]
    result = np.eye(size, dtype=complex)
    power = np.eye(size, dtype=complex)
    for k in range(1, size):
        power = power @ matrix
        if not np.any(power):
            break
        result = result + power / factorial(k)
    return result


def numeric_rank(matrix: np.ndarray, tol: float) -> int:
    """Rank after scaling every column to unit norm."""
    if matrix.size == 0:
        return 0
    norms = np.linalg.norm(matrix, axis=0)
    keep = norms > 0
    if not np.any(keep):
        return 0
    scaled = matrix[:, keep] / norms[keep]
    singular = np.linalg.svd(scaled, compute_uv=False)
    return int(np.sum(singular > tol * singular[0]))


def levi_civita_from_structure(structure: np.ndarray) -> np.ndarray:
    """
    Koszul formula for an orthonormal frame with constant structure
    constants ``structure[i, j, k]`` ([e_i, e_j] = c_ij^k e_k).

    Returns:
        gamma[i, k, l] = g(nabla_{e_i} e_k, e_l)
    """
    c = structure
    return 0.5 * (np.einsum("ikl->ikl", c) - np.einsum("kli->ikl", c) +
                  np.einsum("lik->ikl", c))


# ---------- FOUR-DIMENSIONAL BIVECTORS ----------


def wedge4(k: int, l: int) -> np.ndarray:
    """e_k ^ e_l as a 4x4 skew matrix acting by v -> <e_k,v> e_l - <e_l,v> e_k."""
    m = np.zeros((4, 4))
    m[l, k] = 1.0
    m[k, l] = -1.0
    return m
