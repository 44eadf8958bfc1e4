from functools import lru_cache

import numpy as np

# --- Project Imports ---
from core.config import settings
from core.exceptions import SpaceMismatchException
from core.linalg import (EPSILON, bracket_vector, commutator,
                         levi_civita_from_structure, residual)
from core.logger import logger
from models.common import BasisConvention, ModelSpace, SpinLabel
from models.geometry import (ConnectionTerm, FrameSpec, H3Point, R3Point,
                             S3Point)
from models.report import IdentityCheck
from services.helpers import make_check
from services.irrep_service import irrep_service
from services.spinor_fields import Point, SpinorField

CONNECTION = "trivialized spinor connection of the model space frame"
CURVATURE = "curvature action q(R) on constant curvature spaces"


# ---------- FRAME DATA ----------


def _structure(space: ModelSpace) -> np.ndarray:
    c = np.zeros((3, 3, 3))
    if space == ModelSpace.S3:
        c = 2.0 * EPSILON
    elif space == ModelSpace.H3:
        # [e1, e2] = e2, [e1, e3] = e3 for e_i = x1 d_i
        c[0, 1, 1], c[1, 0, 1] = 1.0, -1.0
        c[0, 2, 2], c[2, 0, 2] = 1.0, -1.0
    return c


FRAME_SPECS = {
    ModelSpace.S3:
        FrameSpec(space=ModelSpace.S3,
                  connection_terms=(ConnectionTerm(coefficient=0.5, sigma_index=0),
                                    ConnectionTerm(coefficient=0.5, sigma_index=1),
                                    ConnectionTerm(coefficient=0.5, sigma_index=2)),
                  structure_constants=_structure(ModelSpace.S3),
                  scalar_curvature=6.0),
    ModelSpace.H3:
        FrameSpec(space=ModelSpace.H3,
                  connection_terms=(ConnectionTerm(),
                                    ConnectionTerm(coefficient=-0.5, sigma_index=2),
                                    ConnectionTerm(coefficient=0.5, sigma_index=1)),
                  structure_constants=_structure(ModelSpace.H3),
                  scalar_curvature=-6.0),
    ModelSpace.R3:
        FrameSpec(space=ModelSpace.R3,
                  connection_terms=(ConnectionTerm(), ConnectionTerm(),
                                    ConnectionTerm()),
                  structure_constants=_structure(ModelSpace.R3),
                  scalar_curvature=0.0),
}


@lru_cache(maxsize=8)
def _levi_civita(space: ModelSpace) -> np.ndarray:
    return levi_civita_from_structure(FRAME_SPECS[space].structure_constants)


@lru_cache(maxsize=512)
def _connection(space: ModelSpace, two_s: int,
                basis: BasisConvention) -> tuple[np.ndarray, ...]:
    """C_i = sum_{k<l} Gamma_ikl pi(e_k ^ e_l), pi(e_k ^ e_l) = 1/2 eps_klm sigma_m"""
    gamma = _levi_civita(space)
    rep = irrep_service.build_irrep(SpinLabel(two_s=two_s), basis)
    coefficients = 0.25 * np.einsum("ikl,klm->im", gamma, EPSILON)
    return tuple(
        sum(coefficients[i, m] * rep.sigma[m] for m in range(3)) +
        np.zeros((two_s + 1, two_s + 1), dtype=complex) for i in range(3))


class GeometryService:
    """Frames, connections, curvature and flows of S^3, H^3 and R^3"""

    # ---------- FRAME AND CONNECTION ----------

    def frame_spec(self, space: ModelSpace) -> FrameSpec:
        return FRAME_SPECS[space]

    def levi_civita_table(self, space: ModelSpace) -> np.ndarray:
        """gamma[i, k, l] = g(nabla_{e_i} e_k, e_l) from the Koszul formula."""
        return _levi_civita(space)

    def connection(self,
                   space: ModelSpace,
                   label: SpinLabel,
                   basis: BasisConvention = BasisConvention.UNITARY
                   ) -> tuple[np.ndarray, ...]:
        return _connection(space, label.two_s, basis)

    def tabled_connection(self,
                          space: ModelSpace,
                          label: SpinLabel,
                          basis: BasisConvention = BasisConvention.UNITARY
                          ) -> tuple[np.ndarray, ...]:
        rep = irrep_service.build_irrep(label, basis)
        out = []
        for term in FRAME_SPECS[space].connection_terms:
            matrix = np.zeros((label.dim, label.dim), dtype=complex)
            if term.sigma_index is not None:
                matrix = term.coefficient * rep.sigma[term.sigma_index]
            out.append(matrix)
        return tuple(out)

    # ---------- CURVATURE ----------

    def tangent_curvature(self, space: ModelSpace, k: int, l: int) -> np.ndarray:
        """R(e_k, e_l) acting on frame components of tangent vectors."""
        gamma = _levi_civita(space)
        a = [gamma[b].T for b in range(3)]
        c = FRAME_SPECS[space].structure_constants
        return commutator(a[k], a[l]) - sum(c[k, l, m] * a[m] for m in range(3))

    def ricci(self, space: ModelSpace) -> np.ndarray:
        """Ric[b, c] = sum_a g(R(e_a, e_b) e_c, e_a)"""
        ric = np.zeros((3, 3))
        for a in range(3):
            for b in range(3):
                ric[b] += self.tangent_curvature(space, a, b)[a]
        return ric

    def scalar_curvature(self, space: ModelSpace) -> float:
        return float(np.trace(self.ricci(space)))

    def bundle_curvature(self,
                         space: ModelSpace,
                         label: SpinLabel,
                         k: int,
                         l: int,
                         basis: BasisConvention = BasisConvention.UNITARY
                         ) -> np.ndarray:
        """R(e_k, e_l) = [C_k, C_l] - sum_m c_kl^m C_m for frame-constant C."""
        conn = self.connection(space, label, basis)
        c = FRAME_SPECS[space].structure_constants
        return commutator(conn[k], conn[l]) - sum(
            c[k, l, m] * conn[m] for m in range(3))

    def curvature_qR(self,
                     space: ModelSpace,
                     label: SpinLabel,
                     basis: BasisConvention = BasisConvention.UNITARY
                     ) -> np.ndarray:
        """
        q(R) = (scal/8) N(N+2) Id + 1/4 sum_i pi(e_i) pi(Ric(e_i)), with Ric
        taken from the Levi-Civita data of the frame.
        """
        rep = irrep_service.build_irrep(label, basis)
        n = label.two_s
        ric = self.ricci(space)
        scal = float(np.trace(ric))
        out = (scal / 8.0) * n * (n + 2) * np.eye(label.dim, dtype=complex)
        for i in range(3):
            out = out + 0.25 * rep.sigma[i] @ irrep_service.rep_of_vector(
                rep, ric[i])
        return out

    def curvature_qR_from_brackets(self,
                                   space: ModelSpace,
                                   label: SpinLabel,
                                   basis: BasisConvention = BasisConvention.UNITARY
                                   ) -> np.ndarray:
        """1/8 sum_{k,l} pi([e_k, e_l]) R(e_k, e_l)"""
        rep = irrep_service.build_irrep(label, basis)
        out = np.zeros((label.dim, label.dim), dtype=complex)
        for k in range(3):
            for l in range(3):
                if k == l:
                    continue
                out = out + 0.125 * irrep_service.rep_of_vector(
                    rep, bracket_vector(k, l)) @ self.bundle_curvature(
                        space, label, k, l, basis)
        return out

    def twisted_curvature(self, space: ModelSpace, label: SpinLabel,
                          maps: tuple[np.ndarray, ...]) -> np.ndarray:
        """q^{+/-}(R) = 1/4 sum_{k,l} pi^{+/-}([e_k, e_l]) R(e_k, e_l)"""
        out = np.zeros((maps[0].shape[0], label.dim), dtype=complex)
        for k in range(3):
            for l in range(3):
                if k == l:
                    continue
                bracket = bracket_vector(k, l)
                image = sum(bracket[m] * maps[m] for m in range(3))
                out = out + 0.25 * image @ self.bundle_curvature(space, label, k, l)
        return out

    # ---------- FLOWS AND DERIVATIVES ----------

    def frame_flow(self, space: ModelSpace, point: Point, i: int,
                   t: float) -> Point:
        """Integral curve of the frame field e_i through ``point`` at time t."""
        if space == ModelSpace.S3:
            sigma = irrep_service.build_irrep(SpinLabel(two_s=1)).sigma[i]
            step = np.cos(t) * np.eye(2) + np.sin(t) * sigma
            return S3Point(g=point.g @ step)
        if space == ModelSpace.H3:
            if i == 0:
                return H3Point(x1=point.x1 * np.exp(t), x2=point.x2, x3=point.x3)
            coords = [point.x2, point.x3]
            coords[i - 1] += t * point.x1
            return H3Point(x1=point.x1, x2=coords[0], x3=coords[1])
        shift = np.zeros(3)
        shift[i] = t
        return R3Point(x=point.x + shift)

    def covariant_derivative(self, field: SpinorField, point: Point,
                             i: int) -> np.ndarray:
        """nabla_{e_i} field = e_i(field) + C_i field, from the closed form."""
        conn = self.connection(field.space, field.label, field.basis)
        return field.derivative(i).value(point) + conn[i] @ field.value(point)

    def fd_oracle(self,
                  field: SpinorField,
                  point: Point,
                  i: int,
                  h: float | None = None) -> np.ndarray:
        """Central difference along the frame flow plus the connection term."""
        h = h or settings.FD_STEP
        if h <= 0:
            raise ValueError("finite difference step must be positive")
        forward = field.value(self.frame_flow(field.space, point, i, h))
        backward = field.value(self.frame_flow(field.space, point, i, -h))
        conn = self.connection(field.space, field.label, field.basis)
        return (forward - backward) / (2 * h) + conn[i] @ field.value(point)

    # ---------- SAMPLING ----------

    def sample_points(self, space: ModelSpace, rng: np.random.Generator,
                      count: int) -> list[Point]:
        if space == ModelSpace.S3:
            return [S3Point.from_quaternion(rng.normal(size=4)) for _ in range(count)]
        if space == ModelSpace.H3:
            return [
                H3Point(x1=10.0**rng.uniform(-1, 1),
                        x2=rng.uniform(-5, 5),
                        x3=rng.uniform(-5, 5)) for _ in range(count)
            ]
        return [R3Point(x=rng.uniform(-2, 2, size=3)) for _ in range(count)]

    def rank_points(self, space: ModelSpace, rng: np.random.Generator,
                    count: int) -> list[Point]:
        """Well-conditioned samples for rank computations."""
        if space == ModelSpace.H3:
            return [
                H3Point(x1=2.0**rng.uniform(-1, 1),
                        x2=rng.uniform(-1, 1),
                        x3=rng.uniform(-1, 1)) for _ in range(count)
            ]
        if space == ModelSpace.R3:
            return [R3Point(x=rng.uniform(-1, 1, size=3)) for _ in range(count)]
        return self.sample_points(space, rng, count)

    def check_point(self, space: ModelSpace, point: Point) -> None:
        expected = {ModelSpace.S3: S3Point, ModelSpace.H3: H3Point,
                    ModelSpace.R3: R3Point}[space]
        if not isinstance(point, expected):
            raise SpaceMismatchException(
                f"{type(point).__name__} is not a point of {space.value}")

    # ---------- CHECKS ----------

    def verify_model_space(self,
                           space: ModelSpace,
                           label: SpinLabel,
                           tolerance: float) -> list[IdentityCheck]:
        """Connection table, curvature and q(R) consistency for one label."""
        checks = []
        computed = self.connection(space, label)
        tabled = self.tabled_connection(space, label)
        checks.append(
            make_check(f"geometry.{space.value}.connection_table",
                       sum(residual(a, b) for a, b in zip(computed, tabled)),
                       tolerance, CONNECTION, label))
        expected_scal = FRAME_SPECS[space].scalar_curvature
        checks.append(
            make_check(f"geometry.{space.value}.scalar_curvature",
                       abs(self.scalar_curvature(space) - expected_scal),
                       tolerance, CURVATURE, label))

        rep = irrep_service.build_irrep(label)
        ric = self.ricci(space)
        scal = float(np.trace(ric))
        two_form = 0.0
        for k, l, m in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            formula = (-0.25 * scal * rep.sigma[m] +
                       0.5 * irrep_service.rep_of_vector(rep, ric[m]))
            two_form += residual(self.bundle_curvature(space, label, k, l),
                                 formula)
        checks.append(
            make_check(f"geometry.{space.value}.curvature_two_form", two_form,
                       tolerance, CURVATURE, label))

        q = self.curvature_qR(space, label)
        n = label.two_s
        checks.append(
            make_check(f"geometry.{space.value}.qR_scalar",
                       residual(q, (scal / 24.0) * n * (n + 2) * np.eye(label.dim)),
                       tolerance, CURVATURE, label))
        checks.append(
            make_check(f"geometry.{space.value}.qR_bracket_form",
                       residual(q, self.curvature_qR_from_brackets(space, label)),
                       tolerance, CURVATURE, label))
        logger.debug(f"Model space checks for {space.value} at {label} done")
        return checks


geometry_service = GeometryService()
