import numpy as np
from scipy.integrate import solve_ivp

# --- Project Imports ---
from core.config import settings
from core.linalg import commutator, residual, wedge4
from core.logger import logger
from models.common import Chirality, ModelSpace, SpinLabel
from models.geometry import ConePoint, S3Point, So4Splitting
from models.report import IdentityCheck, VerificationReport
from services.geometry_service import geometry_service
from services.helpers import make_check, relative, shortfall, validate_killing_number
from services.irrep_service import irrep_service
from services.killing_service import killing_service
from services.spinor_fields import SpinorField, TransformedField

SPLITTING = "so(4) = so(3) + so(3) through self-dual and anti-self-dual 2-forms"
CONE = "Levi-Civita connection of the cone r^2 g + dr^2 on pulled-back spinors"
PARALLEL = "Killing spinors on S^3 are parallel spinors on the cone"

# chirality of the pulled-back bundle that carries each Killing number
CHIRALITY_OF_MU = {0.5: Chirality.SELF_DUAL, -0.5: Chirality.ANTI_SELF_DUAL}

# the restriction to r = 1 is checked by central differences of its values
RESTRICTION_STEP = 1e-5
RESTRICTION_TOLERANCE = 1e-6


def _splitting() -> So4Splitting:
    pairs = (((1, 2), (0, 3)), ((2, 0), (1, 3)), ((0, 1), (2, 3)))
    sd = tuple(wedge4(*a) + wedge4(*b) for a, b in pairs)
    asd = tuple(wedge4(*a) - wedge4(*b) for a, b in pairs)
    return So4Splitting(sd_basis=sd, asd_basis=asd)


SPLITTING_BASIS = _splitting()


class ConeService:
    """Bookkeeping of the cone over S^3 and its pulled-back spinor bundles"""

    def so4_splitting(self) -> So4Splitting:
        return SPLITTING_BASIS

    def bivector_action(self, omega: np.ndarray, label: SpinLabel,
                        chirality: Chirality) -> np.ndarray:
        """
        Action of a 4x4 skew matrix on W_j through one so(3) factor: the
        matching triple acts by the sigma's, the other one by zero.
        """
        rep = irrep_service.build_irrep(label)
        triple = (SPLITTING_BASIS.sd_basis if chirality == Chirality.SELF_DUAL else
                  SPLITTING_BASIS.asd_basis)
        out = np.zeros((label.dim, label.dim), dtype=complex)
        for a, basis in enumerate(triple):
            weight = np.sum(omega * basis) / np.sum(basis * basis)
            if weight != 0:
                out = out + weight * rep.sigma[a]
        return out

    def cone_christoffel(self, r: float) -> np.ndarray:
        """
        gamma[b, k, l] = g(nabla_{X_b} X_k, X_l) in the frame X_k = e_k / r
        (k < 3), X_3 = d_r, from nabla_X Y = nabla^g_X Y - r g(X, Y) d_r and
        nabla_X d_r = X / r.
        """
        base = geometry_service.levi_civita_table(ModelSpace.S3)
        gamma = np.zeros((4, 4, 4))
        for b in range(3):
            for k in range(3):
                for l in range(3):
                    gamma[b, k, l] = base[b, k, l] / r
                gamma[b, k, 3] = -float(b == k) / r
                gamma[b, 3, k] = float(b == k) / r
        return gamma

    def cone_connection_coefficient(self,
                                    point: ConePoint,
                                    b: int,
                                    label: SpinLabel,
                                    chirality: Chirality = Chirality.SELF_DUAL
                                    ) -> np.ndarray:
        """
        Net connection matrix A_b with nabla_{X_b} = (1/r)(e_b + A_b) for the
        base directions b < 3, and nabla_{d_r} = d_r + A_3.
        """
        gamma = self.cone_christoffel(point.r)
        out = np.zeros((label.dim, label.dim), dtype=complex)
        for k in range(4):
            for l in range(4):
                if gamma[b, k, l] != 0:
                    out = out + 0.5 * gamma[b, k, l] * self.bivector_action(
                        wedge4(k, l), label, chirality)
        return out * point.r if b < 3 else out

    def cone_covariant(self, field: SpinorField, point: ConePoint, b: int,
                       chirality: Chirality) -> np.ndarray:
        """Covariant derivative of the r-independent pullback of ``field``."""
        coefficient = self.cone_connection_coefficient(point, b, field.label, chirality)
        phi = field.value(point.base)
        if b == 3:
            return coefficient @ phi
        return (field.derivative(b).value(point.base) + coefficient @ phi) / point.r

    def sample_cone_points(self, rng: np.random.Generator, count: int) -> list[ConePoint]:
        bases = geometry_service.sample_points(ModelSpace.S3, rng, count)
        return [ConePoint(base=p, r=10.0**rng.uniform(-1, 1)) for p in bases]

    def radial_transport(self,
                         label: SpinLabel,
                         chirality: Chirality,
                         r_from: float,
                         r_to: float = 1.0) -> np.ndarray:
        """Parallel transport along the ray t -> (x, t) from r_from to r_to."""
        dim = label.dim
        start = np.eye(dim, dtype=complex)
        if r_from == r_to:
            return start

        def rhs(r: float, y: np.ndarray) -> np.ndarray:
            point = ConePoint(base=S3Point.identity(), r=r)
            radial = self.cone_connection_coefficient(point, 3, label, chirality)
            return -(radial @ y.reshape(dim, dim)).reshape(-1)

        solution = solve_ivp(rhs, (r_from, r_to), start.reshape(-1), method="DOP853",
                             rtol=1e-12, atol=1e-14)
        if not solution.success:
            raise ValueError(f"radial transport failed: {solution.message}")
        return solution.y[:, -1].reshape(dim, dim)

    def slice_killing_residual(self, field: SpinorField, mu: float, point: S3Point) -> float:
        """Killing residual of a slice r = 1 from central differences of its values only."""
        phi = field.value(point)
        sigma = field.rep.sigma
        worst = 0.0
        for i in range(3):
            slope = geometry_service.fd_oracle(field, point, i, RESTRICTION_STEP)
            worst = max(worst, relative(slope - mu * sigma[i] @ phi, phi))
        return worst

    # ---------- CHECKS ----------

    def verify_so4_splitting(self,
                             label: SpinLabel | None = None,
                             tolerance: float | None = None,
                             rng: np.random.Generator | None = None
                             ) -> VerificationReport:
        tol = tolerance or settings.ALGEBRA_TOLERANCE
        label = label or SpinLabel(two_s=1)
        rng = rng or np.random.default_rng(label.two_s)
        sd, asd = SPLITTING_BASIS.sd_basis, SPLITTING_BASIS.asd_basis
        stacked = np.array([m.reshape(-1) for m in sd + asd])
        commute = sum(residual(commutator(a, b)) for a in sd for b in asd)
        brackets = 0.0
        for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            brackets += residual(commutator(sd[a], sd[b]), 2 * sd[c])
            brackets += residual(commutator(asd[a], asd[b]), 2 * asd[c])
        rep = irrep_service.build_irrep(label)
        action = 0.0
        dead = 0.0
        for chirality, own, other in ((Chirality.SELF_DUAL, sd, asd),
                                      (Chirality.ANTI_SELF_DUAL, asd, sd)):
            for a in range(3):
                action += residual(self.bivector_action(own[a], label, chirality),
                                   rep.sigma[a])
                dead += residual(self.bivector_action(other[a], label, chirality))
        homomorphism = 0.0
        for _ in range(5):
            w1, w2 = (rng.normal(size=(4, 4)) for _ in range(2))
            w1, w2 = w1 - w1.T, w2 - w2.T
            for chirality in Chirality:
                p1 = self.bivector_action(w1, label, chirality)
                p2 = self.bivector_action(w2, label, chirality)
                homomorphism += residual(
                    self.bivector_action(commutator(w1, w2), label, chirality),
                    commutator(p1, p2))
        checks = [
            make_check("so4.span", abs(np.linalg.matrix_rank(stacked) - 6), 0.5,
                       SPLITTING),
            make_check("so4.factors_commute", commute, tol, SPLITTING),
            make_check("so4.brackets", brackets, tol, SPLITTING),
            make_check("so4.factor_action", action, tol, SPLITTING, label),
            make_check("so4.other_factor_zero", dead, tol, SPLITTING, label),
            make_check("so4.homomorphism", homomorphism, tol, SPLITTING, label),
        ]
        return VerificationReport.build("cone", checks, SPLITTING)

    def connection_checks(self,
                          label: SpinLabel,
                          tolerance: float | None = None,
                          radii: tuple[float, ...] = (0.1, 1.0, 7.5)
                          ) -> list[IdentityCheck]:
        """The coefficient is r-independent and equals C_b -/+ 1/2 pi(e_b)."""
        tol = tolerance or settings.ALGEBRA_TOLERANCE
        base = geometry_service.connection(ModelSpace.S3, label)
        sigma = irrep_service.build_irrep(label).sigma
        checks = []
        for chirality, sign in ((Chirality.SELF_DUAL, -0.5),
                                (Chirality.ANTI_SELF_DUAL, 0.5)):
            formula, radial, drift = 0.0, 0.0, 0.0
            for b in range(3):
                reference = None
                for r in radii:
                    point = ConePoint(base=S3Point.identity(), r=r)
                    coefficient = self.cone_connection_coefficient(point, b, label,
                                                                   chirality)
                    if reference is None:
                        reference = coefficient
                    drift = max(drift, residual(coefficient, reference))
                formula += residual(reference, base[b] + sign * sigma[b])
            for r in radii:
                point = ConePoint(base=S3Point.identity(), r=r)
                radial += residual(self.cone_connection_coefficient(point, 3, label,
                                                                    chirality))
            name = chirality.value
            checks.extend([
                make_check(f"cone.{name}.coefficient_formula", formula, tol, CONE, label),
                make_check(f"cone.{name}.r_independent", drift, tol, CONE, label),
                make_check(f"cone.{name}.radial_zero", radial, tol, CONE, label),
            ])
        return checks

    def verify_cone_parallel(self,
                             label: SpinLabel,
                             mu: float,
                             points: list[ConePoint],
                             tolerance: float | None = None) -> VerificationReport:
        """
        Pullbacks of the Killing spinors with Killing number ``mu`` are
        parallel on the matching chirality, not on the other one; restricting
        the parallel pullback to r = 1 returns a Killing spinor.

        Raises:
            InadmissibleKillingNumberException: If mu is not +1/2 or -1/2.
        """
        tol = tolerance or settings.ALGEBRA_TOLERANCE
        mu = validate_killing_number(ModelSpace.S3, mu).real
        own = CHIRALITY_OF_MU[mu]
        other = (Chirality.ANTI_SELF_DUAL
                 if own == Chirality.SELF_DUAL else Chirality.SELF_DUAL)
        basis = killing_service.generate(ModelSpace.S3, label, mu)
        parallel, radial, wrong = 0.0, 0.0, 0.0
        for field in basis.fields:
            for p in points:
                phi = field.value(p.base)
                for b in range(3):
                    parallel = max(parallel,
                                   relative(self.cone_covariant(field, p, b, own), phi))
                    wrong = max(wrong,
                                relative(self.cone_covariant(field, p, b, other), phi))
                radial = max(radial, relative(self.cone_covariant(field, p, 3, own), phi))
        restricted = 0.0
        for p in points:
            transport = self.radial_transport(label, own, p.r)
            for field in basis.fields:
                sliced = TransformedField(transport, field)
                restricted = max(restricted, self.slice_killing_residual(sliced, mu, p.base))
        name = own.value
        checks = [
            make_check(f"cone.{name}.parallel", parallel, tol, PARALLEL, label),
            make_check(f"cone.{name}.radial", radial, tol, PARALLEL, label),
            make_check(f"cone.{name}.restriction_is_killing", restricted,
                       max(tol, RESTRICTION_TOLERANCE), PARALLEL, label),
            make_check(f"cone.{name}.wrong_chirality_fails", shortfall(wrong, 1e-3), tol,
                       PARALLEL, label),
        ]
        logger.debug(f"Cone checks for mu={mu} at {label}: parallel={parallel:.3g}")
        return VerificationReport.build("cone", checks, PARALLEL)

    def run_level(self, label: SpinLabel, tolerance: float, samples: int,
                  rng: np.random.Generator) -> list[IdentityCheck]:
        checks = self.connection_checks(label, tolerance)
        points = self.sample_cone_points(rng, samples)
        for mu in (0.5, -0.5):
            checks.extend(self.verify_cone_parallel(label, mu, points, tolerance).checks)
        return checks


cone_service = ConeService()
