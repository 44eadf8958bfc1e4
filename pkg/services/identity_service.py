import numpy as np
import sympy as sp

# --- Project Imports ---
from core.config import settings
from core.linalg import bracket_vector, residual
from core.logger import logger
from models.common import SpinLabel
from models.report import IdentityCheck, VerificationReport
from services.clifford_service import clifford_service
from services.helpers import make_check, shortfall

QUADRATIC = "quadratic identities between pi, pi^+ and pi^-"
SAME_LEVEL = "same-level product identity derived from the quadratic identities"
LINEAR = "identities for linear maps pi_{N+2} pi^+ and pi^- pi"
SYMBOL = "symbols of the Weitzenbock identities for generalized gradients"
OBSTRUCTION = "scalar obstruction to Killing spinors in dimension n >= 4"


class _LevelMaps:
    """Clifford maps around one level, with absent maps left as None"""

    def __init__(self, label: SpinLabel):
        n = label.two_s
        self.n = n
        self.dim = label.dim
        triple = clifford_service.build_clifford(label)
        upper = clifford_service.build_clifford(label.shifted(2))
        self.same = triple.same_level
        self.same_up = upper.same_level
        self.plus = triple.raise_maps
        self.minus_up = upper.lower_maps
        self.minus = triple.lower_maps
        self.plus_down = None
        self.same_down = None
        if triple.has_lower:
            lower = clifford_service.build_clifford(label.shifted(-2))
            self.plus_down = lower.raise_maps
            self.same_down = lower.same_level

    def a(self, k, l):
        return self.minus_up[k] @ self.plus[l]

    def b(self, k, l):
        return self.same[k] @ self.same[l]

    def c(self, k, l):
        if self.minus is None:
            return np.zeros((self.dim, self.dim), dtype=complex)
        return self.plus_down[k] @ self.minus[l]

    def bracket_image(self, maps, k, l):
        return clifford_service.apply(maps, bracket_vector(k, l))


class IdentityService:
    """Algebraic identities between the Clifford homomorphisms"""

    # ---------- COEFFICIENTS ----------

    @staticmethod
    def quadratic_coefficients(n: int) -> tuple[float, float, float]:
        """Coefficients of pi^-pi^+, pi pi and pi^+pi^- in identity (i)."""
        same = 1.0 / (n * (n + 2)) if n >= 1 else 0.0
        return (n + 2) / (2.0 * (n + 1)), same, n / (2.0 * (n + 1))

    def _identity_i(self, maps: _LevelMaps, k, l):
        ca, cb, cc = self.quadratic_coefficients(maps.n)
        lhs = ca * maps.a(k, l) + cb * maps.b(k, l) + cc * maps.c(k, l)
        rhs = -float(k == l) * np.eye(maps.dim)
        return lhs, rhs

    def _identity_ii(self, maps: _LevelMaps, k, l):
        n = maps.n
        ca, cb, cc = self.quadratic_coefficients(n)
        lhs = (-(n / 2.0) * ca * maps.a(k, l) + cb * maps.b(k, l) +
               ((n + 2) / 2.0) * cc * maps.c(k, l))
        rhs = 0.25 * maps.bracket_image(maps.same, k, l)
        return lhs, rhs

    # ---------- OPERATIONS ----------

    def check_quadratic_identities(self,
                                   label: SpinLabel,
                                   tolerance: float | None = None) -> VerificationReport:
        """Both quadratic identities for all (k, l)."""
        tol = tolerance or settings.ALGEBRA_TOLERANCE
        maps = _LevelMaps(label)
        checks = []
        for k in range(3):
            for l in range(3):
                lhs, rhs = self._identity_i(maps, k, l)
                checks.append(
                    make_check("quadratic.identity_i", residual(lhs, rhs), tol,
                               QUADRATIC, label, k + 1, l + 1))
                lhs, rhs = self._identity_ii(maps, k, l)
                checks.append(
                    make_check("quadratic.identity_ii", residual(lhs, rhs), tol,
                               QUADRATIC, label, k + 1, l + 1))
        return VerificationReport.build("identities", checks, QUADRATIC)

    def check_same_level_identity(self,
                                  label: SpinLabel,
                                  tolerance: float | None = None) -> VerificationReport:
        """Same-level product identity, plus its derivation from (i) and (ii)."""
        tol = tolerance or settings.ALGEBRA_TOLERANCE
        n = label.two_s
        if n < 1:
            return VerificationReport.build("identities", [], SAME_LEVEL)
        maps = _LevelMaps(label)
        checks = []
        for k in range(3):
            for l in range(3):
                lhs = maps.b(k, l) / (2.0 * n) + (n / 2.0) * maps.c(k, l)
                rhs = (0.25 * maps.bracket_image(maps.same, k, l) -
                       (n / 2.0) * float(k == l) * np.eye(maps.dim))
                checks.append(
                    make_check("same_level.identity", residual(lhs, rhs), tol,
                               SAME_LEVEL, label, k + 1, l + 1))
                lhs_i, rhs_i = self._identity_i(maps, k, l)
                lhs_ii, rhs_ii = self._identity_ii(maps, k, l)
                combined = (lhs_ii - rhs_ii) + (n / 2.0) * (lhs_i - rhs_i)
                checks.append(
                    make_check("same_level.from_quadratic",
                               residual(lhs - rhs, combined), tol,
                               SAME_LEVEL, label, k + 1, l + 1))
        return VerificationReport.build("identities", checks, SAME_LEVEL)

    def check_linear_identities(self,
                                label: SpinLabel,
                                tolerance: float | None = None) -> VerificationReport:
        """Linear-map identities for pi^+ and pi^-, and their adjoint link."""
        tol = tolerance or settings.ALGEBRA_TOLERANCE
        n = label.two_s
        maps = _LevelMaps(label)
        checks = []
        for k in range(3):
            for l in range(3):
                lhs = maps.same_up[k] @ maps.plus[l] - maps.plus[k] @ maps.same[l]
                rhs = ((n + 2) / 2.0) * maps.bracket_image(maps.plus, k, l)
                checks.append(
                    make_check("linear.raise", residual(lhs, rhs), tol,
                               LINEAR, label, k + 1, l + 1))
                if maps.minus is None:
                    continue
                lhs_minus = (maps.minus[k] @ maps.same[l] -
                             maps.same_down[k] @ maps.minus[l])
                rhs_minus = (n / 2.0) * maps.bracket_image(maps.minus, k, l)
                checks.append(
                    make_check("linear.lower", residual(lhs_minus, rhs_minus),
                               tol, LINEAR, label, k + 1, l + 1))
                # adjoint of the raise identity one level down, indices swapped
                raise_below = (maps.same[l] @ maps.plus_down[k] -
                               maps.plus_down[l] @ maps.same_down[k])
                swapped = (maps.minus[k] @ maps.same[l] -
                           maps.same_down[k] @ maps.minus[l])
                checks.append(
                    make_check("linear.adjoint_consistency",
                               residual(swapped, raise_below.conj().T), tol,
                               LINEAR, label, k + 1, l + 1))
        return VerificationReport.build("identities", checks, LINEAR)

    def check_symbol_weitzenbock(
            self,
            label: SpinLabel,
            tolerance: float | None = None,
            rng: np.random.Generator | None = None,
            draws: int = 100) -> VerificationReport:
        """
        Contract the quadratic identities with xi_k xi_l for random unit xi:
        the rough Laplacian symbol is |xi|^2 and the curvature term has none.
        The principal symbols of the twisted identities vanish as well.
        """
        tol = tolerance or settings.ALGEBRA_TOLERANCE
        rng = rng or np.random.default_rng(label.two_s)
        n = label.two_s
        maps = _LevelMaps(label)
        ca, cb, cc = self.quadratic_coefficients(n)
        apply = clifford_service.apply
        worst = {"laplacian": 0.0, "curvature": 0.0, "twisted_plus": 0.0,
                 "twisted_minus": 0.0}
        for _ in range(draws):
            xi = rng.normal(size=3)
            xi /= np.linalg.norm(xi)
            a = apply(maps.minus_up, xi) @ apply(maps.plus, xi)
            b = apply(maps.same, xi) @ apply(maps.same, xi)
            c = np.zeros_like(b)
            if maps.minus is not None:
                c = apply(maps.plus_down, xi) @ apply(maps.minus, xi)
            laplacian = ca * a + cb * b + cc * c
            curvature = -(n / 2.0) * ca * a + cb * b + ((n + 2) / 2.0) * cc * c
            worst["laplacian"] = max(worst["laplacian"],
                                     residual(laplacian, -np.eye(maps.dim)))
            worst["curvature"] = max(worst["curvature"], residual(curvature))
            plus = (apply(maps.same_up, xi) @ apply(maps.plus, xi) -
                    apply(maps.plus, xi) @ apply(maps.same, xi))
            worst["twisted_plus"] = max(worst["twisted_plus"], residual(plus))
            if maps.minus is not None:
                minus = (apply(maps.minus, xi) @ apply(maps.same, xi) -
                         apply(maps.same_down, xi) @ apply(maps.minus, xi))
                worst["twisted_minus"] = max(worst["twisted_minus"],
                                             residual(minus))
        checks = [
            make_check(f"symbol.{name}", value, tol, SYMBOL, label)
            for name, value in worst.items()
        ]
        return VerificationReport.build("identities", checks, SYMBOL)

    def check_dimension_obstruction(self,
                                    n: int,
                                    j: int,
                                    mu: complex,
                                    c: float,
                                    tolerance: float | None = None) -> VerificationReport:
        """
        Scalar relations forced on a constant-curvature candidate in
        dimension ``n``; the relations are also checked symbolically in mu.
        """
        if n < 3 or j < 0:
            raise ValueError("obstruction check needs n >= 3 and j >= 0")
        tol = tolerance or settings.ALGEBRA_TOLERANCE
        m, cc = sp.symbols("mu c")
        s = n + 2 * j
        first = (m**2 * (1 - sp.Rational(s * (n - 2), s - 2)) +
                 (j + sp.Rational(n * (n - 1), 4)) * cc)
        second = (m**2 * (1 - sp.Rational((s - 2) * (n - 2), s)) +
                  (-(n + j - 1) + sp.Rational(n * (n - 1), 4)) * cc)
        forced_c = 4 * m**2 * (n - 2) / sp.Integer(s * (s - 2))
        final = sp.expand(s * (s - 2) * first.subs(cc, forced_c))
        expected = -4 * m**2 * j * (n - 3) * (j + n - 1)

        mu_value = complex(mu)
        subs = {m: sp.nsimplify(mu_value.real) + sp.I * sp.nsimplify(mu_value.imag),
                cc: sp.nsimplify(c)}
        value = complex((4 * m**2 * j * (n - 3) * (j + n - 1)).subs(subs))
        forced_value = complex(forced_c.subs(subs))
        logger.debug(f"obstruction n={n} j={j}: final expression {value}")

        identity_gap = sp.simplify((first - second).subs(cc, forced_c))
        checks = [
            make_check("obstruction.relation_first",
                       abs(complex(first.subs(subs))), tol, OBSTRUCTION),
            make_check("obstruction.relation_second",
                       abs(complex(second.subs(subs))), tol, OBSTRUCTION),
            make_check("obstruction.forced_curvature_solves_difference",
                       abs(complex(sp.N(identity_gap))), tol, OBSTRUCTION),
            make_check("obstruction.final_expression",
                       abs(complex(sp.N(sp.expand(final - expected)))), tol,
                       OBSTRUCTION),
        ]
        if abs(value) > tol:
            checks.append(
                make_check("obstruction.active", shortfall(value, tol), tol,
                           OBSTRUCTION))
        else:
            branch = ("flat" if abs(mu_value) < tol else
                      "three_dimensional" if n == 3 else "spin_half")
            checks.append(
                make_check(f"obstruction.branch.{branch}",
                           abs(forced_value - c) if branch == "flat" else 0.0,
                           tol, OBSTRUCTION))
        return VerificationReport.build("identities", checks, OBSTRUCTION)

    def run_level(self, label: SpinLabel, tolerance: float,
                  rng: np.random.Generator) -> list[IdentityCheck]:
        checks = []
        for report in (self.check_quadratic_identities(label, tolerance),
                       self.check_same_level_identity(label, tolerance),
                       self.check_linear_identities(label, tolerance),
                       self.check_symbol_weitzenbock(label, tolerance, rng)):
            checks.extend(report.checks)
        return checks


identity_service = IdentityService()
