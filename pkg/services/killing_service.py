from fractions import Fraction

import numpy as np
import sympy as sp
from scipy.linalg import qr

# --- Project Imports ---
from core.config import settings
from core.exceptions import (DimensionMismatchException,
                             InadmissibleKillingNumberException,
                             SpaceMismatchException)
from core.linalg import bracket_vector, numeric_rank, residual
from core.logger import logger
from models.common import BasisConvention, ModelSpace, SpinLabel
from models.geometry import H3Point, KillingBasis, S3Point
from models.report import IdentityCheck, VerificationReport
from services.clifford_service import clifford_service
from services.geometry_service import geometry_service
from services.helpers import make_check, relative, shortfall, validate_killing_number
from services.irrep_service import irrep_service
from services.operator_service import operator_service
from services.spinor_fields import (AdjointVectorField, AffineTwistorField,
                                    CliffordMultipliedField, ConjTranslateField,
                                    ConstantField, ConstantVectorField,
                                    LinearComboField, PowerExpField, Point,
                                    SpinorField, VectorField)

KILLING = "higher spin Killing equation nabla_X phi = mu pi(X) phi"
EIGEN = "Killing spinors are eigenspinors of D with eigenvalue -(N+2) mu"
TWISTOR = "Killing spinors lie in the kernel of T^+ and T^- (twistor equation)"
INTEGRABILITY = "integrability conditions of the Killing equation"
DIMENSION = "dimension bound and twistor family rank"
RAISING = "spin raising by Clifford multiplication with invariant vector fields"
OPERATORS = "Weitzenbock identities of generalized gradients on closed-form fields"
EQUALITY = "equality case of the first eigenvalue estimate on the round sphere"
BOOTSTRAP = "explicit spin 3/2 Killing spinors on the upper half-space"
ORACLE = "closed-form covariant derivative against finite differences"

# sampled-value ranks of the H3 families lose conditioning beyond this level
RANK_LEVEL_LIMIT = 13
ORACLE_LEVEL_LIMIT = 5
OPERATOR_LEVEL_LIMIT = 7

# Columns of the spin 3/2 solution table in the triangular basis: entry a of
# column b is coefficient * z^(b-a) * x^(-w_a/2) with weights w = (3, 1, -1, -3).
SPIN_THREE_HALVES_REFERENCE = (
    (1, ),
    (3j, 1),
    (-6, 4j, 1),
    (-6j, -6, 3j, 1),
)


class KillingService:
    """Closed-form Killing spinors on the model spaces and their verification"""

    # ---------- GENERATION ----------

    def generate(self,
                 space: ModelSpace,
                 label: SpinLabel,
                 mu: complex,
                 basis: BasisConvention = BasisConvention.UNITARY) -> KillingBasis:
        """
        One Killing spinor per basis vector psi_k of the fibre.

        Raises:
            InadmissibleKillingNumberException: If ``space`` cannot carry ``mu``.
        """
        mu = validate_killing_number(space, mu)
        eye = np.eye(label.dim, dtype=complex)
        if space == ModelSpace.S3 and mu.real > 0:
            fields = [ConstantField(space, label, eye[k], basis) for k in range(label.dim)]
        elif space == ModelSpace.S3:
            fields = [ConjTranslateField(label, eye[k], basis) for k in range(label.dim)]
        elif space == ModelSpace.H3:
            sign = 1 if mu.imag > 0 else -1
            fields = [PowerExpField(label, eye[k], sign, basis) for k in range(label.dim)]
        else:
            fields = [ConstantField(space, label, eye[k], basis) for k in range(label.dim)]
        logger.debug(f"Generated {len(fields)} Killing spinors on {space.value} "
                     f"at {label} with mu={mu}")
        return KillingBasis(space=space, label=label, mu=mu, fields=tuple(fields))

    def twistor_family(self, space: ModelSpace, label: SpinLabel) -> list[SpinorField]:
        """
        A spanning set of twistor spinors: both Killing bases on the curved
        spaces, the affine family u + pi(x) v on flat space.
        """
        if space == ModelSpace.R3:
            eye = np.eye(label.dim, dtype=complex)
            zero = np.zeros(label.dim, dtype=complex)
            return ([AffineTwistorField(label, eye[k], zero) for k in range(label.dim)] +
                    [AffineTwistorField(label, zero, eye[k]) for k in range(label.dim)])
        fields = []
        for mu in (0.5, -0.5) if space == ModelSpace.S3 else (0.5j, -0.5j):
            fields.extend(self.generate(space, label, mu).fields)
        return fields

    # ---------- POINTWISE QUANTITIES ----------

    def killing_residual(self, field: SpinorField, mu: complex, point: Point) -> float:
        phi = field.value(point)
        sigma = field.rep.sigma
        worst = 0.0
        for i in range(3):
            gap = geometry_service.covariant_derivative(field, point, i) - mu * sigma[i] @ phi
            worst = max(worst, relative(gap, phi))
        return worst

    def dirac_apply(self, field: SpinorField, point: Point) -> np.ndarray:
        """D phi at ``point``; zero at N = 0."""
        n = field.label.two_s
        if n == 0:
            return np.zeros(field.label.dim, dtype=complex)
        sigma = field.rep.sigma
        return sum(sigma[i] @ geometry_service.covariant_derivative(field, point, i)
                   for i in range(3)) / n

    def family_rank(self, fields: list[SpinorField], points: list[Point],
                    tol: float | None = None) -> int:
        """Rank of the family of functions, from their stacked sampled values."""
        return numeric_rank(self._stack(fields, points), tol or settings.RANK_TOLERANCE)

    def _stack(self, fields: list[SpinorField], points: list[Point]) -> np.ndarray:
        return np.column_stack(
            [np.concatenate([f.value(p) for p in points]) for f in fields])

    # ---------- VERIFICATION ----------

    def verify_killing(self,
                       field: SpinorField,
                       mu: complex,
                       points: list[Point],
                       tolerance: float | None = None) -> VerificationReport:
        """Max over points and frame directions of the relative Killing residual."""
        tol = tolerance or settings.ALGEBRA_TOLERANCE
        worst = max((self.killing_residual(field, mu, p) for p in points), default=0.0)
        check = make_check(f"killing.{field.space.value}.equation", worst, tol,
                           KILLING, field.label)
        return VerificationReport.build("killing", [check], KILLING)

    def dirac_eigen_check(self,
                          basis: KillingBasis,
                          points: list[Point],
                          tolerance: float | None = None) -> VerificationReport:
        tol = tolerance or settings.ALGEBRA_TOLERANCE
        eigenvalue = -(basis.label.two_s + 2) * basis.mu
        worst = 0.0
        for field in basis.fields:
            for p in points:
                phi = field.value(p)
                worst = max(worst, relative(self.dirac_apply(field, p) - eigenvalue * phi, phi))
        check = make_check(f"killing.{basis.space.value}.dirac_eigenvalue", worst, tol,
                           EIGEN, basis.label)
        return VerificationReport.build("killing", [check], EIGEN)

    def twistor_check(self,
                      field: SpinorField,
                      points: list[Point],
                      tolerance: float | None = None) -> VerificationReport:
        """nabla_i phi + pi(e_i) D phi / (N+2) = 0, and T^+ phi = T^- phi = 0."""
        tol = tolerance or settings.ALGEBRA_TOLERANCE
        n = field.label.two_s
        sigma = field.rep.sigma
        triple = clifford_service.build_clifford(field.label)
        worst = {"equation": 0.0, "plus": 0.0, "minus": 0.0}
        for p in points:
            phi = field.value(p)
            d_phi = self.dirac_apply(field, p)
            grads = [geometry_service.covariant_derivative(field, p, i) for i in range(3)]
            for i in range(3):
                worst["equation"] = max(
                    worst["equation"], relative(grads[i] + sigma[i] @ d_phi / (n + 2), phi))
            plus = sum(triple.raise_maps[i] @ grads[i] for i in range(3))
            worst["plus"] = max(worst["plus"], relative(plus, phi))
            if triple.has_lower:
                minus = sum(triple.lower_maps[i] @ grads[i] for i in range(3))
                worst["minus"] = max(worst["minus"], relative(minus, phi))
        if not triple.has_lower:
            del worst["minus"]
        checks = [
            make_check(f"twistor.{field.space.value}.{name}", value, tol, TWISTOR,
                       field.label) for name, value in worst.items()
        ]
        return VerificationReport.build("killing", checks, TWISTOR)

    def integrability_check(self,
                            field: SpinorField,
                            mu: complex,
                            points: list[Point],
                            tolerance: float | None = None) -> VerificationReport:
        """
        Curvature conditions every Killing spinor imposes: the Einstein-type
        identity, q(R) phi = mu^2 N(N+2) phi, R(e_k, e_l) phi = -mu^2
        pi([e_k, e_l]) phi, q^+/- phi = 0 and scal = 24 mu^2.
        """
        tol = tolerance or settings.ALGEBRA_TOLERANCE
        space, label = field.space, field.label
        n = label.two_s
        rep = field.rep
        ric = geometry_service.ricci(space)
        scal = float(np.trace(ric))
        einstein = [
            irrep_service.rep_of_vector(rep, ric[i] - 0.5 * (scal - 8 * mu**2) * np.eye(3)[i])
            for i in range(3)
        ]
        q = geometry_service.curvature_qR(space, label, field.basis)
        curvature = {(k, l): geometry_service.bundle_curvature(space, label, k, l, field.basis)
                     for k in range(3) for l in range(3) if k < l}
        triple = clifford_service.build_clifford(label)
        twisted = {"q_plus": geometry_service.twisted_curvature(space, label,
                                                                triple.raise_maps)}
        if triple.has_lower:
            twisted["q_minus"] = geometry_service.twisted_curvature(space, label,
                                                                    triple.lower_maps)
        unitary = field.basis == BasisConvention.UNITARY

        worst = {"einstein": 0.0, "qR": 0.0, "two_form": 0.0}
        if unitary:
            worst.update({name: 0.0 for name in twisted})
        for p in points:
            phi = field.value(p)
            for m in einstein:
                worst["einstein"] = max(worst["einstein"], relative(m @ phi, phi))
            worst["qR"] = max(worst["qR"], relative(q @ phi - mu**2 * n * (n + 2) * phi, phi))
            for (k, l), r in curvature.items():
                bracket = irrep_service.rep_of_vector(rep, bracket_vector(k, l))
                worst["two_form"] = max(worst["two_form"],
                                        relative(r @ phi + mu**2 * bracket @ phi, phi))
            if unitary:
                for name, matrix in twisted.items():
                    worst[name] = max(worst[name], relative(matrix @ phi, phi))
        checks = [
            make_check(f"integrability.{space.value}.{name}", value, tol, INTEGRABILITY,
                       label) for name, value in worst.items()
        ]
        checks.append(
            make_check(f"integrability.{space.value}.scalar_curvature",
                       abs(scal - 24 * mu**2), tol, INTEGRABILITY, label))
        return VerificationReport.build("killing", checks, INTEGRABILITY)

    def basis_checks(self,
                     basis: KillingBasis,
                     points: list[Point],
                     rank_points: list[Point],
                     tolerance: float | None = None) -> VerificationReport:
        """Full rank of the basis and, for real mu, point-independent Gram matrix."""
        tol = tolerance or settings.ALGEBRA_TOLERANCE
        label = basis.label
        rank = self.family_rank(list(basis.fields), rank_points)
        checks = [
            make_check(f"dimension.{basis.space.value}.basis_rank",
                       abs(rank - label.dim), 0.5, DIMENSION, label)
        ]
        real_mu = abs(basis.mu.imag) < tol and abs(basis.mu) > tol
        if real_mu and basis.fields and basis.fields[0].basis == BasisConvention.UNITARY:
            reference = None
            drift = 0.0
            for p in points:
                values = np.column_stack([f.value(p) for f in basis.fields])
                gram = values.conj().T @ values
                if reference is None:
                    reference = gram
                drift = max(drift, residual(gram, reference))
            checks.append(
                make_check(f"dimension.{basis.space.value}.gram_constant", drift, tol,
                           "Killing spinors with real Killing number have constant "
                           "inner products", label))
        return VerificationReport.build("killing", checks, DIMENSION)

    def twistor_family_check(self,
                             space: ModelSpace,
                             label: SpinLabel,
                             points: list[Point],
                             tolerance: float | None = None) -> VerificationReport:
        """The twistor family has rank 2(N+1) and solves the twistor equation."""
        tol = tolerance or settings.ALGEBRA_TOLERANCE
        family = self.twistor_family(space, label)
        rank = self.family_rank(family, points)
        checks = [
            make_check(f"dimension.{space.value}.twistor_family_rank",
                       abs(rank - 2 * label.dim), 0.5, DIMENSION, label)
        ]
        worst = max(self.twistor_check(field, points, tol).summary.max_residual
                    for field in family)
        checks.append(make_check(f"twistor.{space.value}.family", worst, tol, TWISTOR, label))
        return VerificationReport.build("killing", checks, DIMENSION)

    # ---------- SPIN RAISING ----------

    def spin_raise_s3(self, xi: VectorField, field: SpinorField,
                      mu: complex) -> CliffordMultipliedField:
        """
        pi^+(xi) field, one level up. Left-invariant xi pairs with mu = 1/2,
        right-invariant xi with mu = -1/2.

        Raises:
            SpaceMismatchException: If the field does not live on S^3.
            InadmissibleKillingNumberException: On a wrong invariance/mu pairing.
        """
        if field.space != ModelSpace.S3 or xi.space != ModelSpace.S3:
            raise SpaceMismatchException("spin raising is defined on S3")
        mu = validate_killing_number(ModelSpace.S3, mu)
        if (mu.real > 0 and not xi.is_left_invariant) or (mu.real < 0 and
                                                           not xi.is_right_invariant):
            raise InadmissibleKillingNumberException(
                f"mu={mu.real} needs a {'left' if mu.real > 0 else 'right'}-invariant "
                f"vector field")
        if field.basis != BasisConvention.UNITARY:
            raise DimensionMismatchException("spin raising uses the unitary basis")
        maps = clifford_service.build_clifford(field.label).raise_maps
        return CliffordMultipliedField(maps, xi, field)

    def raise_norm_ratio(self, raised: CliffordMultipliedField, point: Point) -> float:
        """|pi^+(xi) phi|^2 / (|xi|^2 |phi|^2) at ``point``"""
        xi = raised.vector.components(point)
        phi = raised.base.value(point)
        denominator = np.linalg.norm(xi)**2 * np.linalg.norm(phi)**2
        if denominator == 0:
            return float("inf")
        return float(np.linalg.norm(raised.value(point))**2 / denominator)

    def iterated_raise(self, target: SpinLabel, mu: complex,
                       points: list[Point]) -> list[SpinorField]:
        """
        Raise the spin 1/2 Killing spinors up to ``target`` by the three
        invariant frame fields, pruning each level to an independent set.
        """
        mu = validate_killing_number(ModelSpace.S3, mu)
        if not target.is_half_integral:
            raise DimensionMismatchException("spin raising starts from spin 1/2")
        level = self.generate(ModelSpace.S3, SpinLabel(two_s=1), mu).fields
        frame = np.eye(3)
        vectors = [ConstantVectorField(ModelSpace.S3, frame[i]) if mu.real > 0 else
                   AdjointVectorField(frame[i]) for i in range(3)]
        for _ in range((target.two_s - 1) // 2):
            raised = [self.spin_raise_s3(xi, f, mu) for f in level for xi in vectors]
            level = self._independent(raised, points)
        return list(level)

    def _independent(self, fields: list[SpinorField],
                     points: list[Point]) -> list[SpinorField]:
        values = self._stack(fields, points)
        norms = np.linalg.norm(values, axis=0)
        values = values / np.where(norms > 0, norms, 1.0)
        _, r, pivots = qr(values, mode="economic", pivoting=True)
        diagonal = np.abs(np.diag(r))
        keep = int(np.sum(diagonal > settings.RANK_TOLERANCE * diagonal[0]))
        return [fields[k] for k in sorted(pivots[:keep])]

    def raising_checks(self,
                       label: SpinLabel,
                       mu: complex,
                       points: list[Point],
                       tolerance: float | None = None,
                       rng: np.random.Generator | None = None) -> VerificationReport:
        """Raised fields are Killing one level up, obey the norm bound and span."""
        tol = tolerance or settings.ALGEBRA_TOLERANCE
        rng = rng or np.random.default_rng(label.two_s)
        mu = validate_killing_number(ModelSpace.S3, mu)
        basis = self.generate(ModelSpace.S3, label, mu)
        n = label.two_s
        worst_killing = 0.0
        worst_bound = 0.0
        for field in basis.fields:
            a = rng.normal(size=3)
            xi = (ConstantVectorField(ModelSpace.S3, a) if mu.real > 0 else
                  AdjointVectorField(a))
            raised = self.spin_raise_s3(xi, field, mu)
            for p in points:
                worst_killing = max(worst_killing, self.killing_residual(raised, mu, p))
                worst_bound = max(worst_bound,
                                  shortfall(self.raise_norm_ratio(raised, p),
                                            2.0 / (n + 2) - tol))
        spanned = self.iterated_raise(label, mu, points[:4])
        rank = self.family_rank(spanned, points[:4])
        name = "left" if mu.real > 0 else "right"
        checks = [
            make_check(f"raising.{name}.killing", worst_killing, tol, RAISING,
                       label.shifted(2)),
            make_check(f"raising.{name}.norm_bound", worst_bound, tol, RAISING,
                       label.shifted(2)),
            make_check(f"raising.{name}.iterated_span", abs(rank - label.dim), 0.5,
                       RAISING, label),
        ]
        return VerificationReport.build("killing", checks, RAISING)

    # ---------- OPERATOR IDENTITIES ----------

    def field_battery(self, space: ModelSpace, label: SpinLabel,
                     rng: np.random.Generator) -> list[SpinorField]:
        """Killing spinors and Clifford products of them with frame fields."""
        mus = {ModelSpace.S3: (0.5, -0.5), ModelSpace.H3: (0.5j, -0.5j),
               ModelSpace.R3: (0.0, )}[space]
        battery = []
        for mu in mus:
            basis = self.generate(space, label, mu)
            psi = rng.normal(size=label.dim) + 1j * rng.normal(size=label.dim)
            battery.append(_combine(basis, psi))
        same = tuple(irrep_service.build_irrep(label).sigma)
        frame = np.eye(3)
        for k in range(3):
            battery.append(
                CliffordMultipliedField(same, ConstantVectorField(space, frame[k]),
                                        battery[k % len(mus)]))
        if space == ModelSpace.S3:
            battery.append(
                CliffordMultipliedField(same, AdjointVectorField(rng.normal(size=3)),
                                        battery[0]))
        if space == ModelSpace.R3:
            eye = np.eye(label.dim, dtype=complex)
            battery.append(AffineTwistorField(label, eye[0], eye[-1]))
        return battery

    def operator_identity_check_on_fields(
            self,
            label: SpinLabel,
            space: ModelSpace = ModelSpace.S3,
            points: list[Point] | None = None,
            tolerance: float | None = None,
            rng: np.random.Generator | None = None) -> VerificationReport:
        """
        Both generalized-gradient identities and the twisted identities on a
        battery of fields; on Killing spinors also D^2 = ((N+2)/N) q(R).
        """
        tol = tolerance or settings.ALGEBRA_TOLERANCE
        if label.two_s < 1:
            raise DimensionMismatchException("operator identities need N >= 1")
        rng = rng or np.random.default_rng(label.two_s)
        points = points or geometry_service.rank_points(space, rng, 3)
        worst: dict[str, float] = {}
        for field in self.field_battery(space, label, rng):
            for name, value in {**operator_service.weitzenbock_residuals(field, points),
                                **operator_service.twisted_residuals(field, points)}.items():
                worst[name] = max(worst.get(name, 0.0), value)
        checks = [
            make_check(f"operators.{space.value}.{name}", value, tol, OPERATORS, label)
            for name, value in worst.items()
        ]

        n = label.two_s
        q = geometry_service.curvature_qR(space, label)
        mu = {ModelSpace.S3: 0.5, ModelSpace.H3: 0.5j, ModelSpace.R3: 0.0}[space]
        basis = self.generate(space, label, mu)
        d_squared = 0.0
        for field in basis.fields[:2]:
            d2 = operator_service.dirac(operator_service.dirac(field))
            for p in points:
                phi = field.value(p)
                d_squared = max(d_squared,
                                relative(d2.value(p) - ((n + 2) / n) * q @ phi, phi))
        checks.append(
            make_check(f"operators.{space.value}.dirac_square_curvature", d_squared, tol,
                       OPERATORS, label))
        if space == ModelSpace.S3:
            checks.extend(self.equality_case_checks(label, points, tol))
        return VerificationReport.build("killing", checks, OPERATORS)

    def equality_case_checks(self, label: SpinLabel, points: list[Point],
                             tolerance: float) -> list[IdentityCheck]:
        """
        lambda^2 = (N+2)^2/4 against ((N+2)/N) r0 with r0 = N(N+2)/4 the
        constant value of q(R) on the round sphere.
        """
        n = label.two_s
        exact_lambda = Fraction((n + 2)**2, 4)
        exact_r0 = Fraction(n * (n + 2), 4)
        q = geometry_service.curvature_qR(ModelSpace.S3, label)
        r0 = complex(np.trace(q) / label.dim).real
        field = self.generate(ModelSpace.S3, label, 0.5).fields[-1]
        d2 = operator_service.dirac(operator_service.dirac(field))
        measured = max(relative(d2.value(p) - float(exact_lambda) * field.value(p),
                                field.value(p)) for p in points)
        return [
            make_check("equality_case.exact",
                       float(abs(exact_lambda - Fraction(n + 2, n) * exact_r0)), 1e-12,
                       EQUALITY, label),
            make_check("equality_case.curvature_constant",
                       abs(r0 - float(exact_r0)) + residual(q, r0 * np.eye(label.dim)),
                       tolerance, EQUALITY, label),
            make_check("equality_case.dirac_square", measured, tolerance, EQUALITY, label),
        ]

    # ---------- UPPER HALF-SPACE ----------

    def h3_symbolic_solution(self, two_s: int, sign: int = 1) -> sp.Matrix:
        """
        x^{-sign H/2} exp(i w M) in the triangular basis as a sympy matrix in
        x and w, with (w, M) = (z, E) for sign +1 and (conj z, F) for sign -1.
        Column k is the solution through the basis vector e_k.
        """
        x = sp.Symbol("x", positive=True)
        w = sp.Symbol("z" if sign > 0 else "zbar")
        rep = irrep_service.build_irrep(SpinLabel(two_s=two_s),
                                        BasisConvention.TRIANGULAR)
        ladder = rep.e if sign > 0 else rep.f
        m = sp.Matrix(two_s + 1, two_s + 1,
                      lambda a, b: sp.Integer(int(round(ladder[a, b].real))))
        exponential = sp.zeros(two_s + 1, two_s + 1)
        power = sp.eye(two_s + 1)
        for k in range(two_s + 1):
            exponential += power / sp.factorial(k)
            power = power * (sp.I * w * m)
        weights = [two_s - 2 * a for a in range(two_s + 1)]
        scaling = sp.diag(*[x**sp.Rational(-sign * wa, 2) for wa in weights])
        return sp.expand(scaling * exponential)

    def h3_bootstrap_check(self,
                           points: list[H3Point] | None = None,
                           tolerance: float | None = None) -> VerificationReport:
        """
        The spin 3/2 table against the symbolic expansion, then the general
        closed form against the symbolic expansion at sample points.
        """
        tol = tolerance or settings.ALGEBRA_TOLERANCE
        x, z = sp.Symbol("x", positive=True), sp.Symbol("z")
        solution = self.h3_symbolic_solution(3)
        weights = (3, 1, -1, -3)
        table_gap = 0
        for b, column in enumerate(SPIN_THREE_HALVES_REFERENCE):
            for a in range(4):
                expected = 0
                if a <= b:
                    coefficient = sp.nsimplify(column[a])
                    expected = coefficient * z**(b - a) * x**sp.Rational(-weights[a], 2)
                if sp.simplify(solution[a, b] - expected) != 0:
                    table_gap += 1

        points = points or [H3Point(x1=1.3, x2=0.4, x3=-0.7),
                            H3Point(x1=0.6, x2=-1.1, x3=0.2)]
        label = SpinLabel(two_s=3)
        numeric_gap = 0.0
        for sign in (1, -1):
            symbolic = self.h3_symbolic_solution(3, sign)
            w = sp.Symbol("z" if sign > 0 else "zbar")
            evaluate = sp.lambdify((x, w), symbolic, "numpy")
            for k in range(4):
                field = PowerExpField(label, np.eye(4)[k], sign,
                                      BasisConvention.TRIANGULAR)
                for p in points:
                    wv = p.z if sign > 0 else p.z.conjugate()
                    expected = np.asarray(evaluate(p.x1, wv), dtype=complex)[:, k]
                    numeric_gap = max(numeric_gap, relative(field.value(p) - expected,
                                                            expected))
        checks = [
            make_check("h3.spin_three_halves_table", float(table_gap), 0.5, BOOTSTRAP,
                       label),
            make_check("h3.closed_form_matches_symbolic", numeric_gap, tol, BOOTSTRAP,
                       label),
        ]
        return VerificationReport.build("killing", checks, BOOTSTRAP)

    # ---------- ORACLE ----------

    def fd_oracle_check(self,
                        fields: list[SpinorField],
                        points: list[Point],
                        tolerance: float = 1e-6,
                        h: float | None = None) -> VerificationReport:
        """Closed-form covariant derivatives agree with central differences."""
        worst = 0.0
        label = fields[0].label if fields else None
        for field in fields:
            for p in points:
                for i in range(3):
                    exact = geometry_service.covariant_derivative(field, p, i)
                    approx = geometry_service.fd_oracle(field, p, i, h)
                    worst = max(worst, relative(exact - approx, exact))
        space = fields[0].space.value if fields else "none"
        check = make_check(f"oracle.{space}.finite_difference", worst, tolerance, ORACLE,
                           label)
        return VerificationReport.build("killing", [check], ORACLE)

    def metric_compatibility(self,
                             first: SpinorField,
                             second: SpinorField,
                             points: list[S3Point],
                             tolerance: float = 1e-6,
                             h: float | None = None) -> VerificationReport:
        """d/dt <phi, psi> along the frame flows against <nabla phi, psi> + <phi, nabla psi>."""
        h = h or settings.FD_STEP
        worst = 0.0
        for p in points:
            for i in range(3):
                forward = geometry_service.frame_flow(first.space, p, i, h)
                backward = geometry_service.frame_flow(first.space, p, i, -h)
                slope = (np.vdot(second.value(forward), first.value(forward)) -
                         np.vdot(second.value(backward), first.value(backward))) / (2 * h)
                exact = (np.vdot(second.value(p),
                                 geometry_service.covariant_derivative(first, p, i)) +
                         np.vdot(geometry_service.covariant_derivative(second, p, i),
                                 first.value(p)))
                worst = max(worst, abs(slope - exact) / (1.0 + abs(exact)))
        check = make_check(f"oracle.{first.space.value}.metric_compatible", worst,
                           tolerance, ORACLE, first.label)
        return VerificationReport.build("killing", [check], ORACLE)

    # ---------- SUITE ----------

    def run_level(self, label: SpinLabel, tolerance: float, samples: int,
                  rng: np.random.Generator) -> list[IdentityCheck]:
        checks: list[IdentityCheck] = []
        for space in ModelSpace:
            points = geometry_service.sample_points(space, rng, samples)
            rank_points = geometry_service.rank_points(space, rng, 4)
            for mu in {ModelSpace.S3: (0.5, -0.5), ModelSpace.H3: (0.5j, -0.5j),
                       ModelSpace.R3: (0.0, )}[space]:
                basis = self.generate(space, label, mu)
                worst = max(self.verify_killing(f, mu, points, tolerance).summary.max_residual
                            for f in basis.fields)
                checks.append(
                    make_check(f"killing.{space.value}.equation", worst, tolerance,
                               KILLING, label))
                checks.extend(self.dirac_eigen_check(basis, points, tolerance).checks)
                checks.extend(_worst_rows(
                    c for f in basis.fields
                    for c in self.twistor_check(f, points, tolerance).checks))
                checks.extend(_worst_rows(
                    c for f in basis.fields
                    for c in self.integrability_check(f, mu, points, tolerance).checks))
                if label.two_s <= RANK_LEVEL_LIMIT:
                    checks.extend(
                        self.basis_checks(basis, points, rank_points, tolerance).checks)
                if label.two_s <= ORACLE_LEVEL_LIMIT:
                    oracle_points = geometry_service.rank_points(space, rng, 3)
                    checks.extend(self.fd_oracle_check(list(basis.fields[:2]),
                                                       oracle_points).checks)
            if label.two_s <= RANK_LEVEL_LIMIT:
                checks.extend(
                    self.twistor_family_check(space, label, rank_points, tolerance).checks)
        s3_points = geometry_service.sample_points(ModelSpace.S3, rng, min(samples, 10))
        if label.two_s <= RANK_LEVEL_LIMIT:
            for mu in (0.5, -0.5):
                checks.extend(self.raising_checks(label, mu, s3_points, tolerance,
                                                  rng).checks)
        if label.two_s <= OPERATOR_LEVEL_LIMIT:
            for space in ModelSpace:
                checks.extend(self.operator_identity_check_on_fields(
                    label, space, None, tolerance, rng).checks)
        logger.info(f"Killing spinor checks at {label}: {len(checks)} rows")
        return checks


def _combine(basis: KillingBasis, psi: np.ndarray) -> SpinorField:
    return LinearComboField([(complex(c), f) for c, f in zip(psi, basis.fields)])


killing_service = KillingService()


def _worst_rows(checks) -> list[IdentityCheck]:
    """One row per check name, the one with the largest residual."""
    worst: dict[str, IdentityCheck] = {}
    for check in checks:
        if check.name not in worst or check.residual > worst[check.name].residual:
            worst[check.name] = check
    return list(worst.values())
