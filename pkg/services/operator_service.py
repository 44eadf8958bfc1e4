"""
First and second order operators on closed-form spinor fields.

Every operator returns a new field, so compositions such as T^- T^+ or D^2
stay exact and can be evaluated at any point of the model space.
"""
import numpy as np

# --- Project Imports ---
from core.logger import logger
from models.common import SpinLabel
from services.clifford_service import clifford_service
from services.geometry_service import geometry_service
from services.spinor_fields import (LinearComboField, Point, SpinorField,
                                    TransformedField, ZeroField)


def _zero(field: SpinorField, label: SpinLabel) -> ZeroField:
    return ZeroField(field.space, label, field.basis)


def _vanishes(field: SpinorField) -> bool:
    if isinstance(field, ZeroField):
        return True
    return isinstance(field, TransformedField) and (not np.any(np.abs(field.matrix) > 1e-15)
                                                    or _vanishes(field.base))


def _sum(fields: list[tuple[complex, SpinorField]], space, label: SpinLabel,
         basis) -> SpinorField:
    live = [(c, f) for c, f in fields if c != 0 and not _vanishes(f)]
    if not live:
        return ZeroField(space, label, basis)
    return LinearComboField(live)


class OperatorService:
    """Covariant derivative, Dirac and twistor operators, Hessian, rough Laplacian"""

    def covariant(self, field: SpinorField, i: int) -> SpinorField:
        """nabla_{e_i} field as a field"""
        conn = geometry_service.connection(field.space, field.label, field.basis)
        return _sum([(1.0, field.derivative(i)),
                     (1.0, TransformedField(conn[i], field))], field.space,
                    field.label, field.basis)

    def dirac(self, field: SpinorField) -> SpinorField:
        """D = 1/N sum_i pi(e_i) nabla_{e_i}; zero on spin 1/2 scalars (N = 0)."""
        n = field.label.two_s
        if n == 0:
            return _zero(field, field.label)
        sigma = field.rep.sigma
        return _sum([(1.0 / n, TransformedField(sigma[i], self.covariant(field, i)))
                     for i in range(3)], field.space, field.label, field.basis)

    def twistor_plus(self, field: SpinorField) -> SpinorField:
        """T^+ = sum_i pi^+(e_i) nabla_{e_i}, one level up."""
        maps = clifford_service.build_clifford(field.label).raise_maps
        up = field.label.shifted(2)
        return _sum([(1.0, TransformedField(maps[i], self.covariant(field, i)))
                     for i in range(3)], field.space, up, field.basis)

    def twistor_minus(self, field: SpinorField) -> SpinorField | None:
        """T^- = sum_i pi^-(e_i) nabla_{e_i}, one level down; None when N < 2."""
        triple = clifford_service.build_clifford(field.label)
        if not triple.has_lower:
            return None
        down = field.label.shifted(-2)
        return _sum([(1.0, TransformedField(triple.lower_maps[i],
                                            self.covariant(field, i)))
                     for i in range(3)], field.space, down, field.basis)

    def hessian(self, field: SpinorField, k: int, l: int) -> SpinorField:
        """nabla^2_{e_k, e_l} = nabla_k nabla_l - nabla_{nabla_{e_k} e_l}"""
        gamma = geometry_service.levi_civita_table(field.space)
        terms = [(1.0, self.covariant(self.covariant(field, l), k))]
        for m in range(3):
            if gamma[k, l, m] != 0:
                terms.append((-gamma[k, l, m], self.covariant(field, m)))
        return _sum(terms, field.space, field.label, field.basis)

    def rough_laplacian(self, field: SpinorField) -> SpinorField:
        """nabla* nabla = -sum_k nabla^2_{e_k, e_k}"""
        return _sum([(-1.0, self.hessian(field, k, k)) for k in range(3)],
                    field.space, field.label, field.basis)

    # ---------- FIELD IDENTITIES ----------

    def weitzenbock_residuals(self, field: SpinorField,
                              points: list[Point]) -> dict[str, float]:
        """
        Relative residuals of the two generalized-gradient identities

            c_a T^-T^+ + (N/(N+2)) D^2 + c_c T^+T^- = nabla* nabla
            -(N/2) c_a T^-T^+ + (N/(N+2)) D^2 + ((N+2)/2) c_c T^+T^- = q(R)

        with c_a = (N+2)/(2(N+1)) and c_c = N/(2(N+1)), evaluated at ``points``.
        """
        n = field.label.two_s
        ca = (n + 2) / (2.0 * (n + 1))
        cc = n / (2.0 * (n + 1))
        same = n / (n + 2.0)

        up = self.twistor_plus(field)
        down_up = self.twistor_minus(up)
        d2 = self.dirac(self.dirac(field))
        down = self.twistor_minus(field)
        up_down = self.twistor_plus(down) if down is not None else None
        laplacian = self.rough_laplacian(field)
        q = geometry_service.curvature_qR(field.space, field.label, field.basis)

        worst = {"rough_laplacian": 0.0, "curvature": 0.0}
        for p in points:
            phi = field.value(p)
            a = down_up.value(p)
            b = d2.value(p)
            c = up_down.value(p) if up_down is not None else np.zeros_like(a)
            scale = 1.0 + np.linalg.norm(phi)
            first = ca * a + same * b + cc * c - laplacian.value(p)
            second = -(n / 2.0) * ca * a + same * b + ((n + 2) / 2.0) * cc * c - q @ phi
            worst["rough_laplacian"] = max(worst["rough_laplacian"],
                                           float(np.linalg.norm(first)) / scale)
            worst["curvature"] = max(worst["curvature"],
                                     float(np.linalg.norm(second)) / scale)
        return worst

    def twisted_residuals(self, field: SpinorField,
                          points: list[Point]) -> dict[str, float]:
        """
        q^+(R) phi = D T^+ phi - (N/(N+2)) T^+ D phi and
        q^-(R) phi = T^- D phi - ((N-2)/N) D T^- phi, the latter for N >= 2.
        """
        n = field.label.two_s
        triple = clifford_service.build_clifford(field.label)
        q_plus = geometry_service.twisted_curvature(field.space, field.label,
                                                    triple.raise_maps)
        plus_lhs = self.dirac(self.twistor_plus(field))
        plus_rhs = self.twistor_plus(self.dirac(field))
        minus = None
        if triple.has_lower:
            q_minus = geometry_service.twisted_curvature(field.space, field.label,
                                                         triple.lower_maps)
            minus = (q_minus, self.twistor_minus(self.dirac(field)),
                     self.dirac(self.twistor_minus(field)))

        worst = {"twisted_plus": 0.0}
        if minus is not None:
            worst["twisted_minus"] = 0.0
        for p in points:
            phi = field.value(p)
            scale = 1.0 + np.linalg.norm(phi)
            gap = q_plus @ phi - (plus_lhs.value(p) - (n / (n + 2.0)) * plus_rhs.value(p))
            worst["twisted_plus"] = max(worst["twisted_plus"],
                                        float(np.linalg.norm(gap)) / scale)
            if minus is not None:
                q_minus, td, dt = minus
                gap = q_minus @ phi - (td.value(p) - ((n - 2.0) / n) * dt.value(p))
                worst["twisted_minus"] = max(worst["twisted_minus"],
                                             float(np.linalg.norm(gap)) / scale)
        logger.debug(f"Twisted identities on {field.describe()}: {worst}")
        return worst


operator_service = OperatorService()
