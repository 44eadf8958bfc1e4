import csv
import io
from pathlib import Path

import numpy as np
import sympy as sp

# --- Project Imports ---
from core.exceptions import InadmissibleKillingNumberException, ReportWriteException
from core.logger import logger
from models.common import BasisConvention, ModelSpace
from models.representation import CliffordTriple, RepMatrices
from models.report import (H3Component, H3Solution, H3SolutionTable, MatrixDump,
                           MatrixSetDump, OutputFormat, VerificationReport)
from services.helpers import validate_killing_number

CSV_COLUMNS = ("suite", "name", "twoS", "k", "l", "residual", "tolerance", "passed")


# ---------- FORMATTING HELPERS ----------


def _cell(value) -> str:
    return "" if value is None else str(value)


def _half(numerator: int, latex: bool) -> str:
    """numerator/2 in lowest terms"""
    value = sp.Rational(numerator, 2)
    sign = "-" if value < 0 else ""
    p, q = abs(value.p), value.q
    if q == 1:
        return f"{sign}{p}"
    return f"{sign}\\frac{{{p}}}{{{q}}}" if latex else f"{sign}{p}/{q}"


def _coefficient_text(c: sp.Expr, latex: bool = False) -> str:
    """Coefficients are real or purely imaginary: 3i, -6, sqrt(3)i, i."""
    re, im = sp.re(c), sp.im(c)
    value, unit = (re, "") if im == 0 else (im, "i")
    render = sp.latex if latex else sp.sstr
    if value == 1:
        return unit or "1"
    if value == -1:
        return "-" + (unit or "1")
    return render(value) + unit


def _power(base: str, exponent: str, latex: bool) -> str:
    if exponent == "1":
        return base
    if latex:
        return f"{base}^{exponent}" if len(exponent) == 1 else f"{base}^{{{exponent}}}"
    return f"{base}^({exponent})" if not exponent.isdigit() else f"{base}^{exponent}"


def component_text(component: H3Component, latex: bool = False) -> str:
    """One monomial entry such as 3izx^{-3/2}."""
    coefficient = component.coefficient_latex if latex else component.coefficient
    variable = "z" if component.variable == "z" else ("\\bar{z}" if latex else "zbar")
    factors = ""
    if component.z_power > 0:
        factors += _power(variable, str(component.z_power), latex)
    exponent = component.x_power
    if latex:
        numerator = int(exponent.split("/")[0]) if "/" in exponent else 2 * int(exponent)
        exponent = _half(numerator, True)
    if exponent != "0":
        factors += _power("x", exponent, latex)
    if not factors:
        return coefficient
    if coefficient in ("1", "-1"):
        coefficient = coefficient[:-1]
    return coefficient + factors


class ReportService:
    """Serializes verification reports and renders closed-form H3 solutions"""

    # ---------- REPORTS ----------

    def render(self, report: VerificationReport, fmt: OutputFormat) -> str:
        fmt = OutputFormat(fmt)
        if fmt == OutputFormat.JSON:
            return report.model_dump_json(by_alias=True, indent=2)
        if fmt == OutputFormat.CSV:
            return self._csv(report)
        return self._markdown(report)

    def emit(self,
             report: VerificationReport,
             fmt: OutputFormat = OutputFormat.JSON,
             path: Path | None = None) -> str:
        """
        Render ``report`` and write it to ``path`` when given.

        Raises:
            ReportWriteException: If the target cannot be written.
        """
        text = self.render(report, fmt)
        if path is not None:
            target = Path(path)
            try:
                target.write_text(text if text.endswith("\n") else text + "\n",
                                  encoding="utf-8")
            except OSError as e:
                raise ReportWriteException(f"Unable to write report to {target}: {e}")
            logger.info(f"Report written to {target} ({report.summary.total} checks)")
        return text

    def _csv(self, report: VerificationReport) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for c in report.checks:
            writer.writerow([
                c.suite, c.name, _cell(c.two_s), _cell(c.k), _cell(c.l),
                repr(c.residual), repr(c.tolerance), str(c.passed).lower()
            ])
        return buffer.getvalue()

    def _markdown(self, report: VerificationReport) -> str:
        s = report.summary
        lines = [
            f"# Verification report: {report.suite}",
            "",
            f"{s.passed}/{s.total} checks passed, max residual {s.max_residual:.3e}",
            "",
            "| suite | name | twoS | k | l | residual | tolerance | passed |",
            "|---|---|---|---|---|---|---|---|",
        ]
        for c in report.checks:
            lines.append(f"| {c.suite} | {c.name} | {_cell(c.two_s)} | {_cell(c.k)} | "
                         f"{_cell(c.l)} | {c.residual:.3e} | {c.tolerance:.1e} | "
                         f"{'yes' if c.passed else '**no**'} |")
        return "\n".join(lines) + "\n"

    # ---------- MATRIX DUMPS ----------

    @staticmethod
    def dump_matrix(name: str, m: np.ndarray) -> MatrixDump:
        m = np.asarray(m, dtype=complex)
        return MatrixDump(name=name, real=m.real.tolist(), imag=m.imag.tolist())

    def dump_irrep(self, rep: RepMatrices) -> MatrixSetDump:
        named = [("H", rep.h), ("E", rep.e), ("F", rep.f),
                 *((f"sigma{i + 1}", s) for i, s in enumerate(rep.sigma))]
        return MatrixSetDump(kind="irrep",
                             twoS=rep.label.two_s,
                             basis=rep.basis,
                             matrices=[self.dump_matrix(n, m) for n, m in named])

    def dump_clifford(self, triple: CliffordTriple) -> MatrixSetDump:
        named = [(f"pi(e{i + 1})", m) for i, m in enumerate(triple.same_level)]
        named += [(f"pi+(e{i + 1})", m) for i, m in enumerate(triple.raise_maps)]
        if triple.has_lower:
            named += [(f"pi-(e{i + 1})", m) for i, m in enumerate(triple.lower_maps)]
        return MatrixSetDump(kind="clifford",
                             twoS=triple.label.two_s,
                             basis=BasisConvention.UNITARY,
                             matrices=[self.dump_matrix(n, m) for n, m in named])

    # ---------- H3 SOLUTIONS ----------

    @staticmethod
    def parse_h3_mu(text: str | complex) -> complex:
        """Accepts +i/2, i/2, -i/2 as well as Python complex literals."""
        if isinstance(text, complex):
            value = text
        else:
            cleaned = text.strip().replace(" ", "").replace("i/2", "0.5j")
            try:
                value = complex(cleaned)
            except ValueError:
                raise InadmissibleKillingNumberException(
                    f"Cannot read Killing number '{text}'; expected +i/2 or -i/2")
        return validate_killing_number(ModelSpace.H3, value)

    @staticmethod
    def _ladder(two_s: int, sign: int, basis: BasisConvention) -> sp.Matrix:
        size = two_s + 1
        m = sp.zeros(size, size)
        for k in range(1, size):
            entry = sp.Integer(k * (two_s + 1 - k))
            if basis == BasisConvention.UNITARY:
                up = down = sp.sqrt(entry)
            else:
                up, down = entry, sp.Integer(1)
            if sign > 0:
                m[k - 1, k] = up
            else:
                m[k, k - 1] = down
        return m

    def solve_h3(self,
                 two_s: int,
                 mu: str | complex,
                 basis: BasisConvention = BasisConvention.TRIANGULAR
                 ) -> H3SolutionTable:
        """
        The 2j+2 closed-form Killing spinors on the upper half-space. For
        mu = i/2 entry a of solution b is (iz)^d/d! (E^d)[a, b] x^{-w_a/2}
        with d = b - a; for mu = -i/2 conj z and F replace z and E, d = a - b
        and the x-power flips sign.

        Raises:
            InadmissibleKillingNumberException: If mu is not +-i/2.
        """
        if two_s < 1 or two_s % 2 == 0:
            raise ValueError("solve_h3 needs a half-integral level (odd twoS)")
        sign = 1 if self.parse_h3_mu(mu).imag > 0 else -1
        ladder = self._ladder(two_s, sign, basis)
        size = two_s + 1
        powers = [sp.eye(size)]
        for _ in range(two_s):
            powers.append(powers[-1] * ladder)

        solutions = []
        for b in range(size):
            components = []
            for a in range(size):
                d = (b - a) if sign > 0 else (a - b)
                if d < 0:
                    continue
                c = sp.nsimplify(sp.I**d / sp.factorial(d) * powers[d][a, b])
                if c == 0:
                    continue
                weight = two_s - 2 * a
                components.append(
                    H3Component(index=a,
                                weight=weight,
                                coefficient=_coefficient_text(c),
                                coefficient_latex=_coefficient_text(c, latex=True),
                                coefficient_real=float(sp.re(c)),
                                coefficient_imag=float(sp.im(c)),
                                variable="z" if sign > 0 else "zbar",
                                z_power=d,
                                x_power=_half(-sign * weight, False)))
            solutions.append(H3Solution(basis_index=b, components=components))
        logger.debug(f"H3 table at twoS={two_s}, mu sign {sign}: {size} solutions")
        return H3SolutionTable(two_s=two_s,
                               mu="+i/2" if sign > 0 else "-i/2",
                               basis=basis,
                               solutions=solutions)

    def h3_entries(self, table: H3SolutionTable, latex: bool = False) -> list[list[str]]:
        """entries[a][b]: component a of solution b, '0' where it vanishes"""
        size = table.two_s + 1
        entries = [["0"] * size for _ in range(size)]
        for solution in table.solutions:
            for component in solution.components:
                entries[component.index][solution.basis_index] = component_text(
                    component, latex)
        return entries

    def h3_latex(self, table: H3SolutionTable) -> str:
        entries = self.h3_entries(table, latex=True)
        size = table.two_s + 1
        variable = "z" if table.mu.startswith("+") else "\\bar{z}"
        columns = []
        for b in range(size):
            body = "\\\\\n    ".join(entries[a][b] for a in range(size))
            columns.append(f"C_{b + 1}\\begin{{pmatrix}}\n    {body}\n  \\end{{pmatrix}}")
        constants = ", ".join(f"C_{b + 1}" for b in range(size))
        return (f"\\varphi(x,{variable}) = " + " + ".join(columns) +
                f" \\quad ({constants} \\in \\mathbb{{C}})")


report_service = ReportService()
