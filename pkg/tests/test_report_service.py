import json

import pytest

# --- Project Imports ---
from core.exceptions import InadmissibleKillingNumberException, ReportWriteException
from models.common import BasisConvention, SpinLabel
from models.report import OutputFormat, VerificationReport
from services.clifford_service import clifford_service
from services.helpers import make_check
from services.irrep_service import irrep_service
from services.report_service import CSV_COLUMNS, report_service


@pytest.fixture
def report() -> VerificationReport:
    label = SpinLabel(two_s=3)
    checks = [
        make_check("casimir", 1.5e-15, 1e-10, "casimir value", label),
        make_check("quadratic.identity_i", 2.0e-3, 1e-10, "quadratic identities", label, 1,
                   2),
        make_check("so4.span", 0.0, 0.5, "splitting"),
    ]
    return VerificationReport.build("irreps", checks, "unit test", {"jmax": 1})


def test_json_round_trip_is_byte_identical(report):
    text = report_service.render(report, OutputFormat.JSON)
    again = VerificationReport.model_validate_json(text)
    assert report_service.render(again, OutputFormat.JSON) == text
    assert '"twoS": 3' in text


def test_summary_counts(report):
    assert report.summary.total == 3
    assert report.summary.passed == 2
    assert report.summary.max_residual == pytest.approx(2.0e-3)
    assert not report.all_passed


def test_empty_report_passes():
    empty = VerificationReport.build("cone", [], "unit test")
    assert empty.all_passed and empty.summary.max_residual == 0.0
    assert report_service.render(empty, OutputFormat.CSV).strip() == ",".join(CSV_COLUMNS)


def test_csv(report):
    lines = report_service.render(report, OutputFormat.CSV).splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 4
    assert lines[2].startswith("irreps,quadratic.identity_i,3,1,2,")
    assert lines[2].endswith(",false")
    assert lines[3].startswith("irreps,so4.span,,,,")


def test_markdown(report):
    text = report_service.render(report, OutputFormat.MARKDOWN)
    assert text.startswith("# Verification report: irreps")
    assert "2/3 checks passed" in text
    assert "**no**" in text


def test_emit_writes_file(report, tmp_path):
    target = tmp_path / "report.json"
    text = report_service.emit(report, OutputFormat.JSON, target)
    assert target.read_text(encoding="utf-8") == text + "\n"


def test_emit_to_unwritable_path(report, tmp_path):
    with pytest.raises(ReportWriteException):
        report_service.emit(report, OutputFormat.JSON, tmp_path / "missing" / "r.json")


def test_dump_irrep():
    rep = irrep_service.build_irrep(SpinLabel(two_s=2), BasisConvention.TRIANGULAR)
    dump = report_service.dump_irrep(rep)
    assert [m.name for m in dump.matrices] == ["H", "E", "F", "sigma1", "sigma2", "sigma3"]
    assert dump.matrices[1].real[0][1] == pytest.approx(2.0)
    assert json.loads(dump.model_dump_json(by_alias=True))["twoS"] == 2


def test_dump_clifford():
    assert len(report_service.dump_clifford(
        clifford_service.build_clifford(SpinLabel(two_s=1))).matrices) == 6
    assert len(report_service.dump_clifford(
        clifford_service.build_clifford(SpinLabel(two_s=2))).matrices) == 9


@pytest.mark.parametrize("text,expected", [("+i/2", 0.5j), ("i/2", 0.5j), ("-i/2", -0.5j),
                                           (" - i/2 ", -0.5j), ("0.5j", 0.5j)])
def test_parse_h3_mu(text, expected):
    assert report_service.parse_h3_mu(text) == expected


@pytest.mark.parametrize("text", ["1/2", "0.5", "i", "half"])
def test_parse_h3_mu_rejects(text):
    with pytest.raises(InadmissibleKillingNumberException):
        report_service.parse_h3_mu(text)


def test_spin_three_halves_table():
    table = report_service.solve_h3(3, "+i/2")
    assert table.mu == "+i/2" and table.basis == BasisConvention.TRIANGULAR
    assert len(table.solutions) == 4
    columns = [[c.coefficient for c in s.components] for s in table.solutions]
    assert columns == [["1"], ["3i", "1"], ["-6", "4i", "1"], ["-6i", "-6", "3i", "1"]]
    entries = report_service.h3_entries(table)
    assert entries[0][1] == "3izx^(-3/2)"
    assert entries[3][3] == "x^(3/2)"
    assert entries[2][0] == "0"


def test_spin_half_table():
    table = report_service.solve_h3(1, "i/2")
    entries = report_service.h3_entries(table)
    assert entries == [["x^(-1/2)", "izx^(-1/2)"], ["0", "x^(1/2)"]]


def test_negative_killing_number_table():
    table = report_service.solve_h3(1, "-i/2")
    assert table.mu == "-i/2"
    assert all(c.variable == "zbar" for s in table.solutions for c in s.components)
    entries = report_service.h3_entries(table)
    assert entries == [["x^(1/2)", "0"], ["izbarx^(-1/2)", "x^(-1/2)"]]


def test_unitary_table_has_radicals():
    table = report_service.solve_h3(3, "+i/2", BasisConvention.UNITARY)
    assert table.solutions[1].components[0].coefficient == "sqrt(3)i"


def test_latex_rendering():
    text = report_service.h3_latex(report_service.solve_h3(3, "+i/2"))
    assert text.startswith("\\varphi(x,z) = C_1\\begin{pmatrix}")
    assert "3izx^{-\\frac{3}{2}}" in text
    assert "C_4" in text


def test_solve_h3_rejects_integral_levels():
    with pytest.raises(ValueError):
        report_service.solve_h3(2, "+i/2")
    with pytest.raises(InadmissibleKillingNumberException):
        report_service.solve_h3(1, "1/2")
