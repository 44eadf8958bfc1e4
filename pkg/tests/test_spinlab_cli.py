import json

# --- Project Imports ---
from scripts.spinlab_cli import cli


def test_solve_h3_json(runner):
    result = runner.invoke(cli, ["solve-h3", "--j", "1", "--format", "json"])
    assert result.exit_code == 0, result.stderr
    table = json.loads(result.stdout)
    assert table["two_s"] == 3 and table["mu"] == "+i/2"
    assert [c["coefficient"] for c in table["solutions"][3]["components"]] == [
        "-6i", "-6", "3i", "1"
    ]


def test_solve_h3_latex(runner):
    result = runner.invoke(cli, ["solve-h3", "--j", "0", "--mu", "-i/2", "--format", "latex"])
    assert result.exit_code == 0
    assert result.stdout.startswith("\\varphi(x,\\bar{z})")


def test_solve_h3_table(runner):
    result = runner.invoke(cli, ["solve-h3", "--j", "1"])
    assert result.exit_code == 0
    assert "3izx^(-3/2)" in result.stdout


def test_solve_h3_rejects_bad_mu(runner):
    result = runner.invoke(cli, ["solve-h3", "--j", "1", "--mu", "1/2"])
    assert result.exit_code == 2
    assert "not admissible" in result.stderr or "Cannot read" in result.stderr


def test_solve_h3_rejects_negative_j(runner):
    assert runner.invoke(cli, ["solve-h3", "--j", "-1"]).exit_code == 2


def test_reps_json(runner):
    result = runner.invoke(cli, ["reps", "--twos", "2", "--basis", "triangular",
                                 "--format", "json"])
    assert result.exit_code == 0
    dump = json.loads(result.stdout)
    assert dump["twoS"] == 2 and dump["basis"] == "triangular"
    assert dump["matrices"][0]["name"] == "H"


def test_reps_rejects_negative_level(runner):
    assert runner.invoke(cli, ["reps", "--twos", "-1"]).exit_code == 2


def test_clifford_json(runner):
    result = runner.invoke(cli, ["clifford", "--twos", "3", "--format", "json"])
    assert result.exit_code == 0
    names = [m["name"] for m in json.loads(result.stdout)["matrices"]]
    assert names[:3] == ["pi(e1)", "pi(e2)", "pi(e3)"] and "pi-(e3)" in names


def test_verify_csv(runner):
    result = runner.invoke(cli, [
        "verify", "--jmax", "0", "--samples", "5", "--suite", "irreps", "--suite", "clifford",
        "--format", "csv"
    ])
    assert result.exit_code == 0, result.stderr
    lines = result.stdout.strip().splitlines()
    assert lines[0] == "suite,name,twoS,k,l,residual,tolerance,passed"
    assert all(line.endswith(",true") for line in lines[1:])
    assert "checks passed" in result.stderr


def test_verify_rejects_negative_jmax(runner):
    result = runner.invoke(cli, ["verify", "--jmax", "-1"])
    assert result.exit_code == 2


def test_verify_missing_config(runner, tmp_path):
    result = runner.invoke(cli, ["verify", "--config", str(tmp_path / "nope.toml")])
    assert result.exit_code == 2
    assert "not found" in result.stderr


def test_verify_malformed_config(runner, tmp_path):
    path = tmp_path / "broken.toml"
    path.write_text("seed = = 3\n", encoding="utf-8")
    result = runner.invoke(cli, ["verify", "--config", str(path)])
    assert result.exit_code == 2
    assert "Cannot parse" in result.stderr


def test_verify_writes_report(runner, tmp_path):
    target = tmp_path / "report.json"
    result = runner.invoke(cli, [
        "verify", "--jmax", "0", "--samples", "5", "--suite", "cone", "--out", str(target)
    ])
    assert result.exit_code == 0, result.stderr
    assert result.stdout == ""
    report = json.loads(target.read_text(encoding="utf-8"))
    assert report["suite"] == "cone"
    assert report["summary"]["passed"] == report["summary"]["total"]


def test_verify_is_deterministic(runner):
    args = ["verify", "--jmax", "0", "--samples", "5", "--seed", "3", "--suite", "tensors"]
    first = runner.invoke(cli, args)
    second = runner.invoke(cli, args)
    assert first.exit_code == second.exit_code == 0
    assert first.stdout == second.stdout


def test_solve_h3_spin_three_halves_in_triangular_basis(runner):
    result = runner.invoke(cli, ["solve-h3", "--j", "1", "--mu", "+i/2", "--basis", "paper"])
    assert result.exit_code == 0, result.stderr
    assert "3izx^(-3/2)" in result.stdout

    result = runner.invoke(
        cli, ["solve-h3", "--j", "1", "--mu", "+i/2", "--basis", "paper", "--format", "json"])
    assert result.exit_code == 0
    table = json.loads(result.stdout)
    assert table["basis"] == "triangular"
    columns = [[c["coefficient"] for c in s["components"]] for s in table["solutions"]]
    assert columns == [["1"], ["3i", "1"], ["-6", "4i", "1"], ["-6i", "-6", "3i", "1"]]
    assert [c["x_power"] for c in table["solutions"][3]["components"]] == [
        "-3/2", "-1/2", "1/2", "3/2"
    ]
