import json

import pytest
from click.testing import CliRunner

from app.api import partner as partner_api
from app.api.deps import sample
from app.core.errors import RangeOverflow
from app.main import cli
from app.schemas.susy import SingularityReport, SingularityZero, ZeroKind

SMALL_GRID = ["--xmin", "-2", "--xmax", "2", "--samples", "5"]
QUICK_EPS = ["--eps-re", "0.01", "--eps-im", "1", "--scan-samples", "200"]


@pytest.fixture
def runner():
    return CliRunner()


def test_eval_csv_header_and_rows(runner):
    result = runner.invoke(cli, ["eval", "--combo", "plus", "--energy", "0.5", *SMALL_GRID])
    assert result.exit_code == 0, result.output
    lines = result.stdout.splitlines()
    assert lines[0] == "x,re,im"
    assert len(lines) == 6
    assert lines[1].split(",")[0] == "-2"


def test_eval_single_point_is_exact(runner):
    result = runner.invoke(cli, [
        "eval", "--kind", "harmonic", "--combo", "even", "--energy", "0.5",
        "--xmin", "0", "--xmax", "0", "--samples", "1",
    ])
    assert result.exit_code == 0, result.output
    assert result.stdout == "x,value\n0,1\n"


def test_eval_harmonic_growing_tail_stays_finite(runner):
    result = runner.invoke(cli, [
        "eval", "--kind", "harmonic", "--combo", "even", "--energy", "0.7",
        "--xmin", "-30", "--xmax", "30", "--samples", "5",
    ])
    assert result.exit_code == 0, result.output
    values = [float(line.split(",")[1]) for line in result.stdout.splitlines()[1:]]
    assert values[0] == values[-1]
    assert abs(values[0]) > 1e190


def test_eval_beyond_double_range_exits_3(runner):
    result = runner.invoke(cli, [
        "eval", "--kind", "harmonic", "--combo", "even", "--energy", "0.7",
        "--xmin", "-60", "--xmax", "60", "--samples", "5",
    ])
    assert result.exit_code == 3
    assert "RangeOverflow" in result.stderr


def test_eval_ladder_family(runner):
    result = runner.invoke(cli, ["eval", "--family", "bound-harmonic", "--n", "2", *SMALL_GRID])
    assert result.exit_code == 0, result.output
    assert result.stdout.splitlines()[0] == "x,value"


def test_eval_is_deterministic_to_the_last_digit(runner):
    args = ["eval", "--combo", "left", "--energy", "-1", *SMALL_GRID]
    first, second = runner.invoke(cli, args), runner.invoke(cli, args)
    assert first.exit_code == second.exit_code == 0
    assert first.stdout == second.stdout


def test_eval_writes_sidecar(runner, tmp_path):
    out = tmp_path / "curve.csv"
    result = runner.invoke(cli, ["eval", "--combo", "even", "--energy", "1", *SMALL_GRID, "-o", str(out)])
    assert result.exit_code == 0, result.output
    assert out.read_text().startswith("x,value\n")
    meta = json.loads((tmp_path / "curve.csv.json").read_text())
    assert meta["command"] == "eval"
    assert meta["config"]["energy"] == 1.0
    assert "version" in meta


def test_eval_json_format_carries_metadata(runner):
    result = runner.invoke(cli, ["eval", "--combo", "odd", *SMALL_GRID, "--format", "json"])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.stdout)
    assert payload["metadata"]["command"] == "eval"
    assert list(payload["columns"]) == ["x", "value"]
    assert len(payload["columns"]["x"]) == 5


@pytest.mark.parametrize("args", [
    ["eval", "--xmin", "1", "--xmax", "1", "--samples", "5"],
    ["eval", "--kind", "harmonic", "--combo", "left"],
    ["eval", "--family", "bound-harmonic"],
    ["eval", "--kind", "nonsense"],
])
def test_eval_bad_configuration_exits_2(runner, args):
    assert runner.invoke(cli, args).exit_code == 2


def test_partner_refuses_real_eps(runner):
    result = runner.invoke(cli, ["partner", "--eps-re", "1", "--eps-im", "0", *SMALL_GRID])
    assert result.exit_code == 5
    assert "excluded-real-axis" in result.stderr


def test_partner_refuses_lattice_eps(runner):
    result = runner.invoke(cli, ["partner", "--eps-re", "0", "--eps-im", "1.5", *SMALL_GRID])
    assert result.exit_code == 5


def test_partner_csv(runner):
    result = runner.invoke(cli, ["partner", *QUICK_EPS, *SMALL_GRID])
    assert result.exit_code == 0, result.output
    lines = result.stdout.splitlines()
    assert lines[0] == "x,V2,V0"
    x, v2, v0 = map(float, lines[1].split(","))
    assert v0 == -x * x / 2
    with_w = runner.invoke(cli, ["partner", *QUICK_EPS, *SMALL_GRID, "--emit-w"])
    assert with_w.stdout.splitlines()[0] == "x,V2,V0,w"


def test_partner_singular_exits_4(runner, monkeypatch):
    zero = SingularityZero(location=0.25, kind=ZeroKind.W_ZERO)
    monkeypatch.setattr(
        partner_api, "partner_scan",
        lambda sup, interval, samples: SingularityReport(zeros=[zero], interval=interval),
    )
    result = runner.invoke(cli, ["partner", *QUICK_EPS, *SMALL_GRID])
    assert result.exit_code == 4
    assert "w-zero" in result.stderr


def test_eigenfunction_csv(runner):
    result = runner.invoke(cli, ["eigenfunction", *QUICK_EPS, "--energy", "0.5", "--with-psi0", *SMALL_GRID])
    assert result.exit_code == 0, result.output
    lines = result.stdout.splitlines()
    assert lines[0] == "x,psi2,psi0"
    assert len(lines) == 6


def test_eigenfunction_rejects_parity_combo(runner):
    result = runner.invoke(cli, ["eigenfunction", *QUICK_EPS, "--energy", "0.5", "--combo", "even"])
    assert result.exit_code == 2


def test_eigenfunction_of_a_complex_combo_splits_columns(runner):
    result = runner.invoke(cli, [
        "eigenfunction", *QUICK_EPS, "--energy", "0.5", "--combo", "plus", "--with-psi0", *SMALL_GRID,
    ])
    assert result.exit_code == 0, result.output
    assert result.stdout.splitlines()[0] == "x,psi2_re,psi2_im,psi0_re,psi0_im"


def test_verify_specfun_passes(runner, no_tol_override):
    result = runner.invoke(cli, ["verify", "--suite", "specfun"])
    assert result.exit_code == 0, result.output
    report = json.loads(result.stdout)
    assert report["suite"] == "specfun"
    assert report["pass"] is True


def test_verify_json_writes_the_report_file(runner, no_tol_override, tmp_path):
    target = tmp_path / "out.json"
    result = runner.invoke(cli, ["verify", "--suite", "specfun", "--json", str(target)])
    assert result.exit_code == 0, result.output
    assert json.loads(target.read_text()) == json.loads(result.stdout)


def test_verify_fails_under_impossible_tolerance(runner, no_tol_override):
    result = runner.invoke(cli, ["verify", "--suite", "specfun", "--tol", "1e-300"])
    assert result.exit_code == 1
    assert json.loads(result.stdout)["pass"] is False
    assert "FAIL" in result.stderr


def test_verify_rejects_non_positive_tolerance(runner):
    assert runner.invoke(cli, ["verify", "--suite", "specfun", "--tol", "-1"]).exit_code == 2


def test_version(runner):
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert "0.1.0" in result.stdout


def test_non_finite_sample_is_a_range_overflow():
    assert sample(lambda x: [2 * x], [0.0, 1.0]) == [[0.0, 0.0], [1.0, 2.0]]
    with pytest.raises(RangeOverflow):
        sample(lambda x: [float("inf")], [0.0])
