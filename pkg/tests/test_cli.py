import csv
import json
import math
import subprocess
import sys

import pytest

from hartogs import cli, moments
from hartogs.cli import dumps, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_ranges_hartogs_triangle(capsys):
    code, out, _ = run(capsys, "ranges", "--m", "1", "--n", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["outputs"]["bergman_range"]["lower"] == "4/3"
    assert doc["outputs"]["bergman_range"]["upper"] == "4"
    assert doc["outputs"]["unbounded_thresholds"]["adjoint_p_star"] == "4"


def test_ranges_smoothing_gain(capsys):
    code, out, _ = run(capsys, "ranges", "--m", "1", "--n", "1", "--symbol", "boundary:0.25", "--p", "2")
    so = json.loads(out)["outputs"]["smoothing_outcome"]
    assert code == 0 and so["kind"] == "gain" and so["G"] == "2/3" and so["r"] == "8/3"


def test_ranges_outside_window_reports_unbounded(capsys):
    code, out, _ = run(capsys, "ranges", "--m", "1", "--n", "1", "--symbol", "boundary:1/4", "--p", "16/3")
    doc = json.loads(out)
    assert code == 0
    assert doc["outputs"]["smoothing_outcome"]["kind"] == "unbounded"
    assert doc["outputs"]["unbounded_thresholds"]["adjoint_p_star"] == "16/3"


@pytest.mark.parametrize(
    "argv",
    [
        ["ranges", "--m", "0", "--n", "1"],
        ["ranges", "--m", "1"],
        ["ranges", "--m", "1", "--n", "1", "--symbol", "disc:1"],
        ["ranges", "--m", "1", "--n", "1", "--symbol", "mod:5"],
        ["scan", "--m", "1", "--n", "1", "--p"],
        ["kernel", "--m", "1", "--n", "1", "--cap", "3"],
        ["norm", "--m", "1", "--n", "1", "--alpha", "0,-2"],
        ["verify", "--suite", "huge"],
    ],
)
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_scan_flips_at_threshold(capsys, tmp_path):
    path = tmp_path / "scan.csv"
    code, out, _ = run(capsys, "scan", "--m", "1", "--n", "1", "--symbol", "mod:0",
                       "--p", "3.5", "3.75", "4.25", "4.5", "--out", str(path))
    assert code == 0
    verdicts = [s["verdict"] for s in json.loads(out)["outputs"]["scans"]]
    assert verdicts == ["convergent", "convergent", "divergent", "divergent"]
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["p", "eps", "integral", "verdict", "slope"]
    assert len(rows) == 1 + 4 * 17


def test_scan_default_path(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, _, _ = run(capsys, "scan", "--m", "1", "--n", "1", "--p", "3", "--eps-levels", "4")
    assert code == 0 and (tmp_path / "scan.csv").exists()


def test_scan_unwritable_path(capsys, tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["scan", "--m", "1", "--n", "1", "--p", "3", "--out", str(tmp_path / "missing" / "x.csv")])
    assert info.value.code == 2


def test_kernel_report_deterministic(capsys):
    argv = ["kernel", "--m", "1", "--n", "1", "--samples", "50", "--cap", "8", "--seed", "1"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    doc = json.loads(a)
    assert math.isfinite(float(doc["outputs"]["max_ratio"]["value"]))
    assert [c["name"] for c in doc["checks"]] == ["finite_max_ratio", "stabilization"]


def test_norm_eigen_witness(capsys):
    _, out, _ = run(capsys, "norm", "--m", "2", "--n", "1", "--alpha", "0,-1")
    v = json.loads(out)["outputs"]["norm_sq"]
    assert float(v["value"]) == pytest.approx(2 * math.pi ** 2) and v["abs_error"] == "0.0"
    _, out, _ = run(capsys, "eigen", "--m", "1", "--n", "1", "--symbol", "mod:1", "--beta", "0,0")
    assert float(json.loads(out)["outputs"]["eigenvalue"]["value"]) == pytest.approx(0.8)
    _, out, _ = run(capsys, "eigen", "--m", "1", "--n", "1", "--symbol", "boundary:1", "--beta", "0,0")
    assert float(json.loads(out)["outputs"]["eigenvalue"]["value"]) == pytest.approx(8 / 105)
    _, out, _ = run(capsys, "witness", "--m", "3", "--n", "2")
    o = json.loads(out)["outputs"]
    assert (o["beta1"], o["beta2"], o["least_exponent"]) == ("1", "2", "-2")


def test_non_reduced_input_is_reduced(capsys):
    _, out, _ = run(capsys, "ranges", "--m", "4", "--n", "2")
    doc = json.loads(out)
    assert doc["inputs"]["gamma"] == "2"
    assert doc["outputs"]["bergman_range"]["text"] == "(3/2, 3)"


@pytest.mark.parametrize(
    "argv",
    [
        ["ranges", "--m", "3", "--n", "2", "--symbol", "mod:1/3", "--p", "2"],
        ["witness", "--m", "5", "--n", "3"],
        ["eigen", "--m", "3", "--n", "2", "--symbol", "boundary:0.5", "--beta", "1,-2"],
        ["verify", "--suite", "fast", "--seed", "7"],
    ],
)
def test_reports_round_trip(capsys, argv):
    _, out, _ = run(capsys, *argv)
    assert dumps(json.loads(out)) == out


def test_verify_fast_seed_deterministic(capsys):
    code_a, a, _ = run(capsys, "verify", "--suite", "fast", "--seed", "7")
    code_b, b, _ = run(capsys, "verify", "--suite", "fast", "--seed", "7")
    assert code_a == code_b == 0
    assert a == b
    doc = json.loads(a)
    assert all(c["pass"] and c["tolerance"] and c["measured"] for c in doc["checks"])


def test_verify_detects_corrupted_norm(capsys, monkeypatch):
    honest = moments.monomial_norm_sq

    def corrupted(exp, alpha):
        v = honest(exp, alpha)
        return moments.MomentValue(v.value * (1 + 1e-6), v.method)

    monkeypatch.setattr(moments, "monomial_norm_sq", corrupted)
    code, out, _ = run(capsys, "verify", "--suite", "fast")
    assert code == 1
    failed = json.loads(out)["outputs"]["failed"]
    assert failed == ["norm_oracle_reduced"]


def test_accuracy_error_exit_code(capsys, monkeypatch):
    from hartogs.errors import AccuracyError

    def boom(args):
        raise AccuracyError("budget exhausted", 1.0, 0.5)

    monkeypatch.setitem(cli.COMMANDS, "witness", boom)
    code, out, err = run(capsys, "witness", "--m", "1", "--n", "1")
    assert code == 3 and out == "" and "accuracy" in err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "hartogs", "ranges", "--m", "2", "--n", "1"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["outputs"]["bergman_range"]["upper"] == "3"
