import json
import math
import subprocess
import sys

import numpy as np
import pytest

from dkp_linear import cli, laguerre


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_rows(text):
    return cli.read_csv(text)


def test_roots_even_n1(capsys):
    code, out, _ = run(capsys, "roots", "--n", "1", "--parity", "even")
    assert code == 0
    cols = csv_rows(out)
    assert cols["zeta"] == ["0.7639320225", "5.2360679775"]
    assert out.startswith("# ") and "units" in out.splitlines()[0]


def test_roots_odd_n0_empty(capsys):
    code, out, _ = run(capsys, "roots", "--n", "0", "--parity", "odd")
    assert code == 0
    assert "no solutions" in out
    assert csv_rows(out)["zeta"] == []


def test_roots_json(capsys):
    code, out, _ = run(capsys, "roots", "--n", "2", "--parity", "odd", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["count"] == 2 and rec["status"] == "ok"
    assert rec["zeta"][0] == pytest.approx(3 - math.sqrt(3), abs=1e-11)


@pytest.mark.parametrize(
    "argv",
    [
        ["roots", "--n", "-1", "--parity", "even"],
        ["roots", "--n", "1"],
        ["roots", "--n", "1", "--parity", "sideways"],
        ["state", "--n", "0", "--parity", "even", "--zeta", "2", "--lambda", "0.5"],
        ["state", "--n", "1", "--parity", "even", "--root-index", "5"],
        ["table", "--n", "0", "--parity", "even", "--samples", "500"],
        ["table", "--n", "0", "--parity", "even", "--x-max", "-3"],
        ["degeneracy", "--max-n", "0"],
        ["degeneracy", "--max-n", "101"],
        ["verify", "--scope", "everything"],
        ["--m", "-1", "roots", "--n", "0", "--parity", "even"],
        ["--format", "xml", "figure1"],
        ["bogus"],
        [],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_state_examples(capsys):
    code, out, _ = run(capsys, "state", "--n", "0", "--parity", "even")
    rec = json.loads(out)
    assert code == 0
    assert rec["E"] == pytest.approx(1.4142135624, abs=1e-10)
    assert rec["delta"] == pytest.approx(3 * math.exp(-2), abs=1e-11)
    for key in ("n", "parity", "zeta", "lambda", "E", "delta", "N", "quantization_residual", "status"):
        assert key in rec
    assert all(not isinstance(v, (dict, list)) for v in rec.values())
    code, out, _ = run(capsys, "state", "--n", "1", "--parity", "odd", "--root-index", "0")
    assert code == 0 and json.loads(out)["zeta"] == 2


def test_state_empty_root_set_exit_1(capsys):
    code, out, err = run(capsys, "state", "--n", "0", "--parity", "odd")
    assert code == 1 and out == "" and "no odd-parity" in err


def test_state_lambda_selection(capsys):
    lam = 1 / (3 + math.sqrt(5))
    code, out, _ = run(capsys, "state", "--n", "1", "--parity", "even", "--lambda", repr(lam))
    rec = json.loads(out)
    assert code == 0 and rec["root_index"] == 1
    code, _, err = run(capsys, "state", "--n", "1", "--parity", "even", "--zeta", "3")
    assert code == 1 and "not an even-parity root" in err


def test_state_negative_sign_and_mass(capsys):
    code, out, _ = run(capsys, "--m", "2", "state", "--n", "0", "--parity", "even", "--sign", "-")
    rec = json.loads(out)
    assert code == 0
    assert rec["E"] == pytest.approx(-2 * math.sqrt(2), rel=1e-11)
    assert rec["lambda"] == pytest.approx(2.0)


def test_table_parity_and_roundtrip(capsys):
    code, out, _ = run(capsys, "table", "--n", "1", "--parity", "odd", "--samples", "101")
    assert code == 0
    cols = {k: np.array([float(v) for v in vals]) for k, vals in csv_rows(out).items()}
    phi = cols["phi"]
    assert phi.size == 101 and phi[50] == 0
    assert np.array_equal(phi, -phi[::-1])
    assert np.all(cols["J1"] == 0)
    # written values parse back to the same 12-digit strings
    again = cli.render_csv({k: list(v) for k, v in cols.items()}, out.splitlines()[0][2:])
    assert again == out


def test_table_scaled_and_json(capsys):
    code, out, _ = run(capsys, "--m", "2", "table", "--n", "0", "--parity", "even", "--samples", "11", "--x-max", "3", "--scaled", "--format", "json")
    rec = json.loads(out)
    assert code == 0
    assert rec["x_over_lambdaC"][0] == pytest.approx(-6.0)
    assert len(rec["phi_scaled"]) == 11


def test_figure1(capsys, tmp_path):
    target = tmp_path / "fig1.csv"
    code, out, _ = run(capsys, "figure1", "--output", str(target))
    assert code == 0 and out == ""
    text = target.read_bytes().decode()
    assert "\r" not in text
    cols = {k: np.array([float(v) for v in vals]) for k, vals in csv_rows(text).items()}
    assert list(cols) == ["x_over_lambdaC", "phi_n0_scaled", "phi_n1_scaled"]
    x = cols["x_over_lambdaC"]
    assert x.size == 601 and x[0] == -6 and x[-1] == 6 and x[300] == 0
    assert cols["phi_n1_scaled"][300] == 0


def test_figure1_unwritable_exit_1(capsys, tmp_path):
    code, _, _ = run(capsys, "figure1", "--output", str(tmp_path / "missing" / "f.csv"))
    assert code == 1


def test_verify_algebra(capsys):
    code, out, _ = run(capsys, "verify", "--scope", "algebra")
    rec = json.loads(out)
    assert code == 0 and rec["status"] == "pass" and rec["failed"] == 0
    assert rec["spin0_dkp_algebra"] == 0 and rec["spin1_dkp_algebra"] == 0


def test_verify_oracle(capsys):
    code, out, _ = run(capsys, "verify", "--scope", "oracle")
    rec = json.loads(out)
    assert code == 0
    assert rec["oracle_zeta2_n0_even_overlap_pass"] and rec["oracle_zeta2_n1_odd_overlap_pass"]
    assert rec["negative_control_zeta1_deviation"] > 0.01


def test_verify_all_csv(capsys):
    code, out, _ = run(capsys, "verify", "--format", "csv")
    assert code == 0
    assert set(csv_rows(out)["passed"]) == {"true"}


def test_verify_broken_recurrence_exit_1(capsys, monkeypatch):
    real = laguerre._recurrence

    def broken(n, w):
        ln, lm = real(n, w)
        return ln * (1 + 1e-6), lm

    monkeypatch.setattr(laguerre, "_recurrence", broken)
    code, out, _ = run(capsys, "verify", "--scope", "all")
    rec = json.loads(out)
    assert code == 1 and rec["status"] == "fail"
    assert rec["recurrence_vs_exact_pass"] is False


def test_degeneracy(capsys):
    code, out, _ = run(capsys, "degeneracy", "--max-n", "5")
    cols = csv_rows(out)
    assert code == 0
    assert cols["n"] == ["1", "2", "3", "4", "5"]
    assert set(cols["resultant_nonzero"]) == {"true"}
    assert float(cols["min_root_separation"][1]) == pytest.approx(0.7320508, abs=1e-7)


def test_config_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nn = 2\nparity = odd\nroot-index = 1\nformat = csv\n")
    code, out, _ = run(capsys, "state", "--config", str(cfg))
    assert code == 0 and csv_rows(out)["zeta"] == ["4.73205080757"]
    code, out, _ = run(capsys, "state", "--config", str(cfg), "--root-index", "0")
    assert code == 0 and csv_rows(out)["zeta"] == ["1.26794919243"]
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = red\n")
    assert run(capsys, "state", "--config", str(bad))[0] == 2
    assert run(capsys, "state", "--config", str(tmp_path / "none.cfg"))[0] == 2


@pytest.mark.parametrize("argv", [["figure1"], ["roots", "--n", "3", "--parity", "even"], ["state", "--n", "1", "--parity", "even", "--format", "csv"]])
def test_deterministic(capsys, argv):
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second


def test_number_format():
    assert cli.fmt(1 / 3) == "0.333333333333"
    assert cli.fmt(1.5e-20) == "1.5e-20"
    assert cli.fmt(True) == "true" and cli.fmt(7) == "7"
    assert json.loads(cli.render_json({"x": float("nan")}))["x"] is None


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "dkp_linear.cli", "roots", "--n", "0", "--parity", "even"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.splitlines()[-1] == "0,2,0"
