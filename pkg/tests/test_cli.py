import json
import subprocess
import sys

import pytest

from qtheta.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_aq_matches_rogers_ramanujan(capsys):
    import mpmath
    code, out, _ = run(capsys, "eval", "aq", "--q", "0.5", "--z", "-1", "--digits", "60")
    assert code == 0
    doc = json.loads(out)
    assert doc["meta"] == {"command": "eval", "digits": 60, "version": doc["meta"]["version"]}
    with mpmath.workdps(80):
        q = mpmath.mpf("0.5")
        G = 1 / (mpmath.qp(q, q ** 5) * mpmath.qp(q ** 4, q ** 5))
        v = mpmath.mpf(doc["rows"][0]["value_re"])
        assert abs(v - G) < mpmath.mpf(10) ** -55


def test_numerals_are_scientific_strings(capsys):
    _, out, _ = run(capsys, "eval", "theta", "--q", "0.25", "--z", "1")
    row = json.loads(out)["rows"][0]
    assert isinstance(row["value_re"], str) and "e" in row["value_re"]
    assert len(row["value_re"].split("e")[0].replace(".", "").lstrip("-")) == 60


def test_eval_theta_zero_is_usage_error(capsys):
    code, out, err = run(capsys, "eval", "theta", "--q", "0.5", "--z", "0")
    assert code == 2 and out == ""
    assert err.count("\n") == 1 and err.startswith("qtheta: error:")


@pytest.mark.parametrize("argv", [
    ["eval", "aq", "--q", "1.5", "--z", "1"],
    ["eval", "aq", "--q", "0.5", "--z", "1", "--digits", "20"],
    ["solve", "--t", "3/2", "--lambda", "1/3"],
    ["solve", "--t", "sqrt:2", "--beta", "1.2", "--n-max", "10"],
    ["verify", "--theorem", "t2-irrational", "--q", "0.5", "--t", "3/2", "--u", "1", "--n", "5..9"],
    ["identities", "--suite", "triple_product", "--z-grid", "hex:3"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["eval", "nosuch"])
    assert exc.value.code == 2


def test_identities_pass_and_fail(capsys):
    code, out, _ = run(capsys, "identities", "--suite", "triple_product", "--q", "0.1,0.5,0.9",
                       "--z-grid", "disk:8")
    doc = json.loads(out)
    assert code == 0 and doc["summary"] == {"total": 24, "passed": 24, "flagged": 0}
    code, out, _ = run(capsys, "identities", "--suite", "lemma1")
    s = json.loads(out)["summary"]
    assert code == 1 and s["passed"] < s["total"]


def test_empty_grid_warns(capsys):
    code, out, err = run(capsys, "identities", "--suite", "euler", "--z-grid", "list:")
    assert code == 0 and "warning" in err
    assert json.loads(out)["summary"]["total"] == 0


def test_solve_tables(capsys):
    code, out, _ = run(capsys, "solve", "--t", "3/2", "--lambda", "1/2", "--count", "3",
                       "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "n,m,lambda,chi_m,m_half"
    assert [tuple(l.split(",")[:2]) for l in lines[1:]] == [("1", "1"), ("3", "4"), ("5", "7")]
    code, out, _ = run(capsys, "solve", "--t", "sqrt:2", "--beta", "0", "--n-max", "100")
    ns = {r["n"] for r in json.loads(out)["rows"]}
    assert {1, 2, 5, 12, 29, 70} <= ns


def test_verify_rows(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--theorem", "t2-rational", "--q", "0.5", "--t", "3/2",
                       "--lambda", "1/2", "--u", "1", "--n", "5..25:4", "--output", str(path))
    assert code == 0 and out == ""
    doc = json.loads(path.read_text())
    row = doc["rows"][0]
    for key in ("n", "m", "abs_residual", "bound", "ratio", "flags", "bound_satisfied"):
        assert key in row
    assert row["flags"] == "small_m"
    assert doc["summary"]["flagged"] == 1


def test_verify_t3_general(capsys):
    code, out, _ = run(capsys, "verify", "--theorem", "t3-rational", "--q", "0.5", "--t", "3/2",
                       "--lambda", "1/2", "--u", "1", "--a", "0.3", "--b", "0.5", "--l", "1",
                       "--n", "9..41:8", "--format", "text")
    assert code == 0 and out.strip().endswith("total=5 passed=5 flagged=0")


def test_text_and_csv_formats(capsys):
    _, out, _ = run(capsys, "eval", "qpoch", "--q", "0.5", "--a", "0.5", "--format", "text")
    assert out.startswith("function=qpoch")
    _, out, _ = run(capsys, "eval", "f", "--q", "0.5", "--b", "q", "--z-grid", "list:1,2",
                    "--format", "csv")
    assert len(out.strip().splitlines()) == 3


def test_digits_env(capsys, monkeypatch):
    monkeypatch.setenv("QTHETA_DIGITS", "35")
    code, out, _ = run(capsys, "eval", "aq", "--q", "0.5", "--z", "1")
    assert json.loads(out)["meta"]["digits"] == 35


def test_module_entry_point_is_deterministic(tmp_path):
    cmd = [sys.executable, "-m", "qtheta", "eval", "phi", "--q", "0.5", "--a", "0.3", "--z", "1"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
