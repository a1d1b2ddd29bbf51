import csv
import json
import math
import subprocess
import sys

import pytest

from fracmol.cli import OUT_ENV, list_text, main


def run(args, capsys):
    code = main([str(a) for a in args])
    out, err = capsys.readouterr()
    return code, out, err


def _power_derivative(poly, order, var):
    # left derivative of sum c_p var^p by the power rule, as expression text
    return " + ".join(
        f"({c})*gamma({p + 1})/gamma({p + 1 - order})*{var}^({p - order})" for p, c in poly)


def manufactured_config(tmp_path):
    # u = exp(-t) x^2 (1-x)^2 with unit coefficients; u is symmetric so the
    # right derivatives are the left ones in the variable 1 - x
    poly = [(2, 1), (3, -2), (4, 1)]
    terms = []
    for order, sign in [(0.5, "+"), (1.5, "-")]:
        terms.append(f"{sign} ({_power_derivative(poly, order, 'x')})")
        terms.append(f"{sign} ({_power_derivative(poly, order, '(1-x)')})")
    cfg = {
        "alpha": 0.5, "beta": 1.5, "ell": 1.0, "horizon": 1.0,
        "c_alpha_plus": "1", "c_alpha_minus": "1", "c_beta_plus": "1", "c_beta_minus": "1",
        "source": f"exp(-t)*(-x^2*(1-x)^2 {' '.join(terms)})",
        "initial": "x^2*(1-x)^2",
        "exact": "exp(-t)*x^2*(1-x)^2",
    }
    path = tmp_path / "prob.json"
    path.write_text(json.dumps(cfg))
    return path


def read_csv(path):
    raw = path.read_bytes()
    assert raw.endswith(b"\r\n")
    with path.open(newline="") as fh:
        return list(csv.reader(fh))


def test_list(capsys):
    code, out, _ = run(["list"], capsys)
    assert code == 0
    entries = [line for line in out.splitlines() if line[:1].isdigit()]
    assert [e.split()[0] for e in entries] == ["1", "2", "3", "4"]
    assert "--gamma" in out and "--case" in out and "--kalpha" in out
    assert out.strip() == list_text()
    assert run(["list"], capsys)[1] == out


def test_solve_example1(tmp_path, capsys):
    code, out, err = run(["solve", "--example", 1, "--n", 4, "--out", tmp_path], capsys)
    assert code == 0, err
    rows = read_csv(tmp_path / "report.csv")
    rep = dict(zip(rows[0], rows[1]))
    assert float(rep["Einf"]) <= 1e-11 and float(rep["E2"]) <= 1e-11
    assert float(rep["wall_time"]) > 0 and int(rep["accepted_steps"]) > 0
    assert rep["abs_tol"] == "1e-14"
    snaps = sorted(tmp_path.glob("snapshot_*.csv"))
    assert len(snaps) == 5
    table = read_csv(snaps[2])
    assert table[0] == ["t", "x", "u"] and len(table) == 202
    assert float(table[1][0]) == 2.5
    # 17 significant digits
    assert len(table[50][2].replace("-", "").replace(".", "").split("e")[0]) >= 16


def test_determinism(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert run(["solve", "--example", 2, "--n", 3, "--out", d, "--dump-matrices"], capsys)[0] == 0
    names = sorted(p.relative_to(a) for p in a.rglob("*.csv") if p.name != "report.csv")
    assert len(names) == 5 + 1 + 6
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_example4_snapshots(tmp_path, capsys):
    code, _, err = run(["solve", "--example", 4, "--case", 1, "--n", 200,
                        "--snapshots", "0,0.25,0.5,1", "--out", tmp_path], capsys)
    assert code == 0, err
    assert len(list(tmp_path.glob("snapshot_*.csv"))) == 4
    assert not (tmp_path / "errors.csv").exists()
    rows = read_csv(tmp_path / "report.csv")
    assert dict(zip(*rows))["Einf"] == ""


def test_config_manufactured(tmp_path, capsys):
    path = manufactured_config(tmp_path)
    code, _, err = run(["solve", "--config", path, "--n", 10, "--out", tmp_path / "o",
                        "--format", "json"], capsys)
    assert code == 0, err
    rep = json.loads((tmp_path / "o" / "report.json").read_text())
    assert rep["Einf"] <= 1e-10 and rep["E2"] <= 1e-10
    snap = json.loads((tmp_path / "o" / "snapshot_004.json").read_text())
    assert snap["t"] == 1.0 and len(snap["x"]) == 201
    u_mid = snap["u"][100]
    assert u_mid == pytest.approx(math.exp(-1) / 16, abs=1e-10)


def test_convergence_example2(tmp_path, capsys):
    code, out, err = run(["convergence", "--example", 2, "--alpha", 0.2, "--beta", 1.2,
                          "--gamma", 2, "--nmin", 1, "--nmax", 3, "--out", tmp_path], capsys)
    assert code == 0, err
    rows = read_csv(tmp_path / "convergence.csv")
    assert rows[0] == ["n", "E2", "Einf", "wall_time"]
    e2 = {int(r[0]): float(r[1]) for r in rows[1:]}
    assert 5.5e-4 <= e2[1] <= 5.5e-2
    assert e2[2] <= 8.5e-13 and e2[3] <= 8.3e-13
    assert len(out.splitlines()) == 3


def test_convergence_zero_problem(tmp_path, capsys):
    path = tmp_path / "zero.json"
    path.write_text(json.dumps({"alpha": 0.5, "beta": 1.5, "ell": 1, "horizon": 1,
                                "initial": "0", "exact": "0"}))
    code, _, err = run(["convergence", "--config", path, "--nmin", 2, "--nmax", 6, "--nstep", 2,
                        "--out", tmp_path, "--format", "json"], capsys)
    assert code == 0, err
    data = json.loads((tmp_path / "convergence.json").read_text())
    assert [r["n"] for r in data["rows"]] == [2, 4, 6]
    assert all(r["E2"] == 0 and r["Einf"] == 0 for r in data["rows"])


def test_env_default_out(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(OUT_ENV, str(tmp_path / "env"))
    assert run(["solve", "--example", 2, "--n", 2, "--snapshots", "1"], capsys)[0] == 0
    assert (tmp_path / "env" / "snapshot_000.csv").exists()


@pytest.mark.parametrize("args, needle", [
    (["solve", "--example", 1, "--config", "x.json", "--n", 3], "not allowed with"),
    (["solve", "--example", 1, "--n", 3, "--gamma", 2], "does not accept --gamma"),
    (["solve", "--example", 3, "--n", 3, "--table-case", 2, "--beta", 1.5], "conflicts"),
    (["solve", "--example", 2, "--n", 3, "--snapshots", "0,2"], "outside"),
    (["solve", "--example", 2, "--n", 0], "--n"),
    (["solve", "--example", 2], "required"),
    (["convergence", "--example", 4, "--nmin", 2, "--nmax", 3], "no exact solution"),
    (["solve", "--example", 2, "--n", 3, "--alpha", 1.0], "alpha"),
    (["bogus"], "invalid choice"),
])
def test_failures_give_one_line(tmp_path, capsys, args, needle):
    code, _, err = run(args + ["--out", tmp_path] if args[0] != "bogus" else args, capsys)
    assert code != 0
    assert len(err.strip().splitlines()) == 1
    assert needle in err


def test_config_parse_error_offset(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"alpha": 0.5, "beta": 1.5, "ell": 1, "horizon": 1,
                                "initial": "x*(1-x))"}))
    code, _, err = run(["solve", "--config", path, "--n", 3, "--out", tmp_path], capsys)
    assert code == 1 and "offset 7" in err


def test_solver_failure_has_context(tmp_path, capsys):
    code, _, err = run(["solve", "--example", 2, "--n", 3, "--abstol", 1e-300, "--reltol", 1e-300,
                        "--out", tmp_path], capsys)
    assert code == 1
    assert "n=3" in err and len(err.strip().splitlines()) == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fracmol", "list"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.count("flags:") == 4
