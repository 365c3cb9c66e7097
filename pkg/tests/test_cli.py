import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from sqc_lab.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


# ---------------------------------------------------------------- list


def test_list_text_contains_radial_jump():
    code, out, _ = run("list")
    assert code == 0
    line = next(ln for ln in out.splitlines() if ln.startswith("radial_jump "))
    assert "modulus 2" in line and "Sphere(rho=1) LscNotUsc" in line


def test_list_json_and_filter():
    code, out, _ = run("list", "--format", "json")
    entries = json.loads(out)
    assert code == 0 and isinstance(entries, list)
    names = {e["construction"] for e in entries}
    assert {"quadratic_norm", "radial_jump", "constant5"} <= names
    _, out, _ = run("list", "--format", "json", "--filter", "discontinuous")
    names = {e["construction"] for e in json.loads(out)}
    assert "quadratic_norm" not in names and "radial_jump" in names
    _, out, _ = run("list", "--filter", "fixtures")
    assert all("[fixture]" in ln for ln in out.splitlines())


# ---------------------------------------------------------------- verify


def test_verify_examples():
    code, out, _ = run("verify", "--fn", "quadratic_norm", "--n", "2", "--gamma", "2", "--count", "100000",
                       "--seed", "7")
    assert code == 0 and out.startswith("quadratic_norm: gamma=2 triples=100000 violations=0 ")
    code, out, _ = run("verify", "--fn", "constant5", "--gamma", "2", "--count", "1000")
    assert code == 1 and "violations=1000 " in out
    code, _, _ = run("verify", "--fn", "radial_split", "--n", "3", "--rho", "1", "--beta", "0.5", "--gamma", "2")
    assert code == 0


def test_verify_writes_reports(tmp_path):
    path = tmp_path / "r.json"
    code, _, _ = run("verify", "--fn", "constant5", "--gamma", "2", "--count", "200", "--seed", "3",
                     "--out", str(path))
    doc = json.loads(path.read_text())
    assert code == 1 and doc["schema"] == 1 and doc["violation_count"] == 200
    rc = doc["run_config"]
    assert rc["seed"] == 3 and rc["count"] == 200 and rc["function"] == "constant5" and rc["gamma"] == 2.0
    csv_path = tmp_path / "r.csv"
    run("verify", "--fn", "constant5", "--gamma", "2", "--count", "200", "--format", "csv", "--out", str(csv_path))
    raw = csv_path.read_bytes()
    assert b"\r\n" not in raw
    rows = list(csv.reader(io.StringIO(raw.decode("utf-8"))))
    assert rows[0][-3:] == ["lhs", "rhs", "margin"] and len(rows) == 201


def test_verify_is_byte_identical_without_wall_time(tmp_path):
    path = tmp_path / "r.json"
    docs = []
    for _ in range(2):
        run("verify", "--fn", "radial_jump", "--count", "20000", "--seed", "5", "--out", str(path))
        doc = json.loads(path.read_text())
        doc.pop("wall_time")
        docs.append(json.dumps(doc, sort_keys=True))
    assert docs[0] == docs[1]


def test_seed_falls_back_to_environment(tmp_path, monkeypatch):
    path = tmp_path / "r.json"
    monkeypatch.setenv("SQC_LAB_SEED", "42")
    run("verify", "--fn", "quadratic_norm", "--count", "100", "--out", str(path))
    assert json.loads(path.read_text())["run_config"]["seed"] == 42
    monkeypatch.delenv("SQC_LAB_SEED")
    run("verify", "--fn", "quadratic_norm", "--count", "100", "--out", str(path))
    assert json.loads(path.read_text())["run_config"]["seed"] == 0


@pytest.mark.parametrize("argv", [
    ["verify", "--fn", "no_such_function"],
    ["verify", "--fn", "quadratic_norm", "--gamma", "-1"],
    ["verify", "--fn", "quadratic_norm", "--count", "5"],
    ["verify", "--fn", "quadratic_norm", "--count", "1e9"],
    ["verify", "--fn", "quadratic_norm", "--n", "0"],
    ["verify", "--fn", "affine_pullback", "--A", "1 2;2 4"],
    ["verify", "--fn", "max_root_quadratic"],
    ["verify", "--fn", "quadratic_norm", "--abs-eps", "1"],
    ["probe", "--fn", "endpoint_jump", "--at", "2"],
    ["probe", "--fn", "quadratic_norm", "--at", "1,2,3"],
    ["export", "--fn", "radial_split", "--n", "3", "--grid", "10"],
    ["export", "--fn", "quadratic_norm", "--grid", "2000x2000"],
    ["export", "--fn", "quadratic_norm", "--grid", "abc"],
    ["bogus"],
])
def test_bad_input_exits_2(argv, capsys):
    # argparse writes usage errors to the real stderr; capsys keeps them out of the log
    assert run(*argv)[0] == 2


def test_io_failure_exits_3(tmp_path):
    bad = tmp_path / "missing" / "r.json"
    code, _, err = run("verify", "--fn", "quadratic_norm", "--count", "100", "--out", str(bad))
    assert code == 3 and "cannot write" in err
    code, _, _ = run("export", "--fn", "quadratic_norm", "--grid", "10", "--out", str(bad))
    assert code == 3


# ---------------------------------------------------------------- probe


def test_probe_examples(tmp_path):
    code, out, _ = run("probe", "--fn", "radial_jump", "--variant", "lower", "--rho", "1", "--beta", "1",
                       "--at", "sphere:8")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 8 and all("LscNotUsc declared=LscNotUsc ok" in ln for ln in lines)
    code, out, _ = run("probe", "--fn", "point_drop", "--alpha", "1", "--at", "0,0")
    assert code == 0 and "LscNotUsc" in out
    code, out, _ = run("probe", "--fn", "quadratic_norm", "--at", "0.3,0.4")
    assert code == 0 and "Continuous" in out
    path = tmp_path / "p.json"
    run("probe", "--fn", "radial_split", "--at", "locus:2", "--at", "0,0", "--out", str(path))
    doc = json.loads(path.read_text())
    assert doc["schema"] == 1 and len(doc["probes"]) == 5 and doc["run_config"]["command"] == "probe"
    path = tmp_path / "p.csv"
    run("probe", "--fn", "radial_split", "--at", "locus:2", "--format", "csv", "--out", str(path))
    assert len(path.read_text().splitlines()) == 5


# ---------------------------------------------------------------- modulus


def test_modulus_examples(tmp_path):
    code, out, _ = run("modulus", "--fn", "quadratic_norm", "--n", "2", "--count", "1000000", "--seed", "7")
    gamma_hat = float(out.split("gamma_hat=")[1].split()[0])
    assert code == 0 and 2 - 1e-6 <= gamma_hat <= 2.2 and "argmin" in out
    path = tmp_path / "m.json"
    run("modulus", "--fn", "affine_pullback", "--inner", "quadratic_norm", "--A", "2 0;0 2", "--out", str(path))
    doc = json.loads(path.read_text())
    assert doc["estimate"]["gamma_hat"] >= 0.5 - 1e-6 and doc["claimed_modulus"] == 0.5
    code, out, _ = run("modulus", "--fn", "max_root_quadratic", "--k", "1", "--count", "100000")
    assert code == 0 and "empirical" in out and float(out.split("gamma_hat=")[1].split()[0]) > 0


# ---------------------------------------------------------------- export


def _export(*argv):
    code, out, _ = run("export", *argv)
    assert code == 0
    return list(csv.reader(io.StringIO(out)))


def test_export_staircase():
    rows = _export("--fn", "countable_jumps", "--grid", "10000")
    assert rows[0] == ["x1", "value", "branch", "domain_class"] and len(rows) == 10001
    x = np.array([float(r[0]) for r in rows[1:]])
    v = np.array([float(r[1]) for r in rows[1:]])
    # values jump by 2^(1-k) just right of 1/k
    for k in (2, 3, 4):
        left, right = v[x <= 1 / k][-1], v[x > 1 / k][0]
        assert right - left == pytest.approx(2.0 ** (1 - k), abs=1e-3)
    assert {rows[1][3], rows[-1][3]} == {"Boundary"}


def test_export_radial_jump_grid():
    rows = _export("--fn", "radial_jump", "--variant", "lower", "--grid", "200x200")
    assert rows[0] == ["x1", "x2", "value", "branch", "domain_class"] and len(rows) == 40_001
    X = np.array([[float(r[0]), float(r[1])] for r in rows[1:]])
    inner = np.linalg.norm(X, axis=1) <= 1.0
    branches = np.array([r[3] for r in rows[1:]])
    assert len(set(branches[inner])) == 1 and len(set(branches[~inner])) == 1
    assert set(branches[inner]) != set(branches[~inner])


def test_export_parabola_is_monotone_on_each_side():
    rows = _export("--fn", "quadratic_norm", "--n", "1", "--grid", "100")
    x = np.array([float(r[0]) for r in rows[1:]])
    v = np.array([float(r[1]) for r in rows[1:]])
    assert len(rows) == 101
    np.testing.assert_allclose(v, x ** 2, rtol=1e-15)
    assert np.all(np.diff(v[x >= 0]) > 0) and np.all(np.diff(v[x <= 0]) < 0)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sqc_lab", "list", "--filter", "fixtures"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "constant5" in proc.stdout
