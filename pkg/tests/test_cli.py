import json
import subprocess
import sys

import pytest

from conftest import GOLDEN


def run(*args, env=None, cwd=None):
    return subprocess.run([sys.executable, "-m", "eipack", *map(str, args)], capture_output=True, text=True,
                          env=env, cwd=cwd)


def test_bounds_table1_triple():
    cp = run("bounds", "--d", 8, "--r", 3, "--n", 5)
    assert cp.returncode == 0
    rep = json.loads(cp.stdout)
    assert rep["case"] == "IV" and rep["eitff_excluded"] is True
    assert rep["tolerances"] == {"rank_rel": 1e-8, "residual_abs": 1e-9}


def test_bounds_424():
    rep = json.loads(run("bounds", "--d", 4, "--r", 2, "--n", 4).stdout)
    assert rep["counting"] == {"gerzon": 10, "lemmens_seidel": 8, "k3": 4}
    assert rep["comparison"] == "WELCH_EXCEEDS" and rep["radon_hurwitz"] == {"R": 2, "C": 4}


def test_bounds_bad_input():
    assert run("bounds", "--d", 2, "--r", 3, "--n", 2).returncode == 2
    assert run("bounds", "--d", 2).returncode == 2


def test_table(tmp_path):
    cp = run("table", "--dmax", 8)
    assert cp.returncode == 0 and cp.stdout == "d,r,n,case\n8,3,5,IV\n"
    out = tmp_path / "t.csv"
    assert run("table", "--dmax", 29, "--out", out).returncode == 0
    text = out.read_bytes().decode()
    assert "\r" not in text
    golden = (GOLDEN / "table1.csv").read_text()
    assert text.startswith(golden)


def test_table_naimark():
    lines = run("table", "--dmax", 11, "--naimark").stdout.splitlines()
    assert len(lines) == 1 + 2 * 3 and lines[0].endswith(",origin")


def test_plotdata():
    cp = run("plotdata", "--nmax", 8, "--grid", 400)
    lines = cp.stdout.splitlines()
    assert lines[0] == "x,spark,welch_2,welch_3,welch_4,welch_5,welch_6,welch_7,welch_8,marker"
    marks = [line for line in lines if not line.endswith(",")]
    assert any(m.startswith("2.5,0.5,") and m.endswith(",filled") for m in marks)
    assert any(m.startswith(f"{27 / 7!r},{1 / 3!r},") and m.endswith(",open") for m in marks)
    assert any(m.startswith(f"{16 / 7!r},0.5,") and m.endswith(",x") for m in marks)


def test_construct_verify_round_trip(tmp_path):
    f = tmp_path / "a.json"
    cp = run("construct", "eitff2r", "--r", 4, "--field", "C", "--out", f)
    assert cp.returncode == 0
    built = json.loads(cp.stdout)
    assert built["certificate"]["is_eitff"] and built["params"]["n"] == 8
    assert built["corner"]["satisfied"]
    cp = run("verify", f, "--require", "eitff", "--require", "dimKn")
    assert cp.returncode == 0
    ver = json.loads(cp.stdout)
    assert ver["certificate"] == built["certificate"]
    assert ver["corner"]["dims"][-1] == 8 and ver["verified"]


def test_construct_r3_complex_has_n4(tmp_path):
    f = tmp_path / "a.json"
    assert run("construct", "eitff2r", "--r", 3, "--out", f).returncode == 0
    ver = json.loads(run("verify", f, "--require", "dimKn").stdout)
    assert (ver["d"], ver["n"]) == (6, 4) and ver["corner"]["dims"][-1] == 4


def test_eitff2r_refuses_n(tmp_path):
    assert run("construct", "eitff2r", "--r", 4, "--n", 8, "--out", tmp_path / "x.json").returncode == 2


def test_seed_from_env(tmp_path):
    import os

    env = dict(os.environ, EIPACK_SEED="7")
    a = json.loads(run("construct", "eitff2r", "--r", 2, "--out", tmp_path / "a.json", env=env).stdout)
    b = json.loads(run("construct", "eitff2r", "--r", 2, "--seed", 7, "--out", tmp_path / "b.json").stdout)
    assert a["seed"] == 7 and a == b
    assert (tmp_path / "a.json").read_text() == (tmp_path / "b.json").read_text()


def test_construct_ei3(tmp_path):
    rep = json.loads(run("construct", "ei3", "--d", 5, "--r", 2, "--alpha", 0.5, "--out", tmp_path / "e.json").stdout)
    cert = rep["certificate"]
    assert cert["is_ei"] and abs(cert["alpha"] - 0.5) <= 1e-9 and (cert["d"], cert["n"]) == (5, 3)


def test_construct_library_errors_exit_1(tmp_path):
    out = tmp_path / "x.json"
    assert run("construct", "ei3", "--d", 5, "--r", 2, "--alpha", 0.5, "--field", "R", "--out", out).returncode == 1
    assert run("construct", "ei3", "--d", 9, "--r", 2, "--alpha", 0.5, "--out", out).returncode == 1
    assert run("construct", "counterexample", "--r", 4, "--field", "R", "--out", out).returncode == 1
    assert not out.exists()


def test_construct_missing_params(tmp_path):
    assert run("construct", "ei3", "--d", 5, "--out", tmp_path / "x.json").returncode == 2
    assert run("construct", "trivial", "--r", 2, "--n", 3).returncode == 2


def test_counterexample(tmp_path):
    rep = json.loads(run("construct", "counterexample", "--r", 3, "--field", "R", "--out", tmp_path / "c.json").stdout)
    assert rep["certificate"]["is_eitff"]
    assert rep["corner"]["dims"] == [16, 11, 6] and not rep["corner"]["satisfied"]
    cp = run("verify", tmp_path / "c.json", "--require", "dimKn")
    assert cp.returncode == 1 and "dim K_n = n" in cp.stderr


def test_hoggar_naimark_dsum(tmp_path):
    h = tmp_path / "h.json"
    run("construct", "eitff2r", "--r", 1, "--field", "C", "--out", h)
    rep = json.loads(run("construct", "hoggar", "--in", h, "--out", tmp_path / "hr.json").stdout)
    assert rep["certificate"]["is_eitff"] and rep["certificate"]["field"] == "R" and rep["certificate"]["d"] == 4

    t = tmp_path / "t.json"
    run("construct", "trivial", "--r", 2, "--n", 3, "--field", "R", "--out", t)
    rep = json.loads(run("construct", "naimark", "--in", t, "--out", tmp_path / "tn.json").stdout)
    assert rep["certificate"]["is_eitff"] and abs(rep["certificate"]["alpha"] - 0.5) <= 1e-9

    e = tmp_path / "e.json"
    run("construct", "eitff2r", "--r", 2, "--field", "R", "--out", e)
    rep = json.loads(run("construct", "dsum", "--in", e, "--in", e, "--out", tmp_path / "ds.json").stdout)
    assert rep["certificate"]["is_eitff"] and rep["certificate"]["d"] == 8

    assert run("construct", "hoggar", "--in", tmp_path / "nope.json", "--out", tmp_path / "z.json").returncode == 2
    assert run("construct", "hoggar", "--in", t, "--out", tmp_path / "z.json").returncode == 1


def test_verify_corrupted_file(tmp_path):
    f = tmp_path / "a.json"
    run("construct", "eitff2r", "--r", 2, "--out", f)
    obj = json.loads(f.read_text())
    obj["isometries"][0][0][0][0] += 0.1
    f.write_text(json.dumps(obj))
    cp = run("verify", f)
    assert cp.returncode == 2 and "NotIsometry" in cp.stderr


def test_verify_detects_tampered_certificate(tmp_path):
    f = tmp_path / "a.json"
    run("construct", "eitff2r", "--r", 2, "--out", f)
    obj = json.loads(f.read_text())
    obj["provenance"]["certificate"]["coherence"] = 0.1
    f.write_text(json.dumps(obj))
    cp = run("verify", f)
    assert cp.returncode == 1 and "certificate" in cp.stderr


def test_verify_requirement_fails_on_non_tight(tmp_path):
    f = tmp_path / "e.json"
    run("construct", "ei3", "--d", 5, "--r", 2, "--alpha", 0.5, "--out", f)
    assert run("verify", f, "--require", "ei").returncode == 0
    cp = run("verify", f, "--require", "tight")
    assert cp.returncode == 1 and "is_tight" in cp.stderr


def test_verify_J_and_corner_max(tmp_path):
    f = tmp_path / "a.json"
    run("construct", "eitff2r", "--r", 4, "--field", "C", "--out", f)
    rep = json.loads(run("verify", f, "--J", "1,2,4,8", "--corner-max", 3).stdout)
    assert rep["corner_J"]["J"] == [1, 2, 4, 8] and rep["corner_J"]["certified"]
    assert rep["corner_prefix"]["dims"] == [49, 34, 19]
    assert run("verify", f, "--J", "1,x").returncode == 2
    assert run("verify", f, "--J", "1,9").returncode == 2


def test_corner_command(tmp_path):
    f = tmp_path / "a.json"
    run("construct", "eitff2r", "--r", 2, "--field", "R", "--out", f)
    rep = json.loads(run("corner", f).stdout)
    assert rep["dims"] == [8, 6, 4, 4] and rep["certified"]
    rep = json.loads(run("corner", f, "--J", "1,3").stdout)
    assert rep["J"] == [1, 3] and rep["dim"] == 6


def test_tolerance_flags(tmp_path):
    f = tmp_path / "a.json"
    run("construct", "eitff2r", "--r", 2, "--out", f)
    rep = json.loads(run("verify", f, "--tol-rank", "1e-7", "--tol-res", "1e-8").stdout)
    assert rep["tolerances"] == {"rank_rel": 1e-7, "residual_abs": 1e-8}
    assert run("verify", f, "--tol-res", "2").returncode == 2
