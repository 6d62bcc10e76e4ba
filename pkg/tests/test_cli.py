import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from dstlattice import cli, dnls
from dstlattice.errors import FormatError


def run_json(capsys, *argv):
    code = cli.main([*argv, "--report", "json"])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def strip_times(doc):
    return {**doc, "reports": [{k: v for k, v in r.items() if k != "wall_time"} for r in doc["reports"]]}


# ---------------------------------------------------------------- CSV format
def test_csv_round_trip_is_bit_exact(tmp_path):
    lat = dnls.soliton("II", 12, 12)
    path = tmp_path / "lat.csv"
    cli.dump_lattice({"X": lat.X, "Y": lat.Y}, path)
    rows = list(csv.reader(path.open()))
    assert tuple(rows[0]) == cli.CSV_HEADER
    assert len(rows) == 2 * 144 + 1
    back = cli.load_lattice(path)
    assert np.array_equal(back["X"], lat.X) and np.array_equal(back["Y"], lat.Y)


@pytest.mark.parametrize("body, msg", [
    ("", "empty"),
    ("x,n,a,re,im\n", "header"),
    ("field,n,a,re,im\nX,0,0,1.0\n", "columns"),
    ("field,n,a,re,im\nX,0,0,abc,0\n", "malformed"),
    ("field,n,a,re,im\nX,0,0,1,0\nX,0,0,1,0\n", "duplicate"),
    ("field,n,a,re,im\nX,0,0,1,0\nX,1,1,1,0\n", "grid"),
])
def test_bad_csv_raises_format_error(tmp_path, body, msg):
    path = tmp_path / "bad.csv"
    path.write_text(body)
    with pytest.raises(FormatError, match=msg):
        cli.load_lattice(path)


def test_verify_reads_a_dumped_soliton(tmp_path, capsys):
    path = tmp_path / "sol.csv"
    assert cli.main(["dnls", "soliton", "--csv", str(path)]) == 0
    capsys.readouterr()
    code, doc = run_json(capsys, "dnls", "verify", "--input", str(path))
    assert code == 0 and doc["pass"]


def test_verify_flags_a_corrupted_lattice(tmp_path, capsys):
    lat = dnls.soliton("I", 8, 8)
    X = lat.X.copy()
    X[3, 4] += 0.01
    path = tmp_path / "bad.csv"
    cli.dump_lattice({"X": X, "Y": lat.Y}, path)
    code, doc = run_json(capsys, "dnls", "verify", "--input", str(path))
    assert code == 1
    worst = max(doc["reports"], key=lambda r: r["max_residual"])
    assert abs(worst["site_argmax"][0] - 3) <= 1


# ---------------------------------------------------------------- JSON reports
def test_json_schema_and_determinism(capsys):
    _, a = run_json(capsys, "ybe", "--samples", "10")
    _, b = run_json(capsys, "ybe", "--samples", "10")
    assert a["schema"] == 1
    checks = [r["check"] for r in a["reports"]]
    assert checks == sorted(checks)
    for r in a["reports"]:
        assert set(r) == {"check", "params", "max_residual", "site_argmax", "pass", "wall_time"}
        assert len(r["site_argmax"]) == 2
    assert strip_times(a) == strip_times(b)


def test_out_file_matches_stdout(tmp_path, capsys):
    out = tmp_path / "r.json"
    _, doc = run_json(capsys, "poisson", "check", "--which", "L_al", "--samples", "5", "--out", str(out))
    assert strip_times(json.loads(out.read_text())) == strip_times(doc)


# ---------------------------------------------------------------- config and seeds
def test_config_sets_defaults_and_flags_win(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sample count\nsamples = 7\nkind = yangian_quantum\n")
    _, doc = run_json(capsys, "ybe", "--config", str(cfg))
    assert [r["params"]["samples"] for r in doc["reports"]] == [7]
    _, doc = run_json(capsys, "ybe", "--config", str(cfg), "--samples", "3")
    assert doc["reports"][0]["params"]["samples"] == 3


@pytest.mark.parametrize("text", ["samples 7\n", "bogus = 1\n", "kind = nope\n", "samples = x\n"])
def test_bad_config_exits_2(tmp_path, capsys, text):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(text)
    assert cli.main(["ybe", "--config", str(cfg)]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ConfigError"


def test_seed_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("LI_SEED", "17")
    _, doc = run_json(capsys, "ybe", "--kind", "xxz_quantum", "--samples", "5")
    assert doc["reports"][0]["params"]["seed"] == 17
    _, doc = run_json(capsys, "ybe", "--kind", "xxz_quantum", "--samples", "5", "--seed", "2")
    assert doc["reports"][0]["params"]["seed"] == 2
    monkeypatch.setenv("LI_SEED", "abc")
    assert cli.main(["ybe"]) == 2


# ---------------------------------------------------------------- exit codes
@pytest.mark.parametrize("argv, code", [
    (["ybe", "--samples", "5"], 0),
    (["dnls", "soliton", "--type", "II", "--verify"], 0),
    (["dnls", "soliton", "--xi-root", "11"], 2),
    (["dnls", "heat", "--modes", "1:1;0.3:1.2+0.1i"], 0),
    (["dnls", "darboux", "--modes", "1:1;0.4:1.2+0.1i;0.3:0.8-0.2i", "--N", "10", "--M", "8",
      "--open-space"], 0),
    (["dnls", "step", "--N", "8", "--M", "6"], 0),
    (["al", "step"], 0),
    (["al", "step", "--open-seed", "--N", "8", "--M", "8", "--radius", "0.3", "--skip-wrap"], 0),
    (["al", "conserve"], 0),
    (["al", "verify", "--case", "A"], 2),
    (["quantum", "weyl", "--set", "qtime"], 0),
    (["quantum", "weyl", "--set", "rtt"], 0),
    (["quantum", "weyl", "--set", "appendixB"], 1),
    (["quantum", "weyl", "--set", "exchange_corrected"], 0),
    (["quantum", "qboson", "--p", "4", "--draws", "3"], 0),
    (["quantum", "qboson", "--p", "2"], 2),
    (["poisson", "check", "--samples", "5", "--jacobi", "--involution"], 0),
    (["ybe", "--tol", "-1"], 2),
    (["nosuch"], 2),
])
def test_exit_codes(argv, code, capsys):
    assert cli.main(argv) == code


def test_tight_tolerance_fails_a_passing_check(capsys):
    assert cli.main(["dnls", "soliton", "--verify", "--tol", "1e-30"]) == 1


def test_semi_verify(tmp_path, capsys):
    modes = tmp_path / "modes.json"
    modes.write_text(json.dumps({"flow": "nls", "g": 1.0,
                                 "modes": [{"c": 1.0, "k": 0.4}, {"c": 0.3, "k": "0.9+0.2j"}]}))
    code, doc = run_json(capsys, "semi", "verify", "--modes", str(modes))
    assert code == 0
    per = tmp_path / "periodic.json"
    per.write_text(json.dumps({"periodic": {"M": 5, "ms": [0, 1], "cs": [1.0, 0.2]}}))
    code, doc = run_json(capsys, "semi", "verify", "--modes", str(per))
    assert code == 0
    assert "semi_hamiltonian_drift" in {r["check"] for r in doc["reports"]}
    assert cli.main(["semi", "verify"]) == 2


def test_missing_field_in_input(tmp_path, capsys):
    path = tmp_path / "x.csv"
    cli.dump_lattice({"X": np.ones((4, 4))}, path)
    assert cli.main(["dnls", "verify", "--input", str(path)]) == 2


def test_console_entry_point_runs():
    out = subprocess.run([sys.executable, "-m", "dstlattice.cli", "ybe", "--samples", "3"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.count("PASS") == 5
