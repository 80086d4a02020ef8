import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from hypball.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, job_seeds, parse_transform, run
from hypball.reports import read_csv_table


def _run(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_phi_table_planar(capsys):
    code, out, _ = _run(capsys, "phi", "--n", "2", "--grid", "5")
    assert code == EXIT_OK
    header, rows = read_csv_table(out)
    assert header == ["r", "phi", "log_phi", "E_n"] and len(rows) == 5
    for r, phi, _, E in rows:
        assert phi == pytest.approx(1 - r * r, abs=1e-15) and E == 1.0


def test_upsilon_at_four_pi(capsys):
    code, out, _ = _run(capsys, "upsilon", "--n", "2", "--v", "12.566370")
    header, rows = read_csv_table(out)
    assert code == EXIT_OK
    assert rows[0][header.index("upsilon")] == pytest.approx(1 / (8 * math.pi), rel=1e-7)


def test_calpha_planar(capsys):
    code, out, _ = _run(capsys, "calpha", "--n", "2", "--alpha", "1.5,2,3")
    _, rows = read_csv_table(out)
    np.testing.assert_allclose([r[1] for r in rows], [0.5, 1.0, 2.0], rtol=1e-12)


def test_norm_commands(capsys):
    code, out, _ = _run(capsys, "norm", "bergman", "--field", "planar_z", "--p", "2", "--alpha", "2")
    _, rows = read_csv_table(out)
    assert code == EXIT_OK and rows[0][3] == pytest.approx(math.sqrt(0.5), rel=1e-10)
    code, out, _ = _run(capsys, "norm", "hardy", "--field", "planar_1pz", "--p", "2", "--format", "json")
    assert json.loads(out)["rows"][0][3] == pytest.approx(math.sqrt(2), rel=1e-12)


def test_levelset_unit(capsys):
    code, out, _ = _run(capsys, "levelset", "--n", "2", "--a", "1", "--points", "20", "--decades", "2")
    header, rows = read_csv_table(out)
    assert code == EXIT_OK and header == ["t", "mu", "mu_err", "g", "g_err"]
    for t, mu, _, g, _ in rows[1:]:
        assert mu == pytest.approx(4 * math.pi * (1 / t - 1), rel=1e-6)
        assert g == pytest.approx(1.0, rel=1e-6)


def test_check_contraction_unit(capsys):
    code, out, err = _run(capsys, "check", "contraction", "--n", "2", "--r", "1", "--alphas", "2,3", "--field", "unit")
    assert code == EXIT_OK and "PASS" in err
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows and all(float(r["margin"]) == 0.0 for r in rows)
    assert {r["check"] for r in rows} == {"chain", "equality"}


@pytest.mark.parametrize("suite, extra", [
    ("lemma", ["--trials", "50"]),
    ("coeff", ["--p", "1.5", "--mappings", "5"]),
    ("isoperim", ["--p", "2", "--mappings", "5"]),
    ("co32", ["--p", "2", "--alpha", "1.5", "--mappings", "5"]),
    ("hardy-thm", ["--field", "exp_linear", "--G", "step:0.3:1"]),
    ("bergman-thm", ["--field", "unit", "--G", "pwl:0,0.2,0.5:0.5,1,3"]),
    ("monotone", ["--field", "exp_linear", "--a", "1", "--points", "50"]),
    ("weaktype", ["--field", "pullback_unit"]),
    ("limits", ["--field", "planar_z", "--alphas", "2,1.5,1.2"]),
])
def test_check_suites_pass(capsys, suite, extra):
    code, out, _ = _run(capsys, "check", suite, "--n", "2", *extra)
    assert code == EXIT_OK, out


def test_bergman_check_rejects_step_transform(capsys):
    # a step transform is not convex: the Bergman comparison refuses it
    code, _, err = _run(capsys, "check", "bergman-thm", "--G", "step:0.3:1")
    assert code == EXIT_USAGE and "convex" in err


def test_check_exit_one_on_failed_suite(capsys, monkeypatch):
    import hypball.verify as V
    from hypball.reports import VerdictReport

    def failing(trials, seed=0):
        rep = VerdictReport("lemma", {})
        rep.add("inequality", [-1.0], [0.0])
        return rep

    monkeypatch.setattr(V, "lemma_trials", failing)
    code, out, err = _run(capsys, "check", "lemma")
    assert code == EXIT_FAIL and "FAIL" in err and out.rstrip().endswith("fail")


@pytest.mark.parametrize("argv", [
    [],
    ["bogus"],
    ["check", "contraction", "--alphas", "1,2"],
    ["check", "contraction", "--alphas", "x"],
    ["check", "contraction", "--n", "4"],
    ["check", "contraction", "--field", "nope"],
    ["check", "coeff", "--n", "3"],
    ["check", "hardy-thm", "--G", "cubic"],
    ["phi", "--n", "1"],
    ["phi", "--rmax", "1"],
    ["norm", "bergman", "--alpha", "1"],
    ["phi", "--config", "/nonexistent/cfg"],
    ["report", "--dir", "/nonexistent"],
])
def test_usage_errors_exit_two(capsys, argv):
    assert run(argv) == EXIT_USAGE


def test_high_dim_flag(capsys):
    code, _, _ = _run(capsys, "norm", "hardy", "--n", "4", "--allow-high-dim")
    assert code == EXIT_OK


def test_config_file_merged_beneath_flags(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# planar table\nn = 2\ngrid = 3\nformat = json\n")
    code, out, _ = _run(capsys, "phi", "--config", str(cfg), "--grid", "4")
    data = json.loads(out)
    assert code == EXIT_OK and len(data["rows"]) == 4 and data["meta"]["config"]["n"] == 2
    cfg.write_text("G = power:3\n")
    args_code, out, _ = _run(capsys, "check", "hardy-thm", "--config", str(cfg), "--format", "json")
    assert json.loads(out)["config"]["transform"] == "power:3"
    cfg.write_text("colour = blue\n")
    assert run(["phi", "--config", str(cfg)]) == EXIT_USAGE
    cfg.write_text("grid = many\n")
    assert run(["phi", "--config", str(cfg)]) == EXIT_USAGE


def test_output_dir_manifest_and_report(capsys, tmp_path, monkeypatch):
    d = tmp_path / "out"
    assert run(["phi", "--output-dir", str(d)]) == EXIT_OK
    monkeypatch.setenv("HYPBALL_OUTPUT_DIR", str(d))
    assert run(["check", "lemma", "--trials", "20"]) == EXIT_OK
    capsys.readouterr()
    manifest = json.loads((d / "manifest.json").read_text())
    assert sorted(r["file"] for r in manifest["runs"]) == ["check_lemma_n2.csv", "phi_n2.csv"]
    code, out, _ = _run(capsys, "report", "--format", "json")
    assert code == EXIT_OK and json.loads(out)["passed"] is True


def test_deterministic_and_job_count_independent(capsys, tmp_path):
    argv = ["check", "weaktype", "--field", "exp_linear,pullback_exp", "--seed", "5", "--format", "json"]
    outs = []
    for jobs in ("1", "1", "2"):
        d = tmp_path / f"run{len(outs)}"
        assert run(argv + ["--jobs", jobs, "--output-dir", str(d)]) == EXIT_OK
        outs.append((d / "check_weaktype_n2.json").read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_job_seeds():
    assert job_seeds(3, 4) == job_seeds(3, 4)
    assert len(set(job_seeds(3, 4))) == 4
    assert job_seeds(3, 2) == job_seeds(3, 4)[:2]


def test_parse_transform():
    assert parse_transform("power:2").params == (2.0,)
    assert parse_transform("step:0.3,0.6:1,2").kind == "step"
    for bad in ("power", "pwl:0:1:2", "step:a:1", "power:-1"):
        with pytest.raises(Exception):
            parse_transform(bad)


def test_csv_json_round_trip_17_digits(capsys):
    _, out_csv, _ = _run(capsys, "phi", "--n", "3", "--grid", "7")
    _, out_json, _ = _run(capsys, "phi", "--n", "3", "--grid", "7", "--format", "json")
    _, rows = read_csv_table(out_csv)
    data = json.loads(out_json)
    for a, b in zip(rows, data["rows"]):
        assert a == b  # exact float equality
    for line in out_csv.splitlines()[1:]:
        for cell in line.split(","):
            assert float(format(float(cell), ".17g")) == float(cell)


def test_console_script_runs():
    res = subprocess.run([sys.executable, "-m", "hypball.cli", "phi", "--grid", "2"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("r,phi")
    res = subprocess.run([sys.executable, "-m", "hypball.cli", "phi", "--n", "0"], capture_output=True, text=True)
    assert res.returncode == 2
