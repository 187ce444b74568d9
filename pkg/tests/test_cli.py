"""Command line surface: exit codes, file outputs, determinism."""

import json
import subprocess
import sys

import pytest

from tempoflow.cli import FAMILIES, main

YES_CNF = "p cnf 3 1\n1 2 -3 0\n"
UNSAT_CNF = "p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n"
UNSAT3_CNF = "p cnf 3 8\n" + "".join(
    f"{a} {b} {c} 0\n" for a in (1, -1) for b in (2, -2) for c in (3, -3)
)


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def fig1_file(tmp_path):
    path = tmp_path / "fig1.json"
    assert run("generate", "fig1", "--T", 4, "--out", path) == 0
    return path


def read(path):
    return json.loads(path.read_text())


# --- generate -----------------------------------------------------------------


def test_generate_echoes_family_and_params(fig1_file):
    data = read(fig1_file)
    assert data["family"] == "fig1"
    assert data["params"] == {"T": 4}
    assert len(data["nodes"]) == 5
    assert len(data["edges"]) == 5


def test_generate_all_parametric_families(tmp_path):
    specs = {
        "fig1": ("--T", 4),
        "flow-lb": ("--T", 8, "--delta", "1/4", "--eps", 1),
        "single-sink-lb": ("--T", 8, "--delta", "1/4"),
        "single-source-lb": ("--T", 8, "--delta", "1/4"),
        "time-lb-sink": ("--k", 2, "--T", 2),
        "time-lb-source": ("--k", 2, "--T", 2),
        "time-lb-tree": ("--k", 2, "--T", 2),
        "unit-tree": ("--k", 2, "--T", 2),
        "eaf": ("--U", 36, "--T", 4),
    }
    for family, args in specs.items():
        out = tmp_path / f"{family}.json"
        assert run("generate", family, *args, "--out", out) == 0
        assert read(out)["family"] == family


def test_generate_reduction_families(tmp_path):
    cnf = tmp_path / "phi.cnf"
    cnf.write_text(YES_CNF)
    for family, args in {
        "sat-quickest": ("--cnf", cnf, "--tau1", 2, "--tau2", 0),
        "sat-concurrent": ("--cnf", cnf),
        "sat-mc-quickest": ("--cnf", cnf, "--C", 2),
    }.items():
        out = tmp_path / f"{family}.json"
        assert run("generate", family, *args, "--out", out) == 0
        data = read(out)
        assert data["family"] == family
    out = tmp_path / "partition.json"
    assert run("generate", "partition-max", "--values", 1, 1, 2, "--out", out) == 0
    assert read(out)["family"] == "partition-max"
    assert read(out)["params"] == {"values": [1, 1, 2]}


def test_generate_family_list_matches_parser():
    assert len(FAMILIES) == 13


def test_generate_precondition_exit_code(tmp_path):
    assert run("generate", "fig1", "--T", 1, "--out", tmp_path / "x.json") == 2
    assert not (tmp_path / "x.json").exists()


# --- solve ----------------------------------------------------------------------


def test_solve_maxfot(fig1_file, tmp_path):
    out = tmp_path / "maxfot.json"
    assert run("solve", fig1_file, "--mode", "maxfot", "--out", out) == 0
    data = read(out)
    assert data["value"] == "2"
    assert data["horizon"] == 4
    assert data["witness"]["rates"]


def test_solve_maxfot_horizon_override(fig1_file, tmp_path):
    out = tmp_path / "maxfot3.json"
    assert run("solve", fig1_file, "--mode", "maxfot", "--horizon", 3, "--out", out) == 0
    assert read(out)["value"] == "3/4"


def test_solve_quickest(fig1_file, tmp_path):
    out = tmp_path / "quick.json"
    assert run("solve", fig1_file, "--mode", "quickest", "--out", out) == 0
    data = read(out)
    assert data["time"] == 4
    assert data["supply"] == "2"


def test_solve_pattern(fig1_file, tmp_path):
    out = tmp_path / "pattern.json"
    assert run("solve", fig1_file, "--mode", "pattern", "--t-max", 6, "--out", out) == 0
    data = read(out)
    assert data["pattern"]["4"] == "2"


def test_solve_cap_exceeded(fig1_file, tmp_path):
    code = run(
        "solve", fig1_file, "--mode", "maxfot", "--horizon", 5, "--max-horizon", 4,
        "--out", tmp_path / "x.json",
    )
    assert code == 3


# --- orient ---------------------------------------------------------------------


def test_orient_bruteforce(fig1_file, tmp_path):
    out = tmp_path / "bf.json"
    assert run("orient", fig1_file, "--algorithm", "bruteforce", "--jobs", 1, "--out", out) == 0
    data = read(out)
    assert data["value"] == "5/4"
    assert data["undirected"] == "2"
    assert data["witness_bits"] == 16


def test_orient_bruteforce_cap(fig1_file, tmp_path):
    code = run(
        "orient", fig1_file, "--algorithm", "bruteforce", "--max-edges", 3,
        "--out", tmp_path / "x.json",
    )
    assert code == 3


def test_orient_bicriteria(fig1_file, tmp_path):
    out = tmp_path / "bi.json"
    assert run("orient", fig1_file, "--algorithm", "bicriteria", "--out", out) == 0
    data = read(out)
    assert data["value"] == "13/8"
    assert data["horizon"] == 8
    assert len(data["orientation"]) == 5


def test_orient_fixedpoint(fig1_file, tmp_path):
    out = tmp_path / "fp.json"
    assert run("orient", fig1_file, "--algorithm", "fixedpoint", "--out", out) == 0
    data = read(out)
    assert data["status"] == "converged"
    assert data["iterations"] == 43
    assert data["certified_bound"] == "1"
    assert data["bound_source"] == "b(S+1)"
    assert data["value"] == "1250000917/1000000917"


def test_orient_fixedpoint_divergence_reported(fig1_file, tmp_path):
    out = tmp_path / "fp.json"
    code = run(
        "orient", fig1_file, "--algorithm", "fixedpoint", "--damping", "1/1000",
        "--out", out,
    )
    assert code == 4
    # reported, not erased: the failure report is still on disk
    data = read(out)
    assert data["status"] == "max-iter"
    assert data["iterations"] == 200


def test_orient_bicriteria_precondition(fig1_file, tmp_path):
    code = run(
        "orient", fig1_file, "--algorithm", "bicriteria", "--horizon", 3,
        "--out", tmp_path / "x.json",
    )
    assert code == 2


# --- price, pattern, eaf-experiment ----------------------------------------------


def test_price_flow_outputs(fig1_file, tmp_path, capsys):
    out = tmp_path / "price.json"
    assert run("price", fig1_file, "--kind", "flow", "--jobs", 1, "--table", "--out", out) == 0
    data = read(out)
    assert data["ratio"] == "8/5"
    assert data["witness"] == {
        "0": "s1>i", "1": "s2>j", "2": "j>i", "3": "j>t", "4": "i>t",
    }
    assert (tmp_path / "price.csv").exists()
    assert (tmp_path / "price.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    table = capsys.readouterr().out
    assert "ratio" in table and "8/5" in table


def test_price_time(tmp_path):
    inst = tmp_path / "unit.json"
    assert run("generate", "unit-tree", "--k", 2, "--T", 2, "--out", inst) == 0
    out = tmp_path / "price.json"
    assert run("price", inst, "--kind", "time", "--jobs", 1, "--out", out) == 0
    data = read(out)
    assert data["undirected"] == "3"
    assert data["oriented"] == "5"
    assert data["ratio"] == "5/3"


def test_pattern_outputs(tmp_path):
    inst = tmp_path / "eaf.json"
    assert run("generate", "eaf", "--U", 36, "--T", 4, "--out", inst) == 0
    out = tmp_path / "pattern.json"
    assert run("pattern", inst, "--t-max", 12, "--out", out) == 0
    data = read(out)
    assert data["pattern"]["8"] == "148"
    assert (tmp_path / "pattern.csv").read_text().splitlines()[0] == "theta,value"
    assert (tmp_path / "pattern.png").exists()


def test_eaf_experiment_outputs(tmp_path):
    inst = tmp_path / "eaf.json"
    assert run("generate", "eaf", "--U", 36, "--T", 4, "--out", inst) == 0
    out = tmp_path / "exp.json"
    assert run("eaf-experiment", inst, "--t-max", 12, "--jobs", 1, "--out", out) == 0
    data = read(out)
    assert data["best_alpha"] == "1"
    assert data["best_alpha_bits"] == 4
    assert data["best_beta"] == "74/5"
    assert data["best_beta_bits"] == 0
    assert len(data["orientations"]) == 32
    assert (tmp_path / "exp.csv").exists()
    assert (tmp_path / "exp.png").exists()


# --- verify-reduction --------------------------------------------------------------


def write_cnf(tmp_path, text, name="phi.cnf"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_verify_sat_quickest_yes(tmp_path):
    out = tmp_path / "v.json"
    cnf = write_cnf(tmp_path, YES_CNF)
    assert run("verify-reduction", "sat-quickest", "--cnf", cnf, "--out", out) == 0
    data = read(out)
    assert data["confirmed"] is True
    assert data["satisfiable"] is True
    assert data["measured"] == "2"
    assert data["expected"] == "= 2"


def test_verify_sat_quickest_no(tmp_path):
    out = tmp_path / "v.json"
    cnf = write_cnf(tmp_path, UNSAT_CNF)
    assert run("verify-reduction", "sat-quickest", "--cnf", cnf, "--out", out) == 0
    data = read(out)
    assert data["confirmed"] is True
    assert data["satisfiable"] is False
    assert data["measured"] == "4"
    assert data["expected"] == ">= 4"


def test_verify_partition_max(tmp_path):
    out = tmp_path / "v.json"
    assert run("verify-reduction", "partition-max", "--values", 1, 1, 2, "--out", out) == 0
    yes = read(out)
    assert yes["confirmed"] is True and yes["measured"] == "2"
    assert run("verify-reduction", "partition-max", "--values", 1, 1, 4, "--out", out) == 0
    no = read(out)
    assert no["confirmed"] is True and no["measured"] == "1"


def test_verify_sat_concurrent(tmp_path):
    out = tmp_path / "v.json"
    cnf = write_cnf(tmp_path, YES_CNF)
    assert run("verify-reduction", "sat-concurrent", "--cnf", cnf, "--out", out) == 0
    yes = read(out)
    assert yes["confirmed"] is True and yes["measured"] == "1/2"
    cnf3 = write_cnf(tmp_path, UNSAT3_CNF, "no3.cnf")
    assert run("verify-reduction", "sat-concurrent", "--cnf", cnf3, "--out", out) == 0
    no = read(out)
    assert no["confirmed"] is True and no["measured"] == "0"


def test_verify_sat_concurrent_rejects_repeats(tmp_path):
    cnf = write_cnf(tmp_path, UNSAT_CNF)
    assert run("verify-reduction", "sat-concurrent", "--cnf", cnf, "--out", tmp_path / "v.json") == 2


def test_verify_sat_mc_quickest(tmp_path):
    out = tmp_path / "v.json"
    cnf = write_cnf(tmp_path, YES_CNF)
    assert run("verify-reduction", "sat-mc-quickest", "--cnf", cnf, "--C", 2, "--out", out) == 0
    yes = read(out)
    assert yes["confirmed"] is True and yes["measured"] == "1"
    cnf_no = write_cnf(tmp_path, UNSAT_CNF, "no.cnf")
    assert run("verify-reduction", "sat-mc-quickest", "--cnf", cnf_no, "--C", 6, "--out", out) == 0
    no = read(out)
    assert no["confirmed"] is True and no["measured"] == "inf"


# --- determinism and metadata --------------------------------------------------------


def test_price_outputs_byte_identical(fig1_file, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir(), b.mkdir()
    for d in (a, b):
        assert run("price", fig1_file, "--kind", "flow", "--jobs", 1, "--out", d / "p.json") == 0
    for name in ("p.json", "p.csv", "p.png"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_meta_sidecar_keeps_results_identical(fig1_file, tmp_path):
    plain, with_meta = tmp_path / "plain.json", tmp_path / "meta.json"
    assert run("solve", fig1_file, "--mode", "maxfot", "--out", plain) == 0
    meta_file = tmp_path / "run.meta.json"
    assert run(
        "solve", fig1_file, "--mode", "maxfot", "--out", with_meta, "--meta", meta_file
    ) == 0
    assert plain.read_bytes() == with_meta.read_bytes()
    meta = read(meta_file)
    assert "written_at" in meta and "elapsed_seconds" in meta


def test_jobs_env_var(fig1_file, tmp_path, monkeypatch):
    monkeypatch.setenv("TEMPOFLOW_JOBS", "2")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run("orient", fig1_file, "--algorithm", "bruteforce", "--out", a) == 0
    monkeypatch.delenv("TEMPOFLOW_JOBS")
    assert run("orient", fig1_file, "--algorithm", "bruteforce", "--jobs", 1, "--out", b) == 0
    assert a.read_bytes() == b.read_bytes()


def test_missing_instance_is_validation_error(tmp_path):
    assert run("solve", tmp_path / "nope.json", "--mode", "maxfot", "--out", tmp_path / "o.json") == 2


def test_console_script_help():
    proc = subprocess.run(
        [sys.executable, "-m", "tempoflow.cli", "--help"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    for sub in ("generate", "solve", "orient", "price", "verify-reduction", "pattern", "eaf-experiment"):
        assert sub in proc.stdout
