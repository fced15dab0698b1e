import json
import math

import numpy as np
import pytest

from mmkit.cli import EXIT_HARD_FAIL, EXIT_IO, EXIT_OK, EXIT_USAGE, main
from mmkit.space import load_space


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_cycle_writes_valid_file(tmp_path, capsys):
    out = tmp_path / "c.json"
    code, _, _ = run(capsys, "gen", "cycle", "--n", "64", "--circumference", "6.283185307", "--out", str(out))
    assert code == EXIT_OK
    sp = load_space(out)
    assert sp.n == 64 and sp.label["generator"] == "cycle"


def test_gen_dumbbell(tmp_path, capsys):
    out = tmp_path / "d.json"
    code, _, _ = run(
        capsys, "gen", "dumbbell", "--clique", "5", "--bridge-len", "1", "--bridge-weight", "1e-4", "--out", str(out)
    )
    assert code == EXIT_OK
    assert load_space(out).n == 11


def test_gen_usage_error(tmp_path, capsys):
    code, _, err = run(capsys, "gen", "cycle", "--n", "2", "--out", str(tmp_path / "x.json"))
    assert code == EXIT_USAGE
    assert err.startswith("usage-error:")


def test_compute_spectrum(tmp_path, capsys):
    out = tmp_path / "c.json"
    run(capsys, "gen", "cycle", "--n", "64", "--out", str(out))
    code, stdout, _ = run(capsys, "compute", "spectrum", str(out), "-k", "4")
    assert code == EXIT_OK
    vals = json.loads(stdout)["eigenvalues"]
    assert len(vals) == 5
    assert vals == sorted(vals)


def test_compute_sep(tmp_path, capsys):
    out = tmp_path / "c.json"
    run(capsys, "gen", "cycle", "--n", "256", "--out", str(out))
    code, stdout, _ = run(capsys, "compute", "sep", str(out), "--kappas", "0.25,0.25")
    assert code == EXIT_OK
    payload = json.loads(stdout)
    assert payload["sep"] == pytest.approx(math.pi / 2, rel=0.02)
    assert payload["provenance"] == "exact"


def test_compute_hk_sweep_dominates_exact(tmp_path, capsys):
    out = tmp_path / "c.json"
    run(capsys, "gen", "cycle", "--n", "12", "--out", str(out))
    _, exact_out, _ = run(capsys, "compute", "hk", str(out), "--k", "1", "--method", "exact")
    _, sweep_out, _ = run(capsys, "--seed", "7", "compute", "hk", str(out), "--k", "1", "--method", "sweep")
    assert json.loads(sweep_out)["h_k"] >= json.loads(exact_out)["h_k"] - 1e-12


def test_compute_w2_csv_format(tmp_path, capsys):
    out = tmp_path / "p.json"
    run(capsys, "gen", "cycle", "--n", "8", "--out", str(out))
    code, stdout, _ = run(
        capsys, "--format", "csv", "compute", "w2", str(out), "--mu", "delta:0", "--nu", "uniform"
    )
    assert code == EXIT_OK
    assert stdout.splitlines()[0].startswith("provenance,wasserstein2") or "wasserstein2" in stdout.splitlines()[0]


def test_verify_writes_report_and_exit_zero(tmp_path, capsys):
    space_file = tmp_path / "c.json"
    report = tmp_path / "r.json"
    run(capsys, "gen", "cycle", "--n", "64", "--out", str(space_file))
    code, _, _ = run(capsys, "--seed", "1", "verify", str(space_file), "--report", str(report))
    assert code == EXIT_OK
    rows = json.loads(report.read_text())
    assert all("verdict" in r and "class" in r for r in rows)
    assert any(r["class"] == "hard" for r in rows)


def test_verify_byte_identical_reports(tmp_path, capsys):
    space_file = tmp_path / "c.json"
    run(capsys, "gen", "cycle", "--n", "32", "--out", str(space_file))
    r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
    run(capsys, "--seed", "5", "verify", str(space_file), "--report", str(r1))
    run(capsys, "--seed", "5", "verify", str(space_file), "--report", str(r2))
    assert r1.read_bytes() == r2.read_bytes()


def test_verify_plot_data(tmp_path, capsys):
    space_file = tmp_path / "c.json"
    run(capsys, "gen", "cycle", "--n", "48", "--out", str(space_file))
    plot = tmp_path / "series.csv"
    code, _, _ = run(capsys, "verify", str(space_file), "--report", str(tmp_path / "r.json"), "--plot-data", str(plot))
    assert code == EXIT_OK
    lines = plot.read_text().splitlines()
    assert "lambda_k" in lines[0] and len(lines) >= 2


def test_verify_missing_file(capsys):
    code, _, err = run(capsys, "verify", "does-not-exist.json")
    assert code == EXIT_IO
    assert err.startswith("io-error:")


def test_malformed_space_file_is_io_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{\"version\": 1}")
    code, _, err = run(capsys, "compute", "spectrum", str(bad))
    assert code == EXIT_IO
    assert err.startswith("input-error:")


def test_unknown_flag_is_usage_error(capsys):
    code, _, err = run(capsys, "--no-such-flag")
    assert code == EXIT_USAGE
    assert err.startswith("usage-error:")
