import json
import subprocess
import sys

import numpy as np
import pytest
import scipy.io

from magbilap.cli import EXIT_FAIL, EXIT_NOT_SATISFIED, EXIT_OK, EXIT_USAGE, RunManifest, main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_stats_half_line(capsys):
    code, out, _ = run(["stats", "--builder", "half_line_unit", "--n-max", "5"], capsys)
    assert code == EXIT_OK
    doc = json.loads(out)
    rows = doc["report"]["rows"]
    assert [(r["d_n"], r["p_n"]) for r in rows] == [(2, 1.0)] * 5
    assert doc["manifest"]["command"] == "stats"


def test_stats_tree_csv(capsys):
    code, out, _ = run(["stats", "--builder", "radial_tree", "--kappa", "1", "--n-max", "4",
                        "--format", "csv"], capsys)
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "n,d_n,p_n,beta_n,d_n_p_n_over_n"
    assert [int(l.split(",")[1]) for l in lines[1:]] == [3, 4, 5, 6]


def test_stats_single_row(capsys):
    _, out, _ = run(["stats", "--builder", "half_line_sqrt", "--n-max", "1"], capsys)
    assert len(json.loads(out)["report"]["rows"]) == 1


def test_check_exit_codes(capsys, tmp_path):
    from magbilap import EXAMPLE_INSTANCES
    path = tmp_path / "inst.json"
    path.write_text(json.dumps(EXAMPLE_INSTANCES["half_line_unit"]))
    code, out, err = run(["check", str(path)], capsys)
    assert code == EXIT_OK and "verdict: satisfied" in err
    assert json.loads(out)["manifest"]["input_digests"]
    code, _, _ = run(["check", "--example", "tree_k1.5_a0"], capsys)
    assert code == EXIT_NOT_SATISFIED
    bad = tmp_path / "bad.json"
    bad.write_text("{\"family\": ")
    code, _, err = run(["check", str(bad)], capsys)
    assert code == EXIT_USAGE and err
    bad.write_text(json.dumps({"family": {"builder": "half_line_unit"}}))
    code, _, err = run(["check", str(bad)], capsys)
    assert code == EXIT_USAGE and "missing" in err


def test_usage_errors(capsys):
    assert run(["frobnicate"], capsys)[0] == EXIT_USAGE
    assert run(["verify", "--ci", "--suite", "scalar"], capsys)[0] == EXIT_USAGE
    assert run(["stats", "--builder", "radial_tree", "--n-max", "2"], capsys)[0] == EXIT_USAGE


def test_verify_deterministic_and_exit_codes(capsys):
    argv = ["verify", "--suite", "identities", "--seed", "7", "--trials", "20", "--ci"]
    code1, out1, _ = run(argv, capsys)
    code2, out2, _ = run(argv, capsys)
    assert code1 == code2 == EXIT_OK
    assert out1 == out2
    assert json.loads(out1)["manifest"]["seed"] == 7
    code, _, _ = run(["verify", "--suite", "squared_cutoff", "--seed", "1", "--trials", "40"],
                     capsys)
    assert code == EXIT_FAIL


def test_verify_table(capsys):
    code, out, _ = run(["verify", "--suite", "scalar", "--format", "table", "--trials", "8"],
                       capsys)
    assert code == EXIT_OK and "sum_square" in out and "PASS" in out


def test_apply_bilaplacian(capsys, tmp_path):
    amp = tmp_path / "u.json"
    amp.write_text(json.dumps({"0": [1.0, 0.0]}))
    code, out, _ = run(["apply", "--builder", "half_line_unit", "--horizon", "6",
                        "--op", "bilaplacian", "--amplitudes", str(amp)], capsys)
    assert code == EXIT_OK
    vals = {k: complex(*v) for k, v in json.loads(out).items()}
    assert {k: v for k, v in vals.items() if v != 0} == {"0": 2, "1": -3, "2": 1}


def test_apply_margin_error(capsys, tmp_path):
    amp = tmp_path / "u.json"
    amp.write_text(json.dumps({"4": [1.0, 0.0]}))
    code, _, err = run(["apply", "--builder", "half_line_unit", "--horizon", "4",
                        "--op", "laplacian", "--amplitudes", str(amp)], capsys)
    assert code != EXIT_OK and "margin" in err


def test_export(capsys, tmp_path):
    code, out, _ = run(["export", "--builder", "half_line_unit", "--n", "10",
                        "--boundary", "dirichlet", "--out-dir", str(tmp_path)], capsys)
    assert code == EXIT_OK
    mtx = tmp_path / "half_line_unit_N10_dirichlet.mtx"
    assert mtx.read_text().splitlines()[0] == "%%MatrixMarket matrix coordinate complex general"
    M = scipy.io.mmread(str(mtx)).toarray()
    assert M.shape == (11, 11) and np.array_equal(M, M.conj().T)
    side = json.loads((tmp_path / "half_line_unit_N10_dirichlet.mtx.ids.json").read_text())
    assert side["rows"] == [str(k) for k in range(11)]


def test_output_dir_from_environment(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("MAGBILAP_OUTPUT_DIR", str(tmp_path))
    code, _, _ = run(["export", "--builder", "half_line_sqrt", "--n", "6"], capsys)
    assert code == EXIT_OK
    assert (tmp_path / "half_line_sqrt_N6_dirichlet.mtx").exists()


def test_probe(capsys, tmp_path):
    code, out, err = run(["probe", "--builder", "half_line_unit", "--method", "shooting",
                          "--horizon", "60", "--csv", "--out-dir", str(tmp_path)], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["report"]["conclusion"] == "consistent_with_delta_zero"
    assert len(list(tmp_path.glob("*.csv"))) == 6
    code, out, _ = run(["probe", "--builder", "half_line_unit", "--method", "rectangular",
                        "--horizons", "10,20"], capsys)
    assert json.loads(out)["report"]["method"] == "rectangular_residual"


def test_manifest_digest_ignores_timestamp(monkeypatch):
    a = RunManifest("x", {"k": 1}, seed=3)
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
    b = RunManifest("x", {"k": 1}, seed=3)
    assert a.digest() == b.digest()
    assert RunManifest("x", {"k": 2}, seed=3).digest() != a.digest()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "magbilap", "--version"], capture_output=True,
                         text=True)
    assert res.returncode == 0 and "magbilap" in res.stdout
