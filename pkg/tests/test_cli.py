import json
import os
import subprocess
import sys

import numpy as np
import pytest

from onmf.core import read_matrix, write_matrix


def run_cli(args, cwd, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run([sys.executable, "-m", "onmf.cli", *args],
                          cwd=cwd, env=env, capture_output=True, text=True)


def test_generate_writes_instance(tmp_path):
    res = run_cli(["generate", "--m", "4", "--n", "8", "--k", "2",
                   "--noise", "0", "--seed", "1", "--out-dir", "inst"],
                  cwd=tmp_path)
    assert res.returncode == 0
    M = read_matrix(tmp_path / "inst" / "M.csv")
    Mtruth = read_matrix(tmp_path / "inst" / "Mtruth.csv")
    assert np.array_equal(M, Mtruth)  # noise level 0
    meta = json.loads((tmp_path / "inst" / "meta.json").read_text())
    assert meta == {"m": 4, "n": 8, "k": 2, "noise_level": 0.0, "seed": 1,
                    "mode": "single"}


def test_generate_deterministic(tmp_path):
    args = ["generate", "--m", "3", "--n", "5", "--k", "2", "--noise", "0.4",
            "--seed", "7"]
    run_cli(args + ["--out-dir", "a"], cwd=tmp_path)
    run_cli(args + ["--out-dir", "b"], cwd=tmp_path)
    for name in ("M.csv", "Mtruth.csv", "Atruth.csv", "Wtruth.csv",
                 "meta.json"):
        assert (tmp_path / "a" / name).read_bytes() == (
            tmp_path / "b" / name).read_bytes()


def test_generate_usage_error(tmp_path):
    res = run_cli(["generate", "--m", "0", "--n", "2", "--k", "1",
                   "--noise", "0"], cwd=tmp_path)
    assert res.returncode == 2


def test_factorize_single(tmp_path):
    write_matrix(np.array([[2.0, 0.0], [0.0, 3.0]]), tmp_path / "M.csv")
    res = run_cli(["factorize", "--input", "M.csv", "--k", "2",
                   "--mode", "single", "--seed", "0",
                   "--out-a", "A.csv", "--out-w", "W.csv"], cwd=tmp_path)
    assert res.returncode == 0
    out = json.loads(res.stdout)
    assert out["objective"] == pytest.approx(0.0, abs=1e-12)
    A = read_matrix(tmp_path / "A.csv")
    W = read_matrix(tmp_path / "W.csv")
    assert np.allclose(A @ W, [[2.0, 0.0], [0.0, 3.0]])


def test_factorize_large_k_ignores_k(tmp_path):
    write_matrix(np.eye(3), tmp_path / "M.csv")
    res = run_cli(["factorize", "--input", "M.csv", "--k", "1",
                   "--mode", "double-large-k"], cwd=tmp_path)
    assert res.returncode == 0
    assert json.loads(res.stdout)["objective"] == pytest.approx(0.0,
                                                                abs=1e-12)


def test_factorize_missing_input(tmp_path):
    res = run_cli(["factorize", "--k", "2"], cwd=tmp_path)
    assert res.returncode == 2
    res = run_cli(["factorize", "--input", "nope.csv", "--k", "2"],
                  cwd=tmp_path)
    assert res.returncode == 1


def test_factorize_negative_entries(tmp_path):
    (tmp_path / "M.csv").write_text("1,-2\n3,4\n")
    res = run_cli(["factorize", "--input", "M.csv", "--k", "1"], cwd=tmp_path)
    assert res.returncode == 1


def test_evaluate(tmp_path):
    write_matrix(np.eye(2), tmp_path / "M.csv")
    write_matrix(np.array([[0.5], [0.5]]), tmp_path / "A.csv")
    write_matrix(np.array([[1.0, 1.0]]), tmp_path / "W.csv")
    res = run_cli(["evaluate", "--input", "M.csv", "--a", "A.csv",
                   "--w", "W.csv", "--truth", "M.csv"], cwd=tmp_path)
    assert res.returncode == 0
    rec = json.loads(res.stdout)
    assert rec["rsfe"] == pytest.approx(0.5)
    assert rec["recovery_error"] == pytest.approx(1.0)
    assert rec["non_orthogonality_w"] == 0.0


def test_sweep_row_count_and_reference(tmp_path):
    res = run_cli(["sweep", "--m", "4", "--n", "10", "--k", "2",
                   "--noise-grid", "0,0.3", "--trials", "3", "--seed", "2",
                   "--restarts", "5", "--out", "sweep.csv"], cwd=tmp_path)
    assert res.returncode == 0
    lines = (tmp_path / "sweep.csv").read_text().strip().split("\n")
    assert len(lines) == 3  # header + one row per noise level
    row0 = lines[1].split(",")
    assert float(row0[0]) == 0.0
    assert float(row0[1]) == pytest.approx(0.0, abs=1e-9)  # recovery at 0
    row1 = lines[2].split(",")
    assert float(row1[4]) == pytest.approx(np.sqrt(2 * 4 * 10) * 0.3)


def test_sweep_deterministic_under_threads(tmp_path):
    args = ["sweep", "--m", "4", "--n", "10", "--k", "2", "--noise-grid",
            "0.2,0.5", "--trials", "4", "--seed", "3", "--restarts", "3"]
    run_cli(args + ["--out", "a.csv"], cwd=tmp_path,
            env_extra={"ONMF_THREADS": "1"})
    run_cli(args + ["--out", "b.csv"], cwd=tmp_path,
            env_extra={"ONMF_THREADS": "4"})
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_bcc_identity_pattern(tmp_path):
    (tmp_path / "edges.csv").write_text(
        "0,0,+\n0,1,-\n1,0,-\n1,1,+\n")
    res = run_cli(["bcc", "--edges", "edges.csv", "--out", "c.csv"],
                  cwd=tmp_path)
    assert res.returncode == 0
    assert res.stdout.strip() == "0"
    lines = (tmp_path / "c.csv").read_text().strip().split("\n")
    assert lines[0] == "side,index,cluster"
    assert len(lines) == 5


def test_bcc_all_plus_one_cluster(tmp_path):
    (tmp_path / "edges.csv").write_text(
        "0,0,+\n0,1,+\n1,0,+\n1,1,+\n")
    res = run_cli(["bcc", "--edges", "edges.csv", "--out", "c.csv"],
                  cwd=tmp_path)
    assert res.returncode == 0
    assert res.stdout.strip() == "0"
    rows = (tmp_path / "c.csv").read_text().strip().split("\n")[1:]
    assert {r.split(",")[2] for r in rows} == {"1"}


def test_bcc_malformed_line(tmp_path):
    (tmp_path / "edges.csv").write_text("0,0,+\n0,1,?\n")
    res = run_cli(["bcc", "--edges", "edges.csv"], cwd=tmp_path)
    assert res.returncode == 1
    assert ":2:" in res.stderr


def test_bcc_incomplete_without_flag(tmp_path):
    (tmp_path / "edges.csv").write_text("0,0,+\n1,1,+\n")
    res = run_cli(["bcc", "--edges", "edges.csv"], cwd=tmp_path)
    assert res.returncode == 1
    res = run_cli(["bcc", "--edges", "edges.csv", "--complete"], cwd=tmp_path)
    assert res.returncode == 0
    assert res.stdout.strip() == "0"
