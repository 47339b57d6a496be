"""End-to-end checks of the sphuni command-line interface."""

import json
import os
import subprocess

import numpy as np
import pytest

CLI = os.environ.get("SPHUNI_CLI")

pytestmark = pytest.mark.skipif(CLI is None, reason="SPHUNI_CLI not set")


def run_cli(*args, expect_code=0):
    proc = subprocess.run([CLI, *args], capture_output=True, text=True)
    assert proc.returncode == expect_code, proc.stderr
    return proc


def write_sample(path, points):
    with open(path, "w") as fh:
        fh.write("# generated by test_cli\n")
        for row in points:
            fh.write(" ".join(f"{v:.17g}" for v in row) + "\n")


def test_kernel_subcommand():
    out = run_cli("kernel", "--k", "2", "--d", "3", "--t", "0.5").stdout
    assert "-0.625" in out
    assert "d_2 = 5" in out


def test_test_subcommand_on_concentrated_sample(tmp_path):
    rng = np.random.default_rng(5)
    z = rng.normal(size=(300, 3)) * 0.15 + np.array([0.0, 0.0, 1.0])
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    sample = tmp_path / "sample.txt"
    write_sample(sample, z)

    out = run_cli("test", "--input", str(sample), "--method", "adapted", "--alpha", "0.05").stdout
    result = json.loads(out)
    assert result["method"] == "adapted"
    assert result["reject"] is True
    assert result["dof"] == 8
    assert result["selected_k"] >= 2

    out = run_cli("test", "--input", str(sample), "--method", "rayleigh").stdout
    result = json.loads(out)
    assert result["method"] == "rayleigh"
    assert result["selected_k"] is None


def test_test_subcommand_error_paths(tmp_path):
    missing = tmp_path / "missing.txt"
    run_cli("test", "--input", str(missing), expect_code=2)

    bad = tmp_path / "bad.txt"
    bad.write_text("0.9 0 0\n")  # non-unit row in strict mode
    run_cli("test", "--input", str(bad), expect_code=1)
    # renormalization accepts it
    out = run_cli("test", "--input", str(bad), "--renormalize", "--method", "score:2").stdout
    assert json.loads(out)["dof"] == 8

    run_cli("test", "--input", str(bad), "--method", "nonsense", expect_code=1)


def test_power_subcommand():
    out = run_cli("power", "--model", "watson", "--test", "adapted", "--d", "3",
                  "--alpha", "0.05", "--tau-grid", "0:6:1").stdout
    lines = out.strip().splitlines()
    assert lines[0] == "tau,xi_1,xi_2,power"
    assert len(lines) == 8
    rows = [list(map(float, ln.split(","))) for ln in lines[1:]]
    assert rows[0][3] == pytest.approx(0.05, abs=1e-6)  # tau = 0 gives the level
    assert all(r[1] == 0.0 for r in rows)  # xi_1 vanishes for Watson
    assert rows[4][2] == pytest.approx(4 * 4.0**4 / 45.0)
    powers = [r[3] for r in rows]
    assert powers == sorted(powers)


def test_calibrate_subcommand():
    out = run_cli("calibrate", "--test", "rayleigh", "--n", "400", "--d", "3",
                  "--alpha", "0.05", "--reps", "800", "--seed", "3").stdout
    value = float(out.strip())
    assert abs(value - 7.8147) < 1.0
    run_cli("calibrate", "--reps", "50", expect_code=1)


def test_simulate_subcommand(tmp_path):
    config = tmp_path / "grid.json"
    config.write_text(json.dumps({
        "n_values": [40],
        "ell_values": [2],
        "tau_values": [0, 2],
        "families": ["vmf"],
        "tests": ["jupp", "adapted"],
        "reps": 50,
        "master_seed": 17,
    }))
    out_dir = tmp_path / "results"
    run_cli("simulate", "--config", str(config), "--out", str(out_dir), "--threads", "2")

    csv_path = out_dir / "rejections.csv"
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "family,test,d,n,ell,tau,reps,reject_count,reject_freq,mc_stderr"
    assert len(lines) == 5  # 2 tests x 2 tau cells

    plot = out_dir / "plot_rejections.py"
    assert plot.exists()
    # the emitted plot script runs standalone
    env = dict(os.environ, MPLBACKEND="Agg")
    proc = subprocess.run(["python3", str(plot)], cwd=out_dir, capture_output=True, text=True, env=env)
    assert proc.returncode == 0, proc.stderr
    assert (out_dir / "rejection_curves.png").exists()

    # identical rerun produces byte-identical CSV
    rerun_dir = tmp_path / "rerun"
    run_cli("simulate", "--config", str(config), "--out", str(rerun_dir), "--threads", "1")
    assert (rerun_dir / "rejections.csv").read_bytes() == csv_path.read_bytes()

    # json format
    run_cli("simulate", "--config", str(config), "--out", str(out_dir), "--format", "json")
    rows = json.loads((out_dir / "rejections.json").read_text())
    assert len(rows) == 4
    assert {r["test"] for r in rows} == {"jupp", "adapted"}

    bad_config = tmp_path / "bad.json"
    bad_config.write_text('{"repz": 3}')
    run_cli("simulate", "--config", str(bad_config), expect_code=1)
