"""End-to-end tests for the command line interface."""

import json

import pytest

from quboforge.cli import cli_dispatch
from quboforge.model import generate_qubo, write_qbin


@pytest.fixture
def matrix_path(tmp_path):
    path = tmp_path / "m.qbin"
    write_qbin(path, generate_qubo(12, seed=3))
    return path


class TestGen:
    def test_writes_matrix(self, tmp_path):
        out = tmp_path / "g.qbin"
        assert cli_dispatch(["gen", "--n", "8", "--seed", "4", "--out", str(out)]) == 0
        assert out.exists()

    def test_rejects_n_zero(self, tmp_path, capsys):
        code = cli_dispatch(["gen", "--n", "0", "--seed", "1", "--out", str(tmp_path / "g.qbin")])
        assert code != 0
        assert capsys.readouterr().err.startswith("error: validation:")


class TestSolveVerify:
    def test_solve_then_verify_round_trip(self, matrix_path, tmp_path, capsys):
        sol = tmp_path / "sol.json"
        code = cli_dispatch([
            "solve", "--matrix", str(matrix_path), "--backend", "sa",
            "--threshold", "0.01", "--seed", "5", "--out", str(sol),
        ])
        assert code == 0
        code = cli_dispatch(["verify", "--matrix", str(matrix_path), "--solution", str(sol), "--rel-tol", "1e-9"])
        assert code == 0
        assert "verified" in capsys.readouterr().out

    def test_verify_detects_corrupted_bit(self, matrix_path, tmp_path, capsys):
        sol = tmp_path / "sol.json"
        cli_dispatch([
            "solve", "--matrix", str(matrix_path), "--backend", "sa",
            "--threshold", "0.01", "--seed", "5", "--out", str(sol),
        ])
        payload = json.loads(sol.read_text())
        payload["bits"][0] = 1 - payload["bits"][0]
        sol.write_text(json.dumps(payload))
        capsys.readouterr()
        code = cli_dispatch(["verify", "--matrix", str(matrix_path), "--solution", str(sol)])
        assert code != 0
        assert capsys.readouterr().err.startswith("error: energy-mismatch:")

    def test_verify_detects_structural_corruption(self, matrix_path, tmp_path, capsys):
        sol = tmp_path / "sol.json"
        sol.write_text(json.dumps({"n": 12, "bits": [2] + [0] * 11, "energy": 0.0}))
        code = cli_dispatch(["verify", "--matrix", str(matrix_path), "--solution", str(sol)])
        assert code != 0
        assert capsys.readouterr().err.startswith("error: structure:")

    def test_verify_dimension_mismatch(self, matrix_path, tmp_path, capsys):
        sol = tmp_path / "sol.json"
        sol.write_text(json.dumps({"n": 5, "bits": [0, 1, 0, 1, 0], "energy": 0.0}))
        code = cli_dispatch(["verify", "--matrix", str(matrix_path), "--solution", str(sol)])
        assert code != 0
        assert capsys.readouterr().err.startswith("error: dimension-mismatch:")

    def test_solve_rejects_malformed_matrix(self, tmp_path, capsys):
        bad = tmp_path / "bad.qbin"
        bad.write_bytes(b"JUNKJUNKJUNKJUNK")
        code = cli_dispatch([
            "solve", "--matrix", str(bad), "--backend", "sa",
            "--threshold", "0.01", "--seed", "1", "--out", str(tmp_path / "o.json"),
        ])
        assert code != 0
        assert capsys.readouterr().err.startswith("error: format:")

    def test_missing_file_is_io_error(self, tmp_path, capsys):
        code = cli_dispatch(["verify", "--matrix", str(tmp_path / "nope.qbin"), "--solution", str(tmp_path / "s.json")])
        assert code != 0
        assert capsys.readouterr().err.startswith("error: io:")


class TestBenchPlot:
    def test_bench_end_to_end(self, tmp_path, capsys):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text(
            "sizes = 12\nthresholds = 1e-1, 1e-2\nbackends = sa, lbfgs\n"
            "repeats = 2\ninstances_per_size = 1\nseed_base = 3\n"
        )
        out_dir = tmp_path / "out"
        code = cli_dispatch(["bench", "--config", str(cfg), "--out-dir", str(out_dir)])
        assert code == 0
        assert (out_dir / "records.csv").exists()
        assert (out_dir / "plots" / "runtime_n12.svg").exists()
        assert "8 records" in capsys.readouterr().out

    def test_plot_from_csv(self, tmp_path):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text("sizes = 12\nthresholds = 1e-1\nbackends = sa\nrepeats = 1\ninstances_per_size = 1\n")
        out_dir = tmp_path / "out"
        cli_dispatch(["bench", "--config", str(cfg), "--out-dir", str(out_dir)])
        plot_dir = tmp_path / "replot"
        code = cli_dispatch(["plot", "--records", str(out_dir / "records.csv"), "--out-dir", str(plot_dir)])
        assert code == 0
        assert (plot_dir / "energy_n12-i0.svg").exists()

    def test_bench_bad_config_is_format_error(self, tmp_path, capsys):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text("sizes = 12\nbogus_key = 1\n")
        code = cli_dispatch(["bench", "--config", str(cfg), "--out-dir", str(tmp_path / "o")])
        assert code != 0
        assert capsys.readouterr().err.startswith("error: format:")


class TestUsageErrors:
    def test_unknown_command_nonzero(self):
        assert cli_dispatch(["frobnicate"]) != 0

    def test_unknown_flag_nonzero(self):
        assert cli_dispatch(["gen", "--n", "4", "--seed", "1", "--out", "x", "--bogus"]) != 0

    def test_no_command_nonzero(self):
        assert cli_dispatch([]) != 0
