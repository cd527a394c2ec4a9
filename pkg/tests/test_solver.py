"""Tests for the solver facade: dispatch, repetition, and the result schema."""

import json

import numpy as np
import pytest

import quboforge.solver as solver_mod
from quboforge.model import QuboMatrix, brute_force_min, energy_binary, generate_qubo
from quboforge.optim import NUMERIC_FAILURE
from quboforge.solver import (
    BACKENDS,
    SolverConfig,
    result_to_dict,
    solve,
    solve_repeated,
    write_result_json,
)


@pytest.fixture
def q20():
    return generate_qubo(20, seed=42)


class TestSolverConfig:
    def test_rejects_unknown_backend(self):
        with pytest.raises(ValueError, match="backend"):
            SolverConfig(backend="cma", threshold=1e-3)

    def test_rejects_nonpositive_threshold(self):
        with pytest.raises(ValueError, match="threshold"):
            SolverConfig(backend="sa", threshold=0.0)

    def test_rejects_bad_max_steps(self):
        with pytest.raises(ValueError, match="max_steps"):
            SolverConfig(backend="sa", threshold=1e-3, max_steps=0)


class TestSolve:
    @pytest.mark.parametrize("backend", BACKENDS)
    def test_zero_matrix(self, backend):
        q = QuboMatrix(np.zeros((8, 8)))
        res = solve(q, SolverConfig(backend=backend, threshold=1e-3, seed=1, sweeps=50))
        assert res.energy == 0.0
        assert res.backend == backend

    @pytest.mark.parametrize("backend", BACKENDS)
    def test_energy_is_recomputed_binary_energy(self, backend, q20):
        res = solve(q20, SolverConfig(backend=backend, threshold=1e-4, seed=5, sweeps=200, max_steps=3000))
        assert res.energy == energy_binary(q20, res.bits)
        assert set(np.unique(res.bits)).issubset({0, 1})
        assert res.wall_time_s >= 0.0
        assert res.seed == 5

    @pytest.mark.parametrize("backend", BACKENDS)
    def test_deterministic_replay(self, backend, q20):
        cfg = SolverConfig(backend=backend, threshold=1e-4, seed=3, sweeps=200, max_steps=2000)
        a = solve(q20, cfg)
        b = solve(q20, cfg)
        assert np.array_equal(a.bits, b.bits)
        assert a.energy == b.energy and a.steps == b.steps

    def test_adam_separable_diagonal(self):
        # Gentle slope keeps every coordinate's gradient alive, so each
        # relaxed coordinate is driven independently to x' -> 1.
        n = 50
        q = QuboMatrix(np.diag(-np.ones(n)))
        res = solve(q, SolverConfig(backend="adam", threshold=1e-4, seed=3, slope=1.0))
        assert res.bits.tolist() == [1] * n
        assert res.energy == -float(n)

    def test_lbfgs_near_brute_force_best_of_five(self):
        q = generate_qubo(12, seed=0)
        _, e_min = brute_force_min(q)
        _, best = solve_repeated(q, SolverConfig(backend="lbfgs", threshold=1e-6, seed=0, slope=1.0), repeats=5)
        assert abs(best.energy - e_min) <= 0.05 * abs(e_min)

    def test_gradient_steps_bounded_by_max_steps(self, q20):
        res = solve(q20, SolverConfig(backend="adam", threshold=1e-12, seed=1, max_steps=150))
        assert res.steps == 150
        assert res.stop_reason == "max_steps"

    def test_numeric_failure_recorded_not_raised(self, q20, monkeypatch):
        calls = {"count": 0}
        real = solver_mod.relaxed_loss_and_grad

        def poisoned(q, params, slope):
            calls["count"] += 1
            loss, grad = real(q, params, slope)
            if calls["count"] > 3:
                grad = grad.copy()
                grad[0] = np.nan
            return loss, grad

        monkeypatch.setattr(solver_mod, "relaxed_loss_and_grad", poisoned)
        res = solve(q20, SolverConfig(backend="adam", threshold=1e-4, seed=2))
        assert res.stop_reason == NUMERIC_FAILURE
        # Best feasible iterate is still binarized and verified.
        assert res.energy == energy_binary(q20, res.bits)


class TestSolveRepeated:
    def test_single_repeat_equals_solve(self, q20):
        cfg = SolverConfig(backend="sa", threshold=1e-3, seed=7, sweeps=100)
        results, best = solve_repeated(q20, cfg, repeats=1)
        assert len(results) == 1
        assert best is results[0]

    def test_best_is_minimum_and_seeds_derived(self, q20):
        cfg = SolverConfig(backend="sa", threshold=1e-3, seed=100, sweeps=200)
        results, best = solve_repeated(q20, cfg, repeats=5)
        assert [r.seed for r in results] == [100, 101, 102, 103, 104]
        assert best.energy == min(r.energy for r in results)

    def test_tie_breaks_to_lowest_repeat(self):
        q = QuboMatrix(np.zeros((6, 6)))
        results, best = solve_repeated(q, SolverConfig(backend="sa", threshold=1e-3, seed=0, sweeps=20), repeats=3)
        assert all(r.energy == 0.0 for r in results)
        assert best is results[0]

    def test_replay_identical(self, q20):
        cfg = SolverConfig(backend="adamw", threshold=1e-3, seed=55, max_steps=800)
        first, _ = solve_repeated(q20, cfg, repeats=3)
        second, _ = solve_repeated(q20, cfg, repeats=3)
        for a, b in zip(first, second):
            assert np.array_equal(a.bits, b.bits)
            assert a.energy == b.energy and a.steps == b.steps

    def test_rejects_zero_repeats(self, q20):
        with pytest.raises(ValueError):
            solve_repeated(q20, SolverConfig(backend="sa", threshold=1e-3), repeats=0)

    @pytest.mark.parametrize("backend", BACKENDS)
    def test_best_of_five_beats_constant_baseline(self, backend):
        # The all-zeros vector (energy 0) is always available, so a usable
        # solver's best-of-5 must not end up above it.
        q = generate_qubo(30, seed=70)
        _, best = solve_repeated(
            q, SolverConfig(backend=backend, threshold=1e-4, seed=0, sweeps=300, max_steps=3000), repeats=5
        )
        assert best.energy <= 0.0


class TestResultSchema:
    def test_dict_has_exact_keys(self, q20):
        res = solve(q20, SolverConfig(backend="sa", threshold=1e-2, seed=9, sweeps=100))
        payload = result_to_dict(res, threshold=1e-2)
        assert set(payload) == {
            "backend", "n", "threshold", "seed", "energy", "steps", "wall_time_s", "stop_reason",
        }
        assert payload["n"] == 20

    def test_json_floats_round_trip(self, q20, tmp_path):
        res = solve(q20, SolverConfig(backend="sa", threshold=1e-2, seed=9, sweeps=100))
        path = tmp_path / "run.json"
        write_result_json(path, res, threshold=1e-2)
        loaded = json.loads(path.read_text())
        assert loaded["energy"] == res.energy
        assert loaded["wall_time_s"] == res.wall_time_s
        assert loaded["threshold"] == 1e-2
