"""Tests for the sigmoid projection, binarization, and relaxed loss."""

import numpy as np
import pytest

from quboforge.model import QuboMatrix, energy_binary, generate_qubo
from quboforge.relaxation import binarize, relaxed_loss_and_grad, sigmoid_project


class TestSigmoidProject:
    def test_symmetry_point(self):
        for slope in (0.5, 1.0, 10.0, 200.0):
            assert sigmoid_project(np.array([0.5]), slope)[0] == 0.5

    def test_known_value(self):
        # sigma(1) at slope 1, x = 1.5
        got = sigmoid_project(np.array([1.5]), slope=1.0)[0]
        assert got == pytest.approx(0.7310585786300049, abs=1e-15)

    def test_saturation(self):
        # slope 10 at x = 5 -> sigma(45), within 1e-15 of 1
        got = sigmoid_project(np.array([5.0]), slope=10.0)[0]
        assert abs(got - 1.0) <= 1e-15

    def test_overflow_safe(self):
        with np.errstate(over="raise"):
            out = sigmoid_project(np.array([-1e6, 1e6]), slope=10.0)
        assert np.all(np.isfinite(out))
        assert out[0] == 0.0 or out[0] < 1e-300
        assert out[1] == 1.0

    def test_open_unit_interval_and_monotone(self):
        x = np.linspace(-5, 5, 401)
        # Strictly inside (0,1) while the argument is representably
        # unsaturated; deep saturation rounds to the endpoints in float64.
        y = sigmoid_project(x, 1.0)
        assert np.all(y > 0.0) and np.all(y < 1.0)
        assert np.all(np.diff(y) > 0)
        y10 = sigmoid_project(x, 10.0)
        assert np.all(y10 >= 0.0) and np.all(y10 <= 1.0)
        assert np.all(np.diff(y10) >= 0)
        mid = (x > -0.5) & (x < 1.5)
        assert np.all(np.diff(y10[mid.nonzero()[0]]) > 0)

    def test_rejects_nonpositive_slope(self):
        with pytest.raises(ValueError):
            sigmoid_project(np.array([0.0]), slope=0.0)


class TestBinarize:
    @pytest.mark.parametrize(
        "xp,expected",
        [
            ([0.7, 0.3], [1, 0]),
            ([0.5], [1]),
            ([0.0, 1.0], [0, 1]),
        ],
    )
    def test_examples(self, xp, expected):
        assert binarize(xp).tolist() == expected

    def test_composition_is_half_indicator(self):
        # binarize(sigmoid(x)) == [x >= 0.5] for every slope
        rng = np.random.default_rng(4)
        x = np.concatenate([rng.uniform(-5, 5, 200), [0.5, 0.499999, 0.500001]])
        for slope in (0.1, 1.0, 10.0, 500.0):
            got = binarize(sigmoid_project(x, slope))
            assert np.array_equal(got, (x >= 0.5).astype(np.int8))


class TestRelaxedLossAndGrad:
    def test_zero_matrix(self):
        q = QuboMatrix(np.zeros((4, 4)))
        loss, grad = relaxed_loss_and_grad(q, np.array([0.1, 0.9, -2.0, 3.0]))
        assert loss == 0.0
        assert np.all(grad == 0.0)

    def test_hand_expansion(self):
        q = QuboMatrix(np.array([[1.0, 2.0], [2.0, 3.0]]))
        for slope in (1.0, 7.0):
            loss, grad = relaxed_loss_and_grad(q, np.array([0.5, 0.5]), slope)
            assert loss == pytest.approx(2.0, rel=1e-12)
            assert grad == pytest.approx([0.75 * slope, 1.25 * slope], rel=1e-12)

    @pytest.mark.parametrize("slope", [1.0, 10.0])
    def test_matches_central_differences(self, slope):
        # Error measured relative to the gradient scale: saturated
        # coordinates have true gradients below the FD roundoff floor.
        h = 1e-5
        rng = np.random.default_rng(10)
        worst = 0.0
        for trial in range(10):
            q = generate_qubo(50, seed=200 + trial)
            x = rng.uniform(-1.5, 1.5, size=50)
            _, grad = relaxed_loss_and_grad(q, x, slope)
            fd = np.empty(50)
            for i in range(50):
                xp = x.copy()
                xp[i] += h
                xm = x.copy()
                xm[i] -= h
                fd[i] = (relaxed_loss_and_grad(q, xp, slope)[0] - relaxed_loss_and_grad(q, xm, slope)[0]) / (2 * h)
            worst = max(worst, np.max(np.abs(grad - fd)) / max(np.max(np.abs(fd)), 1e-12))
        assert worst < 1e-6

    def test_binary_fixed_points_match_binary_energy(self):
        q = generate_qubo(25, seed=31)
        rng = np.random.default_rng(6)
        for _ in range(5):
            bits = rng.integers(0, 2, size=25)
            # Logits at the clamp bounds project to 0/1 within 1e-15.
            x = np.where(bits == 1, 5.0, -5.0)
            loss, _ = relaxed_loss_and_grad(q, x, slope=10.0)
            eb = energy_binary(q, bits)
            assert abs(loss - eb) <= 1e-9 * max(1.0, abs(eb))

    def test_dimension_mismatch(self):
        q = QuboMatrix(np.zeros((3, 3)))
        with pytest.raises(ValueError):
            relaxed_loss_and_grad(q, np.zeros(4))
