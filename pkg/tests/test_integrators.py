import numpy as np
import pytest

from ctmfg.errors import DimensionMismatch
from ctmfg.integrators import integrate_grid, rk4_step
from ctmfg.model import TimeGrid

# uncontrolled two-state chain, jump rate 0.2 each way, started at (0.4, 0.6):
# closed form mu_L(t) = 0.5 - 0.1 exp(-0.4 t)
A = np.array([[-0.2, 0.2], [0.2, -0.2]])


def two_state_field(t, y):
    return A.T @ y


def exact_left(times):
    return 0.5 - 0.1 * np.exp(-0.4 * np.asarray(times))


class TestRk4Step:
    def test_zero_field(self):
        y = np.array([0.4, 0.6])
        assert np.array_equal(rk4_step(lambda t, y: np.zeros(2), 0.0, y, 0.01), y)

    def test_scalar_decay_step(self):
        # hand-expanded stages for y' = -y, h = 0.1: exactly 72387/80000
        assert rk4_step(lambda t, y: -y, 0.0, 1.0, 0.1) == pytest.approx(0.9048375, abs=1e-15)

    def test_rejects_zero_step(self):
        with pytest.raises(ValueError):
            rk4_step(lambda t, y: -y, 0.0, 1.0, 0.0)

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            rk4_step(lambda t, y: np.zeros(3), 0.0, np.zeros(2), 0.1)

    def test_propagates_field_failure(self):
        def exploding(t, y):
            raise FloatingPointError("reward singularity")

        with pytest.raises(FloatingPointError):
            rk4_step(exploding, 0.0, np.zeros(2), 0.1)

    def test_negative_step_reverses(self):
        y = np.array([0.4, 0.6])
        fwd = rk4_step(two_state_field, 0.0, y, 0.01)
        back = rk4_step(two_state_field, 0.01, fwd, -0.01)
        assert np.abs(back - y).max() <= 1e-12


class TestIntegrateGrid:
    def test_zero_field_constant(self):
        grid = TimeGrid.for_horizon(1.0, 0.1)
        out = integrate_grid(lambda t, y: np.zeros(2), np.array([1.0, 0.0]), grid)
        assert out.shape == (11, 2)
        assert (out == [1.0, 0.0]).all()

    def test_two_state_closed_form(self):
        grid = TimeGrid.for_horizon(5.0, 0.01)
        out = integrate_grid(two_state_field, np.array([0.4, 0.6]), grid)
        assert out[-1, 0] == pytest.approx(0.4864664716763387, abs=1e-7)
        assert out[-1, 1] == pytest.approx(0.5135335283236613, abs=1e-7)

    def test_closed_form_error_scales_like_dt4(self):
        for dt in (0.02, 0.01):
            grid = TimeGrid.for_horizon(5.0, dt)
            out = integrate_grid(two_state_field, np.array([0.4, 0.6]), grid)
            err = np.abs(out[:, 0] - exact_left(grid.times)).max()
            assert err <= 0.01 * dt**4

    def test_forward_backward_recovery(self):
        grid = TimeGrid.for_horizon(5.0, 0.01)
        y0 = np.array([0.4, 0.6])
        fwd = integrate_grid(two_state_field, y0, grid)
        back = integrate_grid(two_state_field, fwd[-1].copy(), grid, "backward")
        assert np.abs(back[0] - y0).max() <= 1e-9
        assert back.shape == fwd.shape

    def test_order_four_convergence(self):
        errs = {}
        for dt in (0.02, 0.01):
            grid = TimeGrid.for_horizon(5.0, dt)
            out = integrate_grid(two_state_field, np.array([0.4, 0.6]), grid)
            errs[dt] = np.abs(out[:, 0] - exact_left(grid.times)).max()
        ratio = errs[0.02] / errs[0.01]
        assert 12.0 <= ratio <= 20.0

    def test_deterministic(self):
        grid = TimeGrid.for_horizon(2.0, 0.01)
        a = integrate_grid(two_state_field, np.array([0.4, 0.6]), grid)
        b = integrate_grid(two_state_field, np.array([0.4, 0.6]), grid)
        assert np.array_equal(a, b)

    def test_rejects_unknown_direction(self):
        grid = TimeGrid.for_horizon(1.0, 0.1)
        with pytest.raises(ValueError):
            integrate_grid(two_state_field, np.array([0.4, 0.6]), grid, "sideways")

    def test_rejects_non_vector_start(self):
        grid = TimeGrid.for_horizon(1.0, 0.1)
        with pytest.raises(DimensionMismatch):
            integrate_grid(two_state_field, np.zeros((2, 2)), grid)
