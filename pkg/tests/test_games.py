import numpy as np
import pytest

from conftest import constant_policy
from ctmfg.errors import DimensionMismatch
from ctmfg.games import (
    INFECTIOUS,
    RandomGameSpec,
    build_left_right,
    build_random_mfg,
    build_sis,
    mean_infected_fraction,
)
from ctmfg.model import MeanFieldFlow, Policy, TimeGrid
from ctmfg.solvers import forward_mean_field


class TestLeftRight:
    def test_rates(self, lr_game):
        nu = np.array([0.4, 0.6])
        assert lr_game.rate(0, 1, 1, nu) == 0.2  # change flips at rate 0.2
        assert lr_game.rate(1, 0, 1, nu) == 0.2
        assert lr_game.rate(0, 1, 0, nu) == 0.0  # stay has zero rates
        assert lr_game.rate(0, 0, 1, nu) == -0.2  # derived diagonal

    def test_rewards(self, lr_game):
        nu = np.array([0.4, 0.6])
        for u in range(2):  # action independent
            assert lr_game.reward(0, u, nu) == pytest.approx(-0.8, abs=1e-15)
            assert lr_game.reward(1, u, nu) == pytest.approx(-0.6, abs=1e-15)

    def test_terminal_and_shape(self, lr_game):
        assert np.array_equal(lr_game.terminal_values(), [0.0, 0.0])
        assert np.array_equal(lr_game.mu0, [0.4, 0.6])
        assert lr_game.horizon == 50.0
        assert (lr_game.n_states, lr_game.n_actions) == (2, 2)


class TestRandomGame:
    def test_same_seed_identical_tables(self):
        a = build_random_mfg(RandomGameSpec(seed=123))
        b = build_random_mfg(RandomGameSpec(seed=123))
        assert np.array_equal(a.tabular.lam0, b.tabular.lam0)
        assert np.array_equal(a.tabular.r0, b.tabular.r0)

    def test_draw_order_frozen(self):
        # PCG64(seed=0): first off-diagonal rate draw and first reward draw;
        # guards the documented draw order against accidental reordering
        game = build_random_mfg(RandomGameSpec(seed=0))
        assert game.tabular.lam0[0, 1, 0] == 0.6369616873214543
        assert game.tabular.lam0[9, 8, 1] == 0.7482485033017541
        assert game.tabular.r0[0, 0] == 0.8607014095476777

    def test_eta_zero_mean_field_independent(self):
        game = build_random_mfg(RandomGameSpec(seed=7, eta=0.0))
        nu1 = np.full(10, 0.1)
        nu2 = np.zeros(10)
        nu2[0] = 1.0
        assert np.array_equal(game.rewards(nu1), game.rewards(nu2))

    def test_congestion_log(self):
        game = build_random_mfg(RandomGameSpec(seed=7, eta=1.0))
        nu = np.full(10, (1.0 - np.exp(-1.0)) / 9.0)
        nu[3] = np.exp(-1.0)
        assert game.reward(3, 0, nu) == pytest.approx(game.tabular.r0[3, 0] + 1.0, abs=1e-12)

    def test_log_floor_keeps_reward_finite(self):
        game = build_random_mfg(RandomGameSpec(seed=7))
        nu = np.zeros(10)
        nu[1] = 1.0
        assert np.isfinite(game.rewards(nu)).all()

    def test_defaults_and_validation(self):
        spec = RandomGameSpec(seed=1)
        assert (spec.n_states, spec.n_actions, spec.horizon) == (10, 2, 10.0)
        assert (spec.eta, spec.epsilon_log) == (1.0, 1e-10)
        with pytest.raises(ValueError):
            RandomGameSpec(seed=1, n_states=0)
        with pytest.raises(ValueError):
            RandomGameSpec(seed=1, epsilon_log=0.0)

    def test_uniform_initial_mean_field(self):
        game = build_random_mfg(RandomGameSpec(seed=3, n_states=4))
        assert np.array_equal(game.mu0, np.full(4, 0.25))


class TestSis:
    def test_rates(self, sis_game):
        nu = np.array([0.5, 0.5])
        assert sis_game.rate(0, 1, 0, nu) == pytest.approx(2.5)  # infection 5*mu(I)
        assert sis_game.rate(0, 1, 1, nu) == 0.0  # quarantine blocks infection
        assert sis_game.rate(1, 0, 0, nu) == 0.2  # healing either way
        assert sis_game.rate(1, 0, 1, nu) == 0.2

    def test_rewards(self, sis_game):
        nu = np.array([0.5, 0.5])
        assert sis_game.reward(0, 0, nu) == 0.0
        assert sis_game.reward(0, 1, nu) == -12.0
        assert sis_game.reward(1, 0, nu) == -10.0
        assert sis_game.reward(1, 1, nu) == -12.0

    def test_terminal_and_initial(self, sis_game):
        assert sis_game.terminal(INFECTIOUS) == -35.0
        assert sis_game.terminal(0) == 0.0
        assert np.array_equal(sis_game.mu0, [0.99, 0.01])
        assert sis_game.horizon == 10.0

    def test_all_quarantine_shrinks_infection(self, sis_game):
        grid = TimeGrid.for_horizon(10.0, 0.01)
        policy = Policy(constant_policy(grid.n_steps, 2, 2, action=1))
        flow = forward_mean_field(sis_game, policy, grid)
        infected = flow.values[:, INFECTIOUS]
        assert (np.diff(infected) <= 1e-15).all()
        assert infected.min() >= 0.0 and infected.max() <= 1.0


class TestBuildersShareInvariants:
    @pytest.mark.parametrize(
        "build", [build_left_right, build_sis, lambda: build_random_mfg(RandomGameSpec(seed=4))]
    )
    def test_generator_rows_and_mu0(self, build):
        game = build()
        rng = np.random.default_rng(1)
        for _ in range(5):
            nu = rng.dirichlet(np.ones(game.n_states))
            lam = game.generator(nu)
            off = lam.copy()
            idx = np.arange(game.n_states)
            off[idx, idx, :] = 0.0
            assert off.min() >= 0.0
            # diagonal equals the negated off-diagonal row sum by construction
            assert np.array_equal(lam[idx, idx, :], -off.sum(axis=1))
            assert np.abs(lam.sum(axis=1)).max() <= 1e-13
        assert game.mu0.min() >= 0.0
        assert abs(game.mu0.sum() - 1.0) <= 1e-12


class TestMeanInfectedFraction:
    def test_constant_flow(self):
        grid = TimeGrid.for_horizon(10.0, 0.1)
        flow = MeanFieldFlow(np.tile([0.99, 0.01], (grid.n_nodes, 1)))
        assert mean_infected_fraction(flow, grid) == pytest.approx(0.01, abs=1e-12)

    def test_linear_flow(self):
        grid = TimeGrid.for_horizon(1.0, 0.01)
        ramp = np.linspace(0.0, 1.0, grid.n_nodes)
        flow = MeanFieldFlow(np.column_stack([1.0 - ramp, ramp]))
        assert mean_infected_fraction(flow, grid) == pytest.approx(0.5, abs=1e-9)

    def test_dimension_checks(self):
        grid = TimeGrid.for_horizon(1.0, 0.1)
        with pytest.raises(DimensionMismatch):
            mean_infected_fraction(MeanFieldFlow(np.full((11, 4), 0.25)), grid)
        with pytest.raises(DimensionMismatch):
            mean_infected_fraction(MeanFieldFlow(np.tile([0.5, 0.5], (5, 1))), grid)
