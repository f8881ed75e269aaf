import sys

import numpy as np
import pytest

from ctmfg.games import _model_from_tabular, build_left_right, build_sis
from ctmfg.model import GameModel
from ctmfg.tabular import TabularGame


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    verdicts = getattr(acceptance, "VERDICTS", None) if acceptance else None
    if verdicts:
        terminalreporter.section("acceptance criteria")
        for line in verdicts:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def lr_game():
    return build_left_right()


@pytest.fixture(scope="session")
def sis_game():
    return build_sis()


def generic_twin(game: GameModel) -> GameModel:
    """Same game without the tabular coefficients, forcing the numpy path."""
    tab = game.tabular
    return GameModel(
        n_states=game.n_states,
        n_actions=game.n_actions,
        horizon=game.horizon,
        rate=tab.off_diagonal_rate,
        reward=tab.reward_entry,
        terminal=game.terminal,
        mu0=game.mu0,
        tabular=None,
    )


def zero_game(horizon=50.0, n_actions=2) -> GameModel:
    """Zero rates, zero rewards, zero terminal: the soft value is pure entropy."""
    n = 2
    tab = TabularGame(
        lam0=np.zeros((n, n, n_actions)),
        lam1=np.zeros((n, n, n, n_actions)),
        r0=np.zeros((n, n_actions)),
        r1=np.zeros((n, n, n_actions)),
        c_log=np.zeros(n),
    )
    return _model_from_tabular(tab, horizon=horizon, mu0=[0.4, 0.6], terminal_values=[0.0, 0.0])


def single_action_game(horizon=10.0, reward=1.0) -> GameModel:
    n = 2
    tab = TabularGame(
        lam0=np.zeros((n, n, 1)),
        lam1=np.zeros((n, n, n, 1)),
        r0=np.full((n, 1), reward),
        r1=np.zeros((n, n, 1)),
        c_log=np.zeros(n),
    )
    return _model_from_tabular(tab, horizon=horizon, mu0=[0.5, 0.5], terminal_values=[0.0, 0.0])


def constant_policy(n_steps, n_states, n_actions, action) -> np.ndarray:
    values = np.zeros((n_steps, n_states, n_actions))
    values[:, :, action] = 1.0
    return values
