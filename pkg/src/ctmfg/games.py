"""The bundled benchmark games.

State and action index conventions:
  left-right: states (0=left, 1=right), actions (0=stay, 1=change)
  random:     states 0..n_states-1, actions 0..n_actions-1
  sis:        states (0=susceptible, 1=infectious), actions (0=none, 1=quarantine)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .model import GameModel, MeanFieldFlow, TimeGrid
from .tabular import TabularGame

SUSCEPTIBLE, INFECTIOUS = 0, 1


def _model_from_tabular(tab: TabularGame, horizon: float, mu0, terminal_values) -> GameModel:
    q_vec = np.asarray(terminal_values, dtype=float)
    return GameModel(
        n_states=tab.n_states,
        n_actions=tab.n_actions,
        horizon=horizon,
        rate=tab.off_diagonal_rate,
        reward=tab.reward_entry,
        terminal=lambda x: float(q_vec[x]),
        mu0=mu0,
        tabular=tab,
    )


def build_left_right() -> GameModel:
    """Two-state congestion game: changing sides costs nothing but takes time.

    The change action flips the state at rate 0.2; staying has zero rates.
    Rewards penalize crowding, twice as hard on the left: -2*mu(left) on the
    left, -mu(right) on the right, independent of the action. Zero terminal
    reward, horizon 50, initial mean field (0.4, 0.6).
    """
    n, a = 2, 2
    lam0 = np.zeros((n, n, a))
    lam0[0, 1, 1] = 0.2
    lam0[1, 0, 1] = 0.2
    r1 = np.zeros((n, n, a))
    r1[0, 0, :] = -2.0
    r1[1, 1, :] = -1.0
    tab = TabularGame(
        lam0=lam0,
        lam1=np.zeros((n, n, n, a)),
        r0=np.zeros((n, a)),
        r1=r1,
        c_log=np.zeros(n),
    )
    return _model_from_tabular(tab, horizon=50.0, mu0=[0.4, 0.6], terminal_values=[0.0, 0.0])


@dataclass(frozen=True)
class RandomGameSpec:
    """Seeded generator parameters for random crowd-avoiding games.

    The PRNG is numpy's default (PCG64 behind ``default_rng``); the draw order
    is part of the contract: first the off-diagonal rate table, row-major over
    (x, x' != x in increasing order, u), then the base reward table, row-major
    over (x, u), all Uniform[0, 1).
    """

    seed: int
    n_states: int = 10
    n_actions: int = 2
    horizon: float = 10.0
    eta: float = 1.0
    epsilon_log: float = 1e-10

    def __post_init__(self):
        if self.n_states < 1 or self.n_actions < 1:
            raise ValueError("n_states and n_actions must be positive")
        if self.horizon <= 0:
            raise ValueError("horizon must be positive")
        if self.eta < 0:
            raise ValueError("eta must be nonnegative")
        if self.epsilon_log <= 0:
            raise ValueError("epsilon_log must be positive")


def build_random_mfg(spec: RandomGameSpec) -> GameModel:
    """Random rates and rewards plus a -eta*log(mu(x)) crowd-avoidance term."""
    n, a = spec.n_states, spec.n_actions
    rng = np.random.default_rng(spec.seed)
    off_diag = rng.random((n, max(n - 1, 0), a))
    r0 = rng.random((n, a))
    lam0 = np.zeros((n, n, a))
    for x in range(n):
        others = [y for y in range(n) if y != x]
        lam0[x, others, :] = off_diag[x]
    tab = TabularGame(
        lam0=lam0,
        lam1=np.zeros((n, n, n, a)),
        r0=r0,
        r1=np.zeros((n, n, a)),
        c_log=np.full(n, -spec.eta),
        eps_log=spec.epsilon_log,
    )
    return _model_from_tabular(
        tab, horizon=spec.horizon, mu0=np.full(n, 1.0 / n), terminal_values=np.zeros(n)
    )


def build_sis() -> GameModel:
    """Epidemic control: quarantine blocks infection but costs like being sick.

    Susceptible agents get infected at rate 5*mu(infectious) unless they
    quarantine; everyone heals at rate 0.2. Being infected costs 10 per unit
    time, quarantining costs 12 (infection cost plus 2), and ending the horizon
    infected costs 35. Horizon 10, initial infectious share 0.01.
    """
    n, a = 2, 2
    lam0 = np.zeros((n, n, a))
    lam0[INFECTIOUS, SUSCEPTIBLE, 0] = 0.2
    lam0[INFECTIOUS, SUSCEPTIBLE, 1] = 0.2
    lam1 = np.zeros((n, n, n, a))
    lam1[INFECTIOUS, SUSCEPTIBLE, INFECTIOUS, 0] = 5.0
    r0 = np.array([
        [0.0, -12.0],
        [-10.0, -12.0],
    ])
    tab = TabularGame(
        lam0=lam0,
        lam1=lam1,
        r0=r0,
        r1=np.zeros((n, n, a)),
        c_log=np.zeros(n),
    )
    return _model_from_tabular(
        tab, horizon=10.0, mu0=[0.99, 0.01], terminal_values=[0.0, -35.0]
    )


def mean_infected_fraction(flow: MeanFieldFlow, grid: TimeGrid) -> float:
    """Time average (trapezoidal) of the infectious share of the population."""
    if flow.n_states != 2:
        raise DimensionMismatch("expected a two-state (susceptible, infectious) flow")
    if flow.n_nodes != grid.n_nodes:
        raise DimensionMismatch(f"flow has {flow.n_nodes} nodes, grid has {grid.n_nodes}")
    return float(np.trapezoid(flow.values[:, INFECTIOUS], dx=grid.dt) / grid.horizon)


GAME_BUILDERS = {
    "left-right": build_left_right,
    "sis": build_sis,
}
