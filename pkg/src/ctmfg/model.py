"""Game definition, time grid, and the flow/policy/value containers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DimensionMismatch, SimplexViolation
from .tabular import TabularGame

RateFn = Callable[[int, int, int, np.ndarray], float]
RewardFn = Callable[[int, int, np.ndarray], float]
TerminalFn = Callable[[int], float]

# Mean-field entries below this are treated as a real simplex escape
# (too-coarse step), not roundoff; entries in (CLEANUP_FLOOR, 0) are clamped.
CLEANUP_FLOOR = -1e-6
FLOW_SUM_TOL = 1e-9
POLICY_SUM_TOL = 1e-12
MU0_SUM_TOL = 1e-12
GRID_TOL = 1e-9


def _frozen(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


class GameModel:
    """A finite-state continuous-time game.

    ``rate(x, x', u, nu)`` supplies off-diagonal jump rates only; the generator
    diagonal is always derived as minus the off-diagonal row sum, so rows sum
    to zero by construction. ``tabular`` optionally carries the same game in
    coefficient form, which unlocks the compiled solver kernels.
    """

    def __init__(
        self,
        n_states: int,
        n_actions: int,
        horizon: float,
        rate: RateFn,
        reward: RewardFn,
        terminal: TerminalFn,
        mu0,
        tabular: Optional[TabularGame] = None,
    ):
        if n_states < 1 or n_actions < 1:
            raise ValueError("n_states and n_actions must be positive")
        if horizon < 0:
            raise ValueError("horizon must be nonnegative")
        mu0 = np.asarray(mu0, dtype=float)
        if mu0.shape != (n_states,):
            raise DimensionMismatch(f"mu0 must have shape ({n_states},), got {mu0.shape}")
        if mu0.min() < 0 or abs(mu0.sum() - 1.0) > MU0_SUM_TOL:
            raise SimplexViolation("mu0 must be a probability vector (sum 1 within 1e-12)")
        self.n_states = int(n_states)
        self.n_actions = int(n_actions)
        self.horizon = float(horizon)
        self._rate = rate
        self._reward = reward
        self._terminal = terminal
        self.mu0 = _frozen(mu0)
        self.tabular = tabular

    def rate(self, x: int, x2: int, u: int, nu) -> float:
        """Generator entry; the diagonal is derived, never user-supplied."""
        if x == x2:
            return -sum(self._rate(x, y, u, nu) for y in range(self.n_states) if y != x)
        return float(self._rate(x, x2, u, nu))

    def reward(self, x: int, u: int, nu) -> float:
        return float(self._reward(x, u, nu))

    def terminal(self, x: int) -> float:
        return float(self._terminal(x))

    def generator(self, nu) -> np.ndarray:
        """Full (n_states, n_states, n_actions) rate tensor at mean field nu."""
        if self.tabular is not None:
            return self.tabular.generator(nu)
        n, a = self.n_states, self.n_actions
        lam = np.zeros((n, n, a))
        for x in range(n):
            for y in range(n):
                if y == x:
                    continue
                for u in range(a):
                    lam[x, y, u] = self._rate(x, y, u, nu)
        if lam.min() < 0:
            raise ValueError("off-diagonal jump rates must be nonnegative")
        idx = np.arange(n)
        lam[idx, idx, :] = -lam.sum(axis=1)
        return lam

    def rewards(self, nu) -> np.ndarray:
        """(n_states, n_actions) running-reward table at mean field nu."""
        if self.tabular is not None:
            return self.tabular.rewards(nu)
        n, a = self.n_states, self.n_actions
        r = np.empty((n, a))
        for x in range(n):
            for u in range(a):
                r[x, u] = self._reward(x, u, nu)
        return r

    def terminal_values(self) -> np.ndarray:
        return np.array([self._terminal(x) for x in range(self.n_states)], dtype=float)


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid with nodes t_k = k*dt, k = 0..n_steps."""

    dt: float
    n_steps: int

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.n_steps < 1:
            raise ValueError("n_steps must be at least 1")

    @classmethod
    def for_horizon(cls, horizon: float, dt: float) -> "TimeGrid":
        if dt <= 0:
            raise ValueError("dt must be positive")
        n_steps = int(round(horizon / dt))
        if n_steps < 1 or abs(n_steps * dt - horizon) > GRID_TOL:
            raise ValueError(
                f"horizon {horizon} is not an integer multiple of dt {dt} (within {GRID_TOL})"
            )
        return cls(dt=dt, n_steps=n_steps)

    @property
    def n_nodes(self) -> int:
        return self.n_steps + 1

    @property
    def horizon(self) -> float:
        return self.n_steps * self.dt

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_nodes) * self.dt


@dataclass(frozen=True)
class MeanFieldFlow:
    """One probability vector over states per grid node."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=float)
        if arr.ndim != 2:
            raise DimensionMismatch("mean-field flow must be (n_nodes, n_states)")
        sums = arr.sum(axis=1)
        if not (np.isfinite(arr).all() and arr.min() >= 0.0 and np.abs(sums - 1.0).max() <= FLOW_SUM_TOL):
            raise SimplexViolation("every flow node must be a probability vector (sum 1 within 1e-9)")
        object.__setattr__(self, "values", _frozen(arr))

    @property
    def n_nodes(self) -> int:
        return self.values.shape[0]

    @property
    def n_states(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class Policy:
    """One action distribution per (interval, state), constant on [t_k, t_{k+1})."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=float)
        if arr.ndim != 3:
            raise DimensionMismatch("policy must be (n_intervals, n_states, n_actions)")
        sums = arr.sum(axis=2)
        if not (np.isfinite(arr).all() and arr.min() >= 0.0 and np.abs(sums - 1.0).max() <= POLICY_SUM_TOL):
            raise SimplexViolation("every (interval, state) action distribution must sum to 1 within 1e-12")
        object.__setattr__(self, "values", _frozen(arr))

    @property
    def n_intervals(self) -> int:
        return self.values.shape[0]

    @property
    def n_states(self) -> int:
        return self.values.shape[1]

    @property
    def n_actions(self) -> int:
        return self.values.shape[2]


@dataclass(frozen=True)
class ValueTable:
    """State values V on grid nodes."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=float)
        if arr.ndim != 2:
            raise DimensionMismatch("value table must be (n_nodes, n_states)")
        object.__setattr__(self, "values", _frozen(arr))


@dataclass(frozen=True)
class QTable:
    """State-action values Q on grid nodes."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=float)
        if arr.ndim != 3:
            raise DimensionMismatch("q table must be (n_nodes, n_states, n_actions)")
        object.__setattr__(self, "values", _frozen(arr))


@dataclass(frozen=True)
class SolverConfig:
    """Knobs shared by both equilibrium solvers."""

    alpha: float
    max_iters: int = 100
    beta: float = 0.5
    policy_tol: float = 1e-8
    dt: float = 0.01
    record_nash_gap: bool = True
    initial_policy: Optional[Policy] = None

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if not 0 < self.beta < 1:
            raise ValueError("beta must be in (0, 1)")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.policy_tol < 0:
            raise ValueError("policy_tol must be nonnegative")
        if self.dt <= 0:
            raise ValueError("dt must be positive")


@dataclass(frozen=True)
class IterationRecord:
    """Per-iteration diagnostics of the policy entering iteration k."""

    k: int
    delta_j: float
    delta_j_re: float
    policy_delta: float
    mean_field_delta: float
    objective: float


@dataclass
class IterationTrace:
    """Solver diagnostics: one record per iteration plus the final flows.

    ``final_flow`` is the mean field induced by the returned policy;
    ``averaged_flow`` is fictitious play's geometric average (None for FPI).
    """

    records: list = field(default_factory=list)
    converged: bool = False
    final_flow: Optional[MeanFieldFlow] = None
    averaged_flow: Optional[MeanFieldFlow] = None

    def __len__(self) -> int:
        return len(self.records)

    def series(self, name: str) -> np.ndarray:
        return np.array([getattr(rec, name) for rec in self.records], dtype=float)


def uniform_policy(grid: TimeGrid, n_states: int, n_actions: int) -> Policy:
    if n_actions < 1:
        raise ValueError("n_actions must be at least 1")
    return Policy(np.full((grid.n_steps, n_states, n_actions), 1.0 / n_actions))


def entropy(dist) -> float:
    """Shannon entropy -sum p log p with the 0*log(0) = 0 convention."""
    p = np.asarray(dist, dtype=float)
    pos = p[p > 0.0]
    return float(-(pos * np.log(pos)).sum())


def cleanup_simplex(vec: np.ndarray, floor: float = CLEANUP_FLOOR) -> np.ndarray:
    """Clamp tiny negative entries to 0 and renormalize to sum 1.

    Entries below ``floor`` signal a too-coarse integration step.
    """
    worst = vec.min()
    if worst < floor:
        raise SimplexViolation(
            f"mean-field entry {worst:.3e} below {floor:.0e}; decrease the step size"
        )
    out = np.where(vec < 0.0, 0.0, vec)
    return out / out.sum()
