"""Equilibrium maps and the two learning algorithms.

The three maps: forward_mean_field solves the master equation for the flow
induced by a policy, backward_soft_hjb solves the entropy-regularized value
ODE (log-sum-exp Hamiltonian), and softmax_policy turns the resulting
state-action values into the Boltzmann policy. Fixed-point iteration composes
them directly; fictitious play keeps a geometric average of past mean fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionMismatch, NumericOverflow, SimplexViolation
from .integrators import rk4_step, integrate_grid
from .model import (
    CLEANUP_FLOOR,
    GameModel,
    IterationRecord,
    IterationTrace,
    MeanFieldFlow,
    Policy,
    QTable,
    SolverConfig,
    TimeGrid,
    ValueTable,
    cleanup_simplex,
    uniform_policy,
)


@dataclass(frozen=True)
class BackwardSolution:
    """Consistent (V, Q) pair produced by one backward pass."""

    v: ValueTable
    q: QTable


def _check_policy(game: GameModel, policy: Policy, grid: TimeGrid) -> None:
    expected = (grid.n_steps, game.n_states, game.n_actions)
    if policy.values.shape != expected:
        raise DimensionMismatch(f"policy shape {policy.values.shape}, expected {expected}")


def _check_flow(game: GameModel, mu: MeanFieldFlow, grid: TimeGrid) -> None:
    expected = (grid.n_nodes, game.n_states)
    if mu.values.shape != expected:
        raise DimensionMismatch(f"flow shape {mu.values.shape}, expected {expected}")


def _interp_flow(values: np.ndarray, t: float, grid: TimeGrid) -> np.ndarray:
    """Linear interpolation of node-indexed data at an arbitrary time."""
    pos = t / grid.dt
    i = int(pos)
    if i < 0:
        return values[0]
    if i >= grid.n_steps:
        return values[grid.n_steps]
    w = pos - i
    return (1.0 - w) * values[i] + w * values[i + 1]


def _master_rhs_np(lam: np.ndarray, mu: np.ndarray, pi: np.ndarray) -> np.ndarray:
    return np.einsum("yxu,y,yu->x", lam, mu, pi)


def forward_mean_field(game: GameModel, policy: Policy, grid: TimeGrid) -> MeanFieldFlow:
    """Solve the master equation for the mean field induced by a policy."""
    _check_policy(game, policy, grid)
    if game.tabular is not None:
        tab = game.tabular
        values, worst = kernels.forward_master(
            tab.lam0, tab.lam1, policy.values, game.mu0, grid.dt, grid.n_steps
        )
        if worst < CLEANUP_FLOOR:
            raise SimplexViolation(
                f"mean-field entry {worst:.3e} below {CLEANUP_FLOOR:.0e}; decrease the step size"
            )
        return MeanFieldFlow(values)
    values = np.empty((grid.n_nodes, game.n_states))
    values[0] = game.mu0
    y = game.mu0
    times = grid.times
    for k in range(grid.n_steps):
        pi_k = policy.values[k]

        def field(t, m, pi_k=pi_k):
            return _master_rhs_np(game.generator(m), m, pi_k)

        y = cleanup_simplex(rk4_step(field, float(times[k]), y, grid.dt))
        values[k + 1] = y
    return MeanFieldFlow(values)


def _q_nodes_generic(game: GameModel, mu_values: np.ndarray, v_values: np.ndarray) -> np.ndarray:
    n_nodes = v_values.shape[0]
    q = np.empty((n_nodes, game.n_states, game.n_actions))
    for k in range(n_nodes):
        lam = game.generator(mu_values[k])
        q[k] = game.rewards(mu_values[k]) + np.einsum("xyu,y->xu", lam, v_values[k])
    return q


def _finish_backward(game, mu, grid, v_values, alpha=None) -> BackwardSolution:
    if game.tabular is not None:
        tab = game.tabular
        q_values = kernels.q_tables(
            tab.lam0, tab.lam1, tab.r0, tab.r1, tab.c_log, tab.eps_log, mu.values, v_values
        )
    else:
        q_values = _q_nodes_generic(game, mu.values, v_values)
    if not (np.isfinite(v_values).all() and np.isfinite(q_values).all()):
        raise NumericOverflow("non-finite values in backward pass")
    if alpha is not None and __debug__:
        # log-sum-exp sandwich: max Q <= alpha*LSE(Q/alpha) <= max Q + alpha*log|U|
        top = q_values.max(axis=2)
        lse = top + alpha * np.log(np.exp((q_values - top[:, :, None]) / alpha).sum(axis=2))
        assert (lse >= top).all() and (lse <= top + alpha * math.log(game.n_actions)).all()
    return BackwardSolution(v=ValueTable(v_values), q=QTable(q_values))


def backward_soft_hjb(game: GameModel, mu: MeanFieldFlow, alpha: float, grid: TimeGrid) -> BackwardSolution:
    """Solve the entropy-regularized value ODE backward from the terminal reward."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    _check_flow(game, mu, grid)
    q_term = game.terminal_values()
    if game.tabular is not None:
        tab = game.tabular
        v_values = kernels.backward_soft(
            tab.lam0, tab.lam1, tab.r0, tab.r1, tab.c_log, tab.eps_log,
            mu.values, q_term, alpha, grid.dt,
        )
        return _finish_backward(game, mu, grid, v_values, alpha)

    def field(t, v):
        nu = _interp_flow(mu.values, t, grid)
        lam = game.generator(nu)
        q = game.rewards(nu) + np.einsum("xyu,y->xu", lam, v)
        top = q.max(axis=1)
        with np.errstate(invalid="ignore"):
            return -(top + alpha * np.log(np.exp((q - top[:, None]) / alpha).sum(axis=1)))

    v_values = integrate_grid(field, q_term, grid, "backward")
    return _finish_backward(game, mu, grid, v_values, alpha)


def backward_hard_hjb(game: GameModel, mu: MeanFieldFlow, grid: TimeGrid) -> BackwardSolution:
    """Solve the max-Bellman value ODE backward from the terminal reward."""
    _check_flow(game, mu, grid)
    q_term = game.terminal_values()
    if game.tabular is not None:
        tab = game.tabular
        v_values = kernels.backward_hard(
            tab.lam0, tab.lam1, tab.r0, tab.r1, tab.c_log, tab.eps_log,
            mu.values, q_term, grid.dt,
        )
        return _finish_backward(game, mu, grid, v_values)

    def field(t, v):
        nu = _interp_flow(mu.values, t, grid)
        lam = game.generator(nu)
        q = game.rewards(nu) + np.einsum("xyu,y->xu", lam, v)
        return -q.max(axis=1)

    v_values = integrate_grid(field, q_term, grid, "backward")
    return _finish_backward(game, mu, grid, v_values)


def softmax_policy(q: QTable, alpha: float) -> Policy:
    """Boltzmann policy; interval k uses the Q values at node k."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    vals = q.values[:-1]
    shifted = vals - vals.max(axis=2, keepdims=True)
    w = np.exp(shifted / alpha)
    return Policy(w / w.sum(axis=2, keepdims=True))


def greedy_policy(q: QTable) -> Policy:
    """Deterministic argmax policy; ties break to the lowest action index."""
    vals = q.values[:-1]
    best = vals.argmax(axis=2)
    return Policy(np.identity(vals.shape[2])[best])


def evaluate_policy(game: GameModel, pi_hat: Policy, mu: MeanFieldFlow, alpha: float, grid: TimeGrid) -> float:
    """Value of playing pi_hat against the flow mu, with entropy bonus alpha.

    Solves the linear policy-evaluation ODE backward and returns the
    mu0-weighted initial value. alpha = 0 gives the unregularized objective.
    """
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    _check_policy(game, pi_hat, grid)
    _check_flow(game, mu, grid)
    p = pi_hat.values
    plogp = np.where(p > 0.0, p * np.log(np.where(p > 0.0, p, 1.0)), 0.0)
    bonus = -alpha * plogp.sum(axis=2)
    q_term = game.terminal_values()
    if game.tabular is not None:
        tab = game.tabular
        v_values = kernels.backward_eval(
            tab.lam0, tab.lam1, tab.r0, tab.r1, tab.c_log, tab.eps_log,
            mu.values, p, bonus, q_term, grid.dt,
        )
    else:
        v_values = np.empty((grid.n_nodes, game.n_states))
        v_values[-1] = q_term
        v = q_term
        times = grid.times
        for k in range(grid.n_steps - 1, -1, -1):
            pi_k = p[k]
            b_k = bonus[k]

            def field(t, v, pi_k=pi_k, b_k=b_k):
                nu = _interp_flow(mu.values, t, grid)
                lam = game.generator(nu)
                q = game.rewards(nu) + np.einsum("xyu,y->xu", lam, v)
                return -((pi_k * q).sum(axis=1) + b_k)

            v = rk4_step(field, float(times[k + 1]), v, -grid.dt)
            v_values[k] = v
    if not np.isfinite(v_values).all():
        raise NumericOverflow("non-finite values in policy evaluation")
    return float(game.mu0 @ v_values[0])


def _sup_abs(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.abs(a - b).max())


def _sup_l1(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.abs(a - b).sum(axis=1).max())


def _iteration_metrics(game, policy, flow, soft, alpha, grid, record_nash_gap):
    """Gaps and self-play objective of `policy` on its own induced flow."""
    best_soft = float(game.mu0 @ soft.v.values[0])
    objective = evaluate_policy(game, policy, flow, alpha, grid)
    delta_j_re = best_soft - objective
    if record_nash_gap:
        hard = backward_hard_hjb(game, flow, grid)
        best_hard = float(game.mu0 @ hard.v.values[0])
        delta_j = best_hard - evaluate_policy(game, policy, flow, 0.0, grid)
    else:
        delta_j = math.nan
    return delta_j, delta_j_re, objective


def _initial_policy(game: GameModel, config: SolverConfig, grid: TimeGrid) -> Policy:
    if config.initial_policy is None:
        return uniform_policy(grid, game.n_states, game.n_actions)
    _check_policy(game, config.initial_policy, grid)
    return config.initial_policy


def fixed_point_iteration(game: GameModel, config: SolverConfig):
    """Iterate policy -> induced flow -> soft values -> softmax policy.

    Returns the final policy and a trace whose record k holds the diagnostics
    of the policy entering iteration k. Non-convergence is not an error.
    """
    grid = TimeGrid.for_horizon(game.horizon, config.dt)
    policy = _initial_policy(game, config, grid)
    flow = forward_mean_field(game, policy, grid)
    trace = IterationTrace()
    for k in range(config.max_iters):
        soft = backward_soft_hjb(game, flow, config.alpha, grid)
        delta_j, delta_j_re, objective = _iteration_metrics(
            game, policy, flow, soft, config.alpha, grid, config.record_nash_gap
        )
        new_policy = softmax_policy(soft.q, config.alpha)
        new_flow = forward_mean_field(game, new_policy, grid)
        policy_delta = _sup_abs(new_policy.values, policy.values)
        trace.records.append(IterationRecord(
            k=k,
            delta_j=delta_j,
            delta_j_re=delta_j_re,
            policy_delta=policy_delta,
            mean_field_delta=_sup_l1(new_flow.values, flow.values),
            objective=objective,
        ))
        policy, flow = new_policy, new_flow
        if policy_delta < config.policy_tol:
            trace.converged = True
            break
    trace.final_flow = flow
    return policy, trace


def fictitious_play(game: GameModel, config: SolverConfig):
    """Best-respond to a geometric average of past mean fields.

    The averaged flow drives the policy update; the gap diagnostics in the
    trace are always measured on the flow the current policy itself induces.
    """
    grid = TimeGrid.for_horizon(game.horizon, config.dt)
    policy = _initial_policy(game, config, grid)
    raw_flow = forward_mean_field(game, policy, grid)
    avg_flow = raw_flow
    trace = IterationTrace()
    for k in range(config.max_iters):
        soft_avg = backward_soft_hjb(game, avg_flow, config.alpha, grid)
        if avg_flow is raw_flow:
            soft_raw = soft_avg
        else:
            soft_raw = backward_soft_hjb(game, raw_flow, config.alpha, grid)
        delta_j, delta_j_re, objective = _iteration_metrics(
            game, policy, raw_flow, soft_raw, config.alpha, grid, config.record_nash_gap
        )
        new_policy = softmax_policy(soft_avg.q, config.alpha)
        new_raw = forward_mean_field(game, new_policy, grid)
        new_avg = MeanFieldFlow((1.0 - config.beta) * new_raw.values + config.beta * avg_flow.values)
        policy_delta = _sup_abs(new_policy.values, policy.values)
        trace.records.append(IterationRecord(
            k=k,
            delta_j=delta_j,
            delta_j_re=delta_j_re,
            policy_delta=policy_delta,
            mean_field_delta=_sup_l1(new_avg.values, avg_flow.values),
            objective=objective,
        ))
        policy, raw_flow, avg_flow = new_policy, new_raw, new_avg
        if policy_delta < config.policy_tol:
            trace.converged = True
            break
    trace.final_flow = raw_flow
    trace.averaged_flow = avg_flow
    return policy, trace
