"""Distance-to-equilibrium metrics.

The best-response value over all deviating policies is computed exactly (up to
discretization) by a single backward value pass, so both gaps cost one forward
pass, one backward pass, and one policy evaluation.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch
from .model import GameModel, MeanFieldFlow, Policy, TimeGrid
from .solvers import backward_hard_hjb, backward_soft_hjb, evaluate_policy, forward_mean_field


def sup_distance(a, b) -> float:
    """Sup-norm distance: elementwise for policies, per-node L1 for flows."""
    if not isinstance(a, (Policy, MeanFieldFlow)):
        raise TypeError("sup_distance expects two policies or two mean-field flows")
    if type(a) is not type(b):
        raise DimensionMismatch(f"cannot compare {type(a).__name__} with {type(b).__name__}")
    if a.values.shape != b.values.shape:
        raise DimensionMismatch(f"shape {a.values.shape} vs {b.values.shape}")
    diff = np.abs(a.values - b.values)
    if isinstance(a, MeanFieldFlow):
        return float(diff.sum(axis=1).max())
    return float(diff.max())


def nash_gap(game: GameModel, pi: Policy, grid: TimeGrid) -> float:
    """max over deviations of J(pi_hat, pi) minus J(pi, pi)."""
    mu = forward_mean_field(game, pi, grid)
    hard = backward_hard_hjb(game, mu, grid)
    best = float(game.mu0 @ hard.v.values[0])
    return best - evaluate_policy(game, pi, mu, 0.0, grid)


def regularized_gap(game: GameModel, pi: Policy, alpha: float, grid: TimeGrid) -> float:
    """Entropy-regularized counterpart of nash_gap at temperature alpha."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    mu = forward_mean_field(game, pi, grid)
    soft = backward_soft_hjb(game, mu, alpha, grid)
    best = float(game.mu0 @ soft.v.values[0])
    return best - evaluate_policy(game, pi, mu, alpha, grid)
