"""Solvers for entropy-regularized equilibria in continuous-time finite-state mean field games."""

from .errors import (
    ConfigError,
    DimensionMismatch,
    NumericOverflow,
    SimplexViolation,
    SolverError,
)
from .games import (
    RandomGameSpec,
    build_left_right,
    build_random_mfg,
    build_sis,
    mean_infected_fraction,
)
from .integrators import VectorField, integrate_grid, rk4_step
from .metrics import nash_gap, regularized_gap, sup_distance
from .model import (
    GameModel,
    IterationRecord,
    IterationTrace,
    MeanFieldFlow,
    Policy,
    QTable,
    SolverConfig,
    TimeGrid,
    ValueTable,
    entropy,
    uniform_policy,
)
from .solvers import (
    BackwardSolution,
    backward_hard_hjb,
    backward_soft_hjb,
    evaluate_policy,
    fictitious_play,
    fixed_point_iteration,
    forward_mean_field,
    greedy_policy,
    softmax_policy,
)
from .tabular import TabularGame

__version__ = "0.1.0"

__all__ = [
    "BackwardSolution",
    "ConfigError",
    "DimensionMismatch",
    "GameModel",
    "IterationRecord",
    "IterationTrace",
    "MeanFieldFlow",
    "NumericOverflow",
    "Policy",
    "QTable",
    "RandomGameSpec",
    "SimplexViolation",
    "SolverConfig",
    "SolverError",
    "TabularGame",
    "TimeGrid",
    "ValueTable",
    "VectorField",
    "backward_hard_hjb",
    "backward_soft_hjb",
    "build_left_right",
    "build_random_mfg",
    "build_sis",
    "entropy",
    "evaluate_policy",
    "fictitious_play",
    "fixed_point_iteration",
    "forward_mean_field",
    "greedy_policy",
    "integrate_grid",
    "mean_infected_fraction",
    "nash_gap",
    "regularized_gap",
    "rk4_step",
    "softmax_policy",
    "sup_distance",
    "uniform_policy",
]
