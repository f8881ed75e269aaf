"""Config-driven experiment runner: solve, sweep temperatures, persist CSVs.

Per-temperature outputs are independent of whether they ran inside a sweep,
and each run is sequential internally, so identical configs always produce
byte-identical files regardless of worker count.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .config import ExperimentConfig
from .errors import ConfigError
from .games import build_left_right, build_random_mfg, build_sis
from .metrics import nash_gap, regularized_gap
from .model import (
    GameModel,
    IterationTrace,
    MeanFieldFlow,
    Policy,
    SolverConfig,
    TimeGrid,
)
from .solvers import fictitious_play, fixed_point_iteration

TRACE_HEADER = "k,delta_j,delta_j_re,policy_delta,mean_field_delta,objective"

COLUMNS_DOC = """\
Column documentation for emitted CSV files.

*_trace.csv    one row per solver iteration k
  k                 iteration index (diagnostics of the policy entering iteration k)
  delta_j           distance to Nash equilibrium (best response value minus self-play value); nan if not recorded
  delta_j_re        distance to regularized equilibrium at the run temperature
  policy_delta      sup-norm policy change produced by iteration k
  mean_field_delta  sup-norm (per-node L1) mean-field change produced by iteration k
  objective         self-play regularized objective of the policy entering iteration k

*_flow.csv     one row per time-grid node: t, then one occupancy column per state
*_flow_averaged.csv   fictitious play only: the geometrically averaged mean field
*_policy.csv   piecewise-constant policy, one row per (interval k, state x, action u)

summary.csv    one row per temperature in the sweep
  alpha             temperature
  iterations        solver iterations executed
  converged         whether the sup-norm policy change dropped below policy_tol
  final_policy_delta      last recorded policy change
  final_delta_j_re        last recorded distance to regularized equilibrium
  final_objective         last recorded self-play objective
  avg_state_<x>           time average (trapezoidal) of state-x occupancy
                          of the final induced mean field
"""


def build_game(config: ExperimentConfig) -> GameModel:
    if config.game == "left-right":
        return build_left_right()
    if config.game == "sis":
        return build_sis()
    if config.game == "random":
        return build_random_mfg(config.game_spec)
    raise ConfigError(f"unknown game '{config.game}'")


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def emit_trace(trace: IterationTrace, path) -> None:
    """CSV with one row per iteration; floats carry 17 significant digits."""
    with open(path, "w", newline="") as fh:
        fh.write(TRACE_HEADER + "\n")
        for rec in trace.records:
            fh.write(
                f"{rec.k},{_fmt(rec.delta_j)},{_fmt(rec.delta_j_re)},"
                f"{_fmt(rec.policy_delta)},{_fmt(rec.mean_field_delta)},{_fmt(rec.objective)}\n"
            )


def read_trace(path) -> list:
    """Round-trip reader for emitted traces (used by tests and tooling)."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        return [
            {key: (int(row[key]) if key == "k" else float(row[key])) for key in row}
            for row in reader
        ]


def emit_flow(flow: MeanFieldFlow, grid: TimeGrid, path) -> None:
    """CSV with header t,state_0,...; shortest round-trip float formatting."""
    header = "t," + ",".join(f"state_{x}" for x in range(flow.n_states))
    times = grid.times
    with open(path, "w", newline="") as fh:
        fh.write(header + "\n")
        for k in range(flow.n_nodes):
            row = ",".join(repr(float(v)) for v in flow.values[k])
            fh.write(f"{repr(float(times[k]))},{row}\n")


def emit_policy(policy: Policy, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("k,x,u,prob\n")
        for k in range(policy.n_intervals):
            for x in range(policy.n_states):
                for u in range(policy.n_actions):
                    fh.write(f"{k},{x},{u},{_fmt(policy.values[k, x, u])}\n")


def load_policy(path, grid: TimeGrid, n_states: int, n_actions: int) -> Policy:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"policy file not found: {path}")
    values = np.full((grid.n_steps, n_states, n_actions), np.nan)
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["k", "x", "u", "prob"]:
            raise ConfigError(f"policy file {path} must have header k,x,u,prob")
        for row in reader:
            try:
                k, x, u = int(row["k"]), int(row["x"]), int(row["u"])
                values[k, x, u] = float(row["prob"])
            except (ValueError, IndexError) as exc:
                raise ConfigError(f"bad policy row {row}: {exc}") from None
    if np.isnan(values).any():
        raise ConfigError(
            f"policy file {path} does not cover every (k, x, u) of the "
            f"{grid.n_steps}x{n_states}x{n_actions} grid"
        )
    return Policy(values)


def _run_prefix(config: ExperimentConfig, alpha: float) -> str:
    return f"{config.game}_{config.solver}_alpha{alpha:g}"


def _run_single(game: GameModel, config: ExperimentConfig, alpha: float, out: Path) -> dict:
    solver_config = SolverConfig(
        alpha=alpha,
        beta=config.beta,
        max_iters=config.max_iters,
        policy_tol=config.policy_tol,
        dt=config.dt,
        record_nash_gap=config.record_nash_gap,
    )
    solve = fictitious_play if config.solver == "fp" else fixed_point_iteration
    policy, trace = solve(game, solver_config)
    grid = TimeGrid.for_horizon(game.horizon, config.dt)
    prefix = _run_prefix(config, alpha)
    emit_trace(trace, out / f"{prefix}_trace.csv")
    if config.record_flows:
        emit_flow(trace.final_flow, grid, out / f"{prefix}_flow.csv")
        if trace.averaged_flow is not None:
            emit_flow(trace.averaged_flow, grid, out / f"{prefix}_flow_averaged.csv")
    if config.record_policies:
        emit_policy(policy, out / f"{prefix}_policy.csv")
    last = trace.records[-1]
    occupancy = np.trapezoid(trace.final_flow.values, dx=grid.dt, axis=0) / grid.horizon
    return {
        "alpha": alpha,
        "iterations": len(trace),
        "converged": trace.converged,
        "final_policy_delta": last.policy_delta,
        "final_delta_j_re": last.delta_j_re,
        "final_objective": last.objective,
        "occupancy": occupancy,
    }


def run(config: ExperimentConfig) -> int:
    """Execute the configured experiment; returns 0 on completion."""
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    game = build_game(config)
    (out / "columns.txt").write_text(COLUMNS_DOC)
    if config.workers > 1 and len(config.alphas) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(lambda a: _run_single(game, config, a, out), config.alphas))
    else:
        results = [_run_single(game, config, alpha, out) for alpha in config.alphas]
    n_states = game.n_states
    with open(out / "summary.csv", "w", newline="") as fh:
        state_cols = ",".join(f"avg_state_{x}" for x in range(n_states))
        fh.write(
            "alpha,iterations,converged,final_policy_delta,final_delta_j_re,"
            f"final_objective,{state_cols}\n"
        )
        for res in results:
            occ = ",".join(_fmt(v) for v in res["occupancy"])
            fh.write(
                f"{res['alpha']:g},{res['iterations']},{str(res['converged']).lower()},"
                f"{_fmt(res['final_policy_delta'])},{_fmt(res['final_delta_j_re'])},"
                f"{_fmt(res['final_objective'])},{occ}\n"
            )
    return 0


def gap_report(config: ExperimentConfig, policy_path) -> list:
    """Recompute both distance-to-equilibrium metrics for a stored policy."""
    game = build_game(config)
    grid = TimeGrid.for_horizon(game.horizon, config.dt)
    policy = load_policy(policy_path, grid, game.n_states, game.n_actions)
    base_gap = nash_gap(game, policy, grid)
    lines = []
    for alpha in config.alphas:
        reg = regularized_gap(game, policy, alpha, grid)
        lines.append(f"alpha={alpha:g} nash_gap={_fmt(base_gap)} regularized_gap={_fmt(reg)}")
    return lines
