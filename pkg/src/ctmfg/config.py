"""Declarative experiment configuration (TOML).

Grammar (all keys shown; unknown keys are rejected):

    [game]
    name = "left-right"        # or "random" or "sis"
    # random only:
    seed = 20                  # required for random
    n_states = 10
    n_actions = 2
    horizon = 10.0
    eta = 1.0
    epsilon_log = 1e-10

    [solver]
    name = "fp"                # or "fpi"
    alpha = 0.1                # scalar or list for a temperature sweep
    beta = 0.5
    max_iters = 100
    policy_tol = 1e-8
    dt = 0.01

    [output]
    directory = "results"
    record_nash_gap = true
    record_flows = true
    record_policies = false
    workers = 0                # 0 = one thread per sweep temperature
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import tomli

from .errors import ConfigError
from .games import RandomGameSpec

GAME_NAMES = ("left-right", "random", "sis")
SOLVER_NAMES = ("fpi", "fp")

_RANDOM_KEYS = {"seed", "n_states", "n_actions", "horizon", "eta", "epsilon_log"}
_SOLVER_KEYS = {"name", "alpha", "beta", "max_iters", "policy_tol", "dt"}
_OUTPUT_KEYS = {"directory", "record_nash_gap", "record_flows", "record_policies", "workers"}


@dataclass(frozen=True)
class ExperimentConfig:
    game: str
    game_spec: Optional[RandomGameSpec]
    solver: str
    alphas: tuple
    beta: float
    max_iters: int
    policy_tol: float
    dt: float
    out_dir: str
    record_nash_gap: bool
    record_flows: bool
    record_policies: bool
    workers: int


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigError(message)


def _as_float(raw, key: str) -> float:
    _require(isinstance(raw, (int, float)) and not isinstance(raw, bool), f"{key} must be a number")
    return float(raw)


def _as_int(raw, key: str) -> int:
    _require(isinstance(raw, int) and not isinstance(raw, bool), f"{key} must be an integer")
    return int(raw)


def _as_bool(raw, key: str) -> bool:
    _require(isinstance(raw, bool), f"{key} must be a boolean")
    return raw


def parse_overrides(raw: dict, overrides) -> dict:
    """Apply --override entries of the form section.key=value (TOML literals)."""
    for item in overrides:
        key, sep, value = item.partition("=")
        _require(bool(sep), f"override '{item}' must look like section.key=value")
        section, dot, name = key.strip().partition(".")
        _require(bool(dot), f"override key '{key}' must be section.key")
        try:
            parsed = tomli.loads(f"value = {value.strip()}")["value"]
        except tomli.TOMLDecodeError as exc:
            raise ConfigError(f"override value for '{key}' is not a TOML literal: {exc}") from None
        raw.setdefault(section.strip(), {})[name.strip()] = parsed
    return raw


def from_dict(raw: dict, out_dir: Optional[str] = None) -> ExperimentConfig:
    unknown = set(raw) - {"game", "solver", "output"}
    _require(not unknown, f"unknown config sections: {sorted(unknown)}")
    _require("game" in raw and "solver" in raw, "config needs [game] and [solver] sections")

    game_raw = dict(raw["game"])
    name = game_raw.pop("name", None)
    _require(name in GAME_NAMES, f"game.name must be one of {GAME_NAMES}")
    game_spec = None
    if name == "random":
        unknown = set(game_raw) - _RANDOM_KEYS
        _require(not unknown, f"unknown [game] keys for random: {sorted(unknown)}")
        _require("seed" in game_raw, "game.seed is required for random games")
        game_spec = RandomGameSpec(
            seed=_as_int(game_raw["seed"], "game.seed"),
            n_states=_as_int(game_raw.get("n_states", 10), "game.n_states"),
            n_actions=_as_int(game_raw.get("n_actions", 2), "game.n_actions"),
            horizon=_as_float(game_raw.get("horizon", 10.0), "game.horizon"),
            eta=_as_float(game_raw.get("eta", 1.0), "game.eta"),
            epsilon_log=_as_float(game_raw.get("epsilon_log", 1e-10), "game.epsilon_log"),
        )
    else:
        _require(not game_raw, f"unknown [game] keys for {name}: {sorted(game_raw)}")

    solver_raw = dict(raw["solver"])
    unknown = set(solver_raw) - _SOLVER_KEYS
    _require(not unknown, f"unknown [solver] keys: {sorted(unknown)}")
    solver = solver_raw.get("name")
    _require(solver in SOLVER_NAMES, f"solver.name must be one of {SOLVER_NAMES}")
    _require("alpha" in solver_raw, "solver.alpha is required")
    alpha_raw = solver_raw["alpha"]
    if isinstance(alpha_raw, list):
        _require(len(alpha_raw) > 0, "solver.alpha list must not be empty")
        alphas = tuple(_as_float(a, "solver.alpha") for a in alpha_raw)
    else:
        alphas = (_as_float(alpha_raw, "solver.alpha"),)
    _require(all(a > 0 for a in alphas), "solver.alpha values must be positive")
    beta = _as_float(solver_raw.get("beta", 0.5), "solver.beta")
    _require(0 < beta < 1, "solver.beta must be in (0, 1)")
    max_iters = _as_int(solver_raw.get("max_iters", 100), "solver.max_iters")
    _require(max_iters >= 1, "solver.max_iters must be at least 1")
    policy_tol = _as_float(solver_raw.get("policy_tol", 1e-8), "solver.policy_tol")
    _require(policy_tol >= 0, "solver.policy_tol must be nonnegative")
    dt = _as_float(solver_raw.get("dt", 0.01), "solver.dt")
    _require(dt > 0, "solver.dt must be positive")

    output_raw = dict(raw.get("output", {}))
    unknown = set(output_raw) - _OUTPUT_KEYS
    _require(not unknown, f"unknown [output] keys: {sorted(unknown)}")
    directory = out_dir if out_dir is not None else output_raw.get("directory", "results")
    _require(isinstance(directory, str), "output.directory must be a string")
    workers = _as_int(output_raw.get("workers", 0), "output.workers")
    _require(workers >= 0, "output.workers must be nonnegative")
    if workers == 0:
        workers = min(len(alphas), os.cpu_count() or 1)

    return ExperimentConfig(
        game=name,
        game_spec=game_spec,
        solver=solver,
        alphas=alphas,
        beta=beta,
        max_iters=max_iters,
        policy_tol=policy_tol,
        dt=dt,
        out_dir=directory,
        record_nash_gap=_as_bool(output_raw.get("record_nash_gap", True), "output.record_nash_gap"),
        record_flows=_as_bool(output_raw.get("record_flows", True), "output.record_flows"),
        record_policies=_as_bool(output_raw.get("record_policies", False), "output.record_policies"),
        workers=workers,
    )


def load_config(path, overrides=(), out_dir: Optional[str] = None) -> ExperimentConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = tomli.loads(path.read_text())
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None
    raw = parse_overrides(raw, overrides)
    return from_dict(raw, out_dir=out_dir)
