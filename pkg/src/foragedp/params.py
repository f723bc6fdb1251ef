"""Parameter records and shared enumerations for the dynamic foraging task."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum


class ParamError(ValueError):
    """A parameter is outside its legal range; the message names the field."""


class ConfigError(ValueError):
    """Inconsistent configuration (mismatched tables, bad config file, ...)."""


class Action(IntEnum):
    """The three actions. Integer values double as value-table codes, and the
    ordering realizes the commit-preferring tie-break (first maximum wins)."""

    COMMIT_PLUS = 0
    COMMIT_MINUS = 1
    SAMPLE = 2


class Decision(IntEnum):
    """Committed choice of hidden state; the value is the sign of the choice."""

    S_PLUS = 1
    S_MINUS = -1


class Feedback(IntEnum):
    REWARD = 1
    PUNISH = 0


class HiddenState(IntEnum):
    S_PLUS = 1
    S_MINUS = -1


REWARDMAX = "rewardmax"
INFOMAX = "infomax"
OBJECTIVES = (REWARDMAX, INFOMAX)

DRIVERS = (REWARDMAX, INFOMAX, "random")

ACTION_NAMES = {
    Action.COMMIT_PLUS: "commit_plus",
    Action.COMMIT_MINUS: "commit_minus",
    Action.SAMPLE: "sample",
}
ACTION_FROM_NAME = {v: k for k, v in ACTION_NAMES.items()}


def _require(ok: bool, name: str, message: str) -> None:
    if not ok:
        raise ParamError(f"{name}: {message}")


@dataclass(frozen=True)
class EnvParams:
    """Full task parameterization.

    epsilon   per-decision probability that the hidden state flips
    q         feedback reliability (probability feedback matches correctness)
    h         Bernoulli evidence parameter for environmental samples
    r_plus    payoff on reward feedback (R_c); r_minus on punishment (R_i)
    tau_d     time-step cost of a commitment
    tau_s     time-step cost of drawing one sample
    budget_n  total time-step budget N
    gamma     discount on future utility
    """

    epsilon: float
    q: float
    h: float = 0.75
    r_plus: float = 100.0
    r_minus: float = -100.0
    tau_d: int = 1
    tau_s: int = 1
    budget_n: int = 10
    gamma: float = 1.0

    def __post_init__(self) -> None:
        _require(0.0 <= self.epsilon <= 0.5, "epsilon", "must be in [0, 0.5]")
        _require(0.5 <= self.q <= 1.0, "q", "must be in [0.5, 1]")
        _require(0.5 <= self.h <= 1.0, "h", "must be in [0.5, 1]")
        _require(isinstance(self.tau_d, int) and self.tau_d >= 1, "tau_d", "must be an integer >= 1")
        _require(isinstance(self.tau_s, int) and self.tau_s >= 1, "tau_s", "must be an integer >= 1")
        _require(isinstance(self.budget_n, int) and self.budget_n >= 1, "budget_n", "must be an integer >= 1")
        _require(0.0 <= self.gamma <= 1.0, "gamma", "must be in [0, 1]")


@dataclass(frozen=True)
class DPConfig:
    """Solver knobs: belief-axis resolution, interpolation, tie handling."""

    grid_points: int = 1201
    interpolation: str = "linear"
    tie_break: str = "prefer_commit"

    def __post_init__(self) -> None:
        _require(
            isinstance(self.grid_points, int) and self.grid_points >= 201 and self.grid_points % 2 == 1,
            "grid_points",
            "must be an odd integer >= 201",
        )
        _require(self.interpolation == "linear", "interpolation", "only 'linear' is supported")
        _require(self.tie_break == "prefer_commit", "tie_break", "only 'prefer_commit' is supported")


@dataclass(frozen=True)
class SweepConfig:
    """One batch experiment: a base environment plus the grids swept over it."""

    base: EnvParams
    epsilon_grid: tuple[float, ...]
    q_grid: tuple[float, ...]
    gamma_list: tuple[float, ...] = (1.0,)
    objectives: tuple[str, ...] = OBJECTIVES
    n_realizations: int = 10_000
    master_seed: int = 0
    dp: DPConfig = field(default_factory=DPConfig)
    driver: str = REWARDMAX
    output_dir: str = "out"

    def __post_init__(self) -> None:
        _require(len(self.epsilon_grid) > 0, "epsilon_grid", "must be non-empty")
        _require(len(self.q_grid) > 0, "q_grid", "must be non-empty")
        _require(len(self.gamma_list) > 0, "gamma_list", "must be non-empty")
        for e in self.epsilon_grid:
            _require(0.0 <= e <= 0.5, "epsilon_grid", f"value {e} outside [0, 0.5]")
        for q in self.q_grid:
            _require(0.5 <= q <= 1.0, "q_grid", f"value {q} outside [0.5, 1]")
        for g in self.gamma_list:
            _require(0.0 <= g <= 1.0, "gamma_list", f"value {g} outside [0, 1]")
        _require(len(self.objectives) > 0, "objectives", "must be non-empty")
        for obj in self.objectives:
            _require(obj in OBJECTIVES, "objectives", f"unknown objective {obj!r}")
        _require(self.n_realizations >= 1, "n_realizations", "must be >= 1")
        _require(0 <= self.master_seed < 2**64, "master_seed", "must fit in 64 bits")
        _require(self.driver in DRIVERS, "driver", f"must be one of {DRIVERS}")
