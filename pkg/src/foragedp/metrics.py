"""Behavioral statistics over action sequences and realization ensembles."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .params import Action, ConfigError, EnvParams, ParamError


@dataclass(frozen=True)
class BurstStats:
    """Run-length structure of one action sequence.

    A burst is a maximal run of same-kind actions; the two commitments count
    as one kind. Lengths are kept in encounter order.
    """

    commit_bursts: tuple[int, ...]
    sample_bursts: tuple[int, ...]

    @property
    def mean_commit(self) -> float:
        return sum(self.commit_bursts) / len(self.commit_bursts) if self.commit_bursts else 0.0

    @property
    def mean_sample(self) -> float:
        return sum(self.sample_bursts) / len(self.sample_bursts) if self.sample_bursts else 0.0

    @property
    def ratio(self) -> float:
        """Mean sample-burst length over mean commit-burst length.

        0 for a sequence with no sample bursts (pure exploitation); inf for
        one that samples but never commits (possible when the last budget
        steps cannot fit a commitment).
        """
        if not self.sample_bursts:
            return 0.0
        if not self.commit_bursts:
            return math.inf
        return self.mean_sample / self.mean_commit


@dataclass(frozen=True, eq=False)
class EnsembleSummary:
    """Ensemble-level statistics for one (objective, environment) cell."""

    objective: str
    env: EnvParams
    n_realizations: int
    cell_seed: int
    burst_ratio_mean: float
    reward_rates: np.ndarray = field(repr=False)
    rate_mean: float = 0.0
    rate_std: float = 0.0
    kappa: float = math.nan


def extract_bursts(actions) -> BurstStats:
    """Decompose an action sequence (enum members or int codes) into bursts."""
    commit_runs: list[int] = []
    sample_runs: list[int] = []
    prev = 0
    count = 0
    for a in actions:
        code = int(a)
        if code == Action.SAMPLE:
            kind = 2
        elif code in (Action.COMMIT_PLUS, Action.COMMIT_MINUS):
            kind = 1
        else:
            raise ParamError(f"actions: unknown action code {a!r}")
        if kind == prev:
            count += 1
        else:
            if prev == 1:
                commit_runs.append(count)
            elif prev == 2:
                sample_runs.append(count)
            prev = kind
            count = 1
    if prev == 0:
        raise ParamError("actions: must be non-empty")
    if prev == 1:
        commit_runs.append(count)
    else:
        sample_runs.append(count)
    return BurstStats(tuple(commit_runs), tuple(sample_runs))


def action_alignment(rec) -> float:
    """Fraction of an alignment record's pairs where the two policies agree
    exactly (sign included)."""
    pairs = rec.pairs
    if not pairs:
        raise ParamError("rec: alignment record has no pairs")
    matches = sum(1 for _, _, a_rm, a_im in pairs if int(a_rm) == int(a_im))
    return matches / len(pairs)


def empirical_reward_rate(rec) -> float:
    """Reward earned per budget step; the denominator is the full budget
    regardless of how the steps were spent."""
    return rec.total_reward / rec.env.budget_n


def robustness(rates) -> float:
    """Mean over population standard deviation; NaN when the spread is
    numerically zero (a deterministic ensemble has no meaningful spread)."""
    arr = np.asarray(rates, dtype=float)
    if arr.size < 2:
        raise ParamError("rates: need at least two values")
    std = float(arr.std(ddof=0))
    if std < 1e-12:
        return math.nan
    return float(arr.mean()) / std


def differentials(summary_rm: EnsembleSummary, summary_im: EnsembleSummary) -> tuple[float, float]:
    """Reward-rate and robustness differences of a matched summary pair.

    The rate difference is normalized by the reward magnitude r_plus so cells
    with different payoff scales stay comparable; a NaN robustness on either
    side propagates.
    """
    if summary_rm.env != summary_im.env:
        raise ConfigError("summaries: environments differ")
    delta_rho = (summary_rm.rate_mean - summary_im.rate_mean) / summary_rm.env.r_plus
    delta_kappa = summary_rm.kappa - summary_im.kappa
    return delta_rho, delta_kappa
