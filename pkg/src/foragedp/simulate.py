"""Ensemble simulation driven by counter-based random blocks.

Each (epsilon, q, gamma) cell of a sweep owns one 64-bit cell seed, derived
from the master seed and the cell's grid indices. The cell's randomness is a
Philox-generated block of shape (n_realizations, 1 + 3*budget_n): row i is
realization i, and any single realization can be regenerated later from the
cell seed and its row index alone (see ``run_realization``). Because rows
are indexed, summaries are independent of worker count and batch order, and
matched objectives simulated from the same cell seed share their random
numbers, which cancels sampling noise out of paired differences.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels, io
from .beliefs import evidence_increment
from .dp import ValueTable
from .metrics import EnsembleSummary, robustness
from .params import (
    ACTION_NAMES,
    DRIVERS,
    INFOMAX,
    REWARDMAX,
    Action,
    Decision,
    EnvParams,
    Feedback,
    HiddenState,
    ParamError,
)

_DRIVER_CODES = {REWARDMAX: 0, INFOMAX: 1, "random": 2}


@dataclass(frozen=True)
class StepRecord:
    """One executed action. Beliefs and hidden state are in agent view: the
    state shown is the one that generated the outcome, before any change at
    a trial boundary. Outcome is "reward"/"punish" for commitments and the
    signed observation for samples."""

    step_index: int
    action: Action
    belief_llr: float
    belief_llr_after: float
    hidden_state: HiddenState
    outcome: str
    reward: float


@dataclass(frozen=True)
class RealizationRecord:
    realization_id: int
    cell_seed: int
    objective: str
    env: EnvParams
    steps: tuple[StepRecord, ...]
    total_reward: float
    n_commits: int
    n_samples: int
    n_commit_bursts: int
    n_sample_bursts: int
    trial_steps: int
    sampling_steps: int  # includes any unspent budget remainder


@dataclass(frozen=True)
class AlignmentRecord:
    """One driven trajectory with both policies' prescriptions per step:
    pairs of (step row, belief LLR, first table's action, second table's
    action)."""

    realization_id: int
    cell_seed: int
    driver: str
    env: EnvParams
    pairs: tuple[tuple[int, float, Action, Action], ...]


@dataclass(frozen=True)
class AlignmentSummary:
    """Ensemble mean of per-trajectory alignment for one cell."""

    env: EnvParams
    driver: str
    n_realizations: int
    cell_seed: int
    alignment_mean: float


def draw_feedback(decision: Decision, state: HiddenState, q: float, rng) -> Feedback:
    """Feedback from one stream draw: reward with probability q when the
    decision matches the state, 1-q otherwise."""
    p_reward = q if int(decision) == int(state) else 1.0 - q
    return Feedback.REWARD if rng.random() < p_reward else Feedback.PUNISH


def advance_state(state: HiddenState, epsilon: float, rng) -> HiddenState:
    """State after one trial boundary: flips with probability epsilon."""
    return HiddenState(-int(state)) if rng.random() < epsilon else state


def draw_observation(state: HiddenState, h: float, rng) -> int:
    """Signed observation matching the state sign with probability h."""
    obs = 1 if rng.random() < h else -1
    return obs if int(state) > 0 else -obs


def block_width(budget_n: int) -> int:
    """Random draws reserved per realization: one for the initial state plus
    three per budget step (action choice, outcome, state change)."""
    return 1 + 3 * budget_n


def derive_cell_seed(master_seed: int, cell_index: tuple[int, ...]) -> int:
    """Stable 64-bit seed for one sweep cell, keyed by grid indices."""
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(int(i) for i in cell_index))
    return int(ss.generate_state(1, np.uint64)[0])


def random_block(cell_seed: int, n_realizations: int, budget_n: int) -> np.ndarray:
    gen = np.random.Generator(np.random.Philox(key=cell_seed))
    return gen.random((n_realizations, block_width(budget_n)))


def _replay_row(cell_seed: int, realization_id: int, budget_n: int) -> np.ndarray:
    # Philox.advance moves whole 4-draw counter blocks, so jump to the block
    # containing the row start and burn the remainder draw by draw.
    width = block_width(budget_n)
    start = realization_id * width
    bits = np.random.Philox(key=cell_seed)
    bits.advance(start // 4)
    gen = np.random.Generator(bits)
    if start % 4:
        gen.random(start % 4)
    return gen.random(width)


def _check_env(table: ValueTable, env: EnvParams) -> None:
    if env != table.env:
        raise ParamError("env: does not match the table's environment")


def _kernel_args(env: EnvParams) -> tuple:
    return (
        env.epsilon,
        env.q,
        env.h,
        env.r_plus,
        env.r_minus,
        env.tau_d,
        env.tau_s,
        env.budget_n,
        evidence_increment(env.h),
    )


def summary_block(table: ValueTable, n_realizations: int, cell_seed: int) -> np.ndarray:
    """(n, 6) per-realization summaries straight from the kernel: reward,
    commits, samples, commit bursts, sample bursts, steps consumed."""
    env = table.env
    block = random_block(cell_seed, n_realizations, env.budget_n)
    return _kernels.run_summaries(table.action, table.y_mids, block, *_kernel_args(env))


def _burst_ratios(summaries: np.ndarray) -> np.ndarray:
    n_s = summaries[:, 2]
    b_c = summaries[:, 3]
    b_s = summaries[:, 4]
    ratio = np.zeros(summaries.shape[0])
    has_s = b_s > 0
    has_c = b_c > 0
    ratio[has_s & ~has_c] = np.inf
    both = has_s & has_c
    ratio[both] = (n_s[both] / b_s[both]) / (summaries[:, 1][both] / b_c[both])
    return ratio


def run_ensemble(table: ValueTable, env: EnvParams, n_realizations: int, cell_seed: int) -> EnsembleSummary:
    _check_env(table, env)
    if n_realizations <= 0:
        raise ParamError("n_realizations: must be positive")
    summaries = summary_block(table, n_realizations, cell_seed)
    rates = summaries[:, 0] / env.budget_n
    return EnsembleSummary(
        objective=table.objective,
        env=env,
        n_realizations=n_realizations,
        cell_seed=cell_seed,
        burst_ratio_mean=float(_burst_ratios(summaries).mean()),
        reward_rates=rates,
        rate_mean=float(rates.mean()),
        rate_std=float(rates.std(ddof=0)),
        kappa=robustness(rates) if n_realizations >= 2 else float("nan"),
    )


def run_realization(
    table: ValueTable, env: EnvParams, cell_seed: int, realization_id: int = 0
) -> RealizationRecord:
    """Replay one realization with a full step log (pure-Python path).

    The realization is identified by its cell seed and row index; the random
    stream is regenerated from the Philox counter at that offset, so the log
    matches the corresponding kernel-run row bit for bit.
    """
    _check_env(table, env)
    if realization_id < 0:
        raise ParamError("realization_id: must be non-negative")
    u = _replay_row(cell_seed, realization_id, env.budget_n)
    raw_steps: list = []
    reward, n_c, n_s, b_c, b_s, _consumed = _kernels.simulate_one(
        table.action.tolist(),
        table.y_mids.tolist(),
        u.tolist(),
        *_kernel_args(env),
        record=raw_steps,
    )
    steps = []
    for k, a, y, y_after, state, outcome, dr in raw_steps:
        act = Action(a)
        outcome_str = f"{outcome:+d}" if act == Action.SAMPLE else ("reward" if outcome else "punish")
        steps.append(StepRecord(k, act, y, y_after, HiddenState(state), outcome_str, dr))
    trial_steps = n_c * env.tau_d
    return RealizationRecord(
        realization_id=realization_id,
        cell_seed=cell_seed,
        objective=table.objective,
        env=env,
        steps=tuple(steps),
        total_reward=reward,
        n_commits=n_c,
        n_samples=n_s,
        n_commit_bursts=b_c,
        n_sample_bursts=b_s,
        trial_steps=trial_steps,
        sampling_steps=env.budget_n - trial_steps,
    )


def _check_pair(rm_table: ValueTable, im_table: ValueTable, env: EnvParams, driver: str) -> None:
    if driver not in DRIVERS:
        raise ParamError(f"driver: must be one of {DRIVERS}")
    if rm_table.env != im_table.env:
        raise ParamError("tables: environments differ")
    if rm_table.dp != im_table.dp:
        raise ParamError("tables: solver grids differ")
    _check_env(rm_table, env)


def run_aligned_pair(
    rm_table: ValueTable,
    im_table: ValueTable,
    env: EnvParams,
    cell_seed: int,
    driver: str = REWARDMAX,
    realization_id: int = 0,
) -> AlignmentRecord:
    """One trajectory driven by the driver policy, logging both tables'
    actions at every visited (belief, time) pair.

    The reward-maximizing driver executes the first table's actions, the
    information-maximizing driver the second's, and the random driver picks
    uniformly among affordable actions using the step's reserved draw.
    """
    _check_pair(rm_table, im_table, env, driver)
    if realization_id < 0:
        raise ParamError("realization_id: must be non-negative")
    u = _replay_row(cell_seed, realization_id, env.budget_n)
    raw_pairs: list = []
    _kernels.align_one(
        rm_table.action.tolist(),
        im_table.action.tolist(),
        _DRIVER_CODES[driver],
        rm_table.y_mids.tolist(),
        u.tolist(),
        env.epsilon,
        env.q,
        env.h,
        env.tau_d,
        env.tau_s,
        env.budget_n,
        evidence_increment(env.h),
        record=raw_pairs,
    )
    pairs = tuple((k, y, Action(a_rm), Action(a_im)) for k, y, a_rm, a_im in raw_pairs)
    return AlignmentRecord(
        realization_id=realization_id,
        cell_seed=cell_seed,
        driver=driver,
        env=env,
        pairs=pairs,
    )


def run_alignment_ensemble(
    rm_table: ValueTable,
    im_table: ValueTable,
    env: EnvParams,
    n_realizations: int,
    cell_seed: int,
    driver: str = REWARDMAX,
) -> AlignmentSummary:
    """Kernel fast path: mean per-trajectory alignment over a whole block."""
    _check_pair(rm_table, im_table, env, driver)
    if n_realizations <= 0:
        raise ParamError("n_realizations: must be positive")
    block = random_block(cell_seed, n_realizations, env.budget_n)
    per_real = _kernels.run_alignment(
        rm_table.action,
        im_table.action,
        _DRIVER_CODES[driver],
        rm_table.y_mids,
        block,
        env.epsilon,
        env.q,
        env.h,
        env.tau_d,
        env.tau_s,
        env.budget_n,
        evidence_increment(env.h),
    )
    return AlignmentSummary(
        env=env,
        driver=driver,
        n_realizations=n_realizations,
        cell_seed=cell_seed,
        alignment_mean=float(per_real.mean()),
    )


def write_realizations_csv(records, path) -> None:
    """One CSV row per executed action; belief_llr is the belief the agent
    held when choosing the action (before its update)."""
    state_names = {HiddenState.S_PLUS: "s_plus", HiddenState.S_MINUS: "s_minus"}
    rows = []
    for rec in records:
        for step in rec.steps:
            rows.append(
                (
                    str(rec.realization_id),
                    str(step.step_index),
                    ACTION_NAMES[step.action],
                    io.fmt_float(step.belief_llr),
                    state_names[step.hidden_state],
                    step.outcome,
                    io.fmt_float(step.reward),
                )
            )
    io.write_csv(
        path,
        ("realization_id", "step_index", "action", "belief_llr", "hidden_state", "outcome", "reward"),
        rows,
    )
