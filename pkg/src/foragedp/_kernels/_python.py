"""Pure-Python simulation kernel.

Reference implementation of the per-realization inner loops. The compiled
kernel in ``_simcore`` mirrors these loops operation-for-operation (both use
libm exp/log), so the two produce bit-identical outputs; tests enforce that.

Random-draw layout, shared by every execution path so that any realization
can be replayed from its counter offset alone:

* ``u[0]`` — initial hidden state (< 0.5 means the plus state);
* step k (1-based) owns the slot triple starting at ``1 + 3*(k-1)``:
  slot 0 drives the random driver's action choice (policy drivers skip it),
  slot 1 is the observation draw (sample) or feedback draw (commitment),
  slot 2 is the state-change draw (commitments only).

A block row therefore has width ``1 + 3*budget_n`` regardless of which
actions get taken.
"""
from __future__ import annotations

from bisect import bisect_left
from math import exp, inf, log

import numpy as np

KERNEL_NAME = "python"

_CP = 0  # commit plus
_CM = 1  # commit minus
_S = 2  # sample

_L_MAX = 36.0


def _clamp(y: float) -> float:
    if y > _L_MAX:
        return _L_MAX
    if y < -_L_MAX:
        return -_L_MAX
    return y


def _feedback_llr(y: float, epsilon: float, likelihood_plus: float) -> float:
    # condition on feedback with P(feedback | s_plus) = likelihood_plus,
    # then marginalize over the possible state change
    ey = exp(y)
    num = (1.0 - epsilon) * likelihood_plus * ey + epsilon * (1.0 - likelihood_plus)
    den = epsilon * likelihood_plus * ey + (1.0 - epsilon) * (1.0 - likelihood_plus)
    if num == 0.0:
        return -inf
    if den == 0.0:
        return inf
    return log(num) - log(den)


def _simulate_one(
    acts,
    mids,
    u,
    epsilon,
    q,
    h,
    r_plus,
    r_minus,
    tau_d,
    tau_s,
    n,
    delta,
    record=None,
):
    """Run one realization; returns the six summary numbers.

    ``record``, when a list, receives one tuple per executed action:
    (step row, action code, belief LLR before, belief LLR after, hidden
    state when acting, outcome code, reward delta). Outcome is the feedback
    (1 reward / 0 punish) for commitments and the signed observation for
    samples.
    """
    omq = 1.0 - q
    state = 1 if u[0] < 0.5 else -1
    y = 0.0
    reward = 0.0
    n_commits = 0
    n_samples = 0
    n_commit_bursts = 0
    n_sample_bursts = 0
    prev_kind = 0
    c = 0
    while True:
        k = c + 1
        if k > n:
            break
        fits_c = k + tau_d - 1 <= n
        fits_s = k + tau_s - 1 <= n
        if not (fits_c or fits_s):
            break
        base = 1 + 3 * (k - 1)
        node = bisect_left(mids, y)
        a = acts[k][node]
        if a == _S:
            v = u[base + 1]
            obs = 1 if v < h else -1
            if state < 0:
                obs = -obs
            y_new = _clamp(y + obs * delta)
            if record is not None:
                record.append((k, a, y, y_new, state, obs, 0.0))
            y = y_new
            n_samples += 1
            if prev_kind != 2:
                n_sample_bursts += 1
                prev_kind = 2
            c += tau_s
        else:
            sign = 1 if a == _CP else -1
            correct = sign == state
            p_reward = q if correct else omq
            rewarded = u[base + 1] < p_reward
            dr = r_plus if rewarded else r_minus
            reward += dr
            # feedback agreeing with the decision is evidence for its sign
            likelihood_plus = q if rewarded == (sign > 0) else omq
            y_new = _clamp(_feedback_llr(y, epsilon, likelihood_plus))
            if record is not None:
                record.append((k, a, y, y_new, state, 1 if rewarded else 0, dr))
            y = y_new
            if u[base + 2] < epsilon:
                state = -state
            n_commits += 1
            if prev_kind != 1:
                n_commit_bursts += 1
                prev_kind = 1
            c += tau_d
    return reward, n_commits, n_samples, n_commit_bursts, n_sample_bursts, c


def _align_one(rm_acts, im_acts, driver, mids, u, epsilon, q, h, tau_d, tau_s, n, delta, record=None):
    """One driven realization; returns (matching steps, executed steps).

    ``record``, when a list, receives (step row, belief LLR, first policy's
    action, second policy's action) per executed step.
    """
    omq = 1.0 - q
    state = 1 if u[0] < 0.5 else -1
    y = 0.0
    matches = 0
    steps = 0
    c = 0
    while True:
        k = c + 1
        if k > n:
            break
        fits_c = k + tau_d - 1 <= n
        fits_s = k + tau_s - 1 <= n
        if not (fits_c or fits_s):
            break
        base = 1 + 3 * (k - 1)
        node = bisect_left(mids, y)
        rm_a = rm_acts[k][node]
        im_a = im_acts[k][node]
        if record is not None:
            record.append((k, y, rm_a, im_a))
        if rm_a == im_a:
            matches += 1
        steps += 1
        if driver == 0:
            a = rm_a
        elif driver == 1:
            a = im_a
        else:
            v = u[base]
            if fits_c and fits_s:
                a = _CP if v < 1.0 / 3.0 else (_CM if v < 2.0 / 3.0 else _S)
            elif fits_c:
                a = _CP if v < 0.5 else _CM
            else:
                a = _S
        if a == _S:
            v = u[base + 1]
            obs = 1 if v < h else -1
            if state < 0:
                obs = -obs
            y = _clamp(y + obs * delta)
            c += tau_s
        else:
            sign = 1 if a == _CP else -1
            correct = sign == state
            p_reward = q if correct else omq
            rewarded = u[base + 1] < p_reward
            likelihood_plus = q if rewarded == (sign > 0) else omq
            y = _clamp(_feedback_llr(y, epsilon, likelihood_plus))
            if u[base + 2] < epsilon:
                state = -state
            c += tau_d
    return matches, steps


def run_summaries(actions, y_mids, block, epsilon, q, h, r_plus, r_minus, tau_d, tau_s, budget_n, delta):
    """Summary statistics for every block row; (n, 6) float64 array with
    columns (reward, commits, samples, commit bursts, sample bursts,
    steps consumed)."""
    acts = actions.tolist()
    mids = y_mids.tolist()
    out = np.empty((block.shape[0], 6))
    for i in range(block.shape[0]):
        out[i] = _simulate_one(
            acts, mids, block[i].tolist(), epsilon, q, h, r_plus, r_minus, tau_d, tau_s, budget_n, delta
        )
    return out


def run_alignment(rm_actions, im_actions, driver, y_mids, block, epsilon, q, h, tau_d, tau_s, budget_n, delta):
    """Per-row fraction of executed steps where the two policies agree; NaN
    for a row that never gets to act."""
    rm = rm_actions.tolist()
    im = im_actions.tolist()
    mids = y_mids.tolist()
    out = np.empty(block.shape[0])
    for i in range(block.shape[0]):
        matches, steps = _align_one(
            rm, im, driver, mids, block[i].tolist(), epsilon, q, h, tau_d, tau_s, budget_n, delta
        )
        out[i] = matches / steps if steps else float("nan")
    return out
