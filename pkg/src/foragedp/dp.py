"""Finite-horizon policy solver over a discretized belief axis.

Backward induction fills a (time step x belief node) table of utilities and
actions for one objective:

* rewardmax — expected (discounted) total reward over the remaining budget,
  in reward units;
* infomax — expected (discounted) cumulative reduction of state entropy, in
  bits, with feedback gains measured against the uninformative-feedback
  baseline.

Time indexing: row k holds the utility and action for the k-th time step of
the budget (1-based), so a realization visits rows 1..N; row 0 is a
pre-budget planning layer filled by the same recursion. An action fits at
row k when k + tau - 1 <= N. The final fitting commitment row is forced:
when a commitment fits at row N only commitments compete there (the budget
ends in a decision, not a sample), the rewardmax utility is the immediate
expected payoff and the infomax utility is zero. Rows where no action fits
carry utility 0 (nothing further can be earned) and a belief-sign
commitment as a placeholder action; the simulator never executes them.

Ties: utilities are compared exactly; commitment beats sampling on a tie,
and a tie between the two commitment signs follows the belief (commit-plus
at a flat belief). The sign tie does real work: feedback carries the same
evidence about the state whichever way the agent commits (the decision only
relabels reward and punishment), so the two commitment signs are exactly
equally informative and an infomax agent is sign-indifferent at every
belief; a fixed sign preference would send half its commitments against
its own belief. An exact three-way tie with gamma > 0 resolves to sample
(an undiscounted agent indifferent among all actions keeps gathering
evidence rather than burning the budget on coin-flip commitments; with
gamma = 0 ties still commit, preserving the greedy all-commit policy).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import io
from .beliefs import L_MAX, Belief, evidence_increment, llr_from_likelihood
from .params import (
    INFOMAX,
    OBJECTIVES,
    REWARDMAX,
    Action,
    ConfigError,
    Decision,
    DPConfig,
    EnvParams,
    ParamError,
)

_CP = int(Action.COMMIT_PLUS)
_CM = int(Action.COMMIT_MINUS)
_S = int(Action.SAMPLE)


def entropy(p: float) -> float:
    """Binary state entropy in bits, with 0*log(0) taken as 0."""
    if not 0.0 <= p <= 1.0:
        raise ParamError("p: must be in [0, 1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -(p * math.log2(p) + (1.0 - p) * math.log2(1.0 - p))


def _entropy_vec(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p)
    interior = (p > 0.0) & (p < 1.0)
    pi = p[interior]
    out[interior] = -(pi * np.log2(pi) + (1.0 - pi) * np.log2(1.0 - pi))
    return out


def terminal_rewardmax_utility(p: float, env: EnvParams) -> float:
    """Expected payoff of the better of the two commitments, no continuation."""
    if not 0.0 <= p <= 1.0:
        raise ParamError("p: must be in [0, 1]")
    w_correct = env.q * env.r_plus + (1.0 - env.q) * env.r_minus
    w_incorrect = (1.0 - env.q) * env.r_plus + env.q * env.r_minus
    u_plus = p * w_correct + (1.0 - p) * w_incorrect
    u_minus = p * w_incorrect + (1.0 - p) * w_correct
    return max(u_plus, u_minus)


def _build_grid(grid_points: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Uniform-LLR belief grid with an exactly mirror-symmetric likelihood axis.

    The lower half is constructed as 1 - (mirrored upper half) so that
    p[i] + p[G-1-i] == 1.0 holds bitwise; several exact-tie properties of the
    recursion rely on this. Returns (y nodes, p nodes, y midpoints), where the
    midpoints are the nearest-node decision thresholds expressed in LLR.
    """
    g = grid_points
    half = g // 2
    y = np.linspace(-L_MAX, L_MAX, g)
    p = np.empty(g)
    p[half:] = 1.0 / (1.0 + np.exp(-y[half:]))
    p[:half] = 1.0 - p[g - 1 : half : -1]
    mids = 0.5 * (p[:-1] + p[1:])
    y_mids = np.log(mids / (1.0 - mids))
    return y, p, y_mids


def _feedback_llr_vec(y: np.ndarray, epsilon: float, likelihood_plus: float) -> np.ndarray:
    """Post-feedback LLR per node (feedback conditioning then state change);
    may be +/-inf at degenerate params."""
    ey = np.exp(y)
    num = (1.0 - epsilon) * likelihood_plus * ey + epsilon * (1.0 - likelihood_plus)
    den = epsilon * likelihood_plus * ey + (1.0 - epsilon) * (1.0 - likelihood_plus)
    with np.errstate(divide="ignore"):
        return np.log(num) - np.log(den)


def _likelihood_on_grid(y: np.ndarray, p_lo: float, p_hi: float) -> np.ndarray:
    p = 1.0 / (1.0 + np.exp(-y))
    return np.clip(p, p_lo, p_hi)


def _interp_coeffs(p_nodes: np.ndarray, targets: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    idx = np.searchsorted(p_nodes, targets) - 1
    idx = np.clip(idx, 0, len(p_nodes) - 2)
    w = (targets - p_nodes[idx]) / (p_nodes[idx + 1] - p_nodes[idx])
    w = np.clip(w, 0.0, 1.0)
    return idx, w


def _interp(values: np.ndarray, idx: np.ndarray, w: np.ndarray) -> np.ndarray:
    # endpoint-exact form: w = 0 returns the left node, w = 1 the right one
    return values[idx] * (1.0 - w) + values[idx + 1] * w


@dataclass(frozen=True, eq=False)
class ValueTable:
    """Solved policy: utility and action per (time-step row, belief node)."""

    objective: str
    env: EnvParams
    dp: DPConfig
    y_nodes: np.ndarray
    p_nodes: np.ndarray
    y_mids: np.ndarray
    utility: np.ndarray  # (budget_n + 1, grid_points) float64
    action: np.ndarray  # (budget_n + 1, grid_points) int8


def solve_policy(objective: str, env: EnvParams, dp: DPConfig = DPConfig()) -> ValueTable:
    """Solve one objective by backward induction; see the module docstring
    for the row semantics and tie handling."""
    if objective not in OBJECTIVES:
        raise ParamError(f"objective: must be one of {OBJECTIVES}")
    g = dp.grid_points
    n = env.budget_n
    eps, q, h, gamma = env.epsilon, env.q, env.h, env.gamma

    y, p, y_mids = _build_grid(g)
    omp = p[::-1].copy()  # exact 1 - p by grid symmetry
    p_lo, p_hi = p[0], p[-1]

    # Post-feedback likelihoods. The (decision sign, feedback) pair enters
    # the posterior only through the evidence it carries about the state:
    # feedback agreeing with the decision (reward after plus, punishment
    # after minus) is evidence for the plus state with strength q,
    # disagreeing feedback is evidence against it. The four pairs therefore
    # share two posteriors.
    f_plus = np.clip(_feedback_llr_vec(y, eps, q), -L_MAX, L_MAX)
    f_minus = np.clip(_feedback_llr_vec(y, eps, 1.0 - q), -L_MAX, L_MAX)
    post_plus = _likelihood_on_grid(f_plus, p_lo, p_hi)
    post_minus = _likelihood_on_grid(f_minus, p_lo, p_hi)

    # Post-sample likelihoods: one observation translates the LLR by +/-delta.
    delta = evidence_increment(h)
    p_up = _likelihood_on_grid(np.clip(y + delta, -L_MAX, L_MAX), p_lo, p_hi)
    p_dn = _likelihood_on_grid(np.clip(y - delta, -L_MAX, L_MAX), p_lo, p_hi)

    co_plus = _interp_coeffs(p, post_plus)
    co_minus = _interp_coeffs(p, post_minus)
    co_up = _interp_coeffs(p, p_up)
    co_dn = _interp_coeffs(p, p_dn)

    prob_up = p * h + omp * (1.0 - h)
    prob_dn = p * (1.0 - h) + omp * h
    # probability of reward feedback given commit-plus (m) / commit-minus (omm)
    m = p * q + omp * (1.0 - q)
    omm = p * (1.0 - q) + omp * q

    if objective == INFOMAX:
        ent_p = _entropy_vec(p)
        ent_base = _entropy_vec(p + eps - 2.0 * eps * p)
        ent_plus = _entropy_vec(post_plus)
        ent_minus = _entropy_vec(post_minus)
        ent_up = _entropy_vec(p_up)
        ent_dn = _entropy_vec(p_dn)

    utility = np.zeros((n + 1, g))
    action = np.empty((n + 1, g), dtype=np.int8)
    zeros = np.zeros(g)
    sign_commit = np.where(p >= 0.5, _CP, _CM).astype(np.int8)

    def commit_utilities(cont: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        # P(evidence toward plus) is m under commit-plus (via reward) and
        # 1 - omm = m under commit-minus (via punishment): the feedback's
        # evidence distribution does not depend on the decision, so the two
        # signs share one continuation expectation and differ only in which
        # payoff rides on which feedback. Keeping the shared term out of the
        # payoff sums makes the sign comparison exact — at a flat belief the
        # two sums hold identical addends and tie bitwise.
        c_common = gamma * (m * _interp(cont, *co_plus) + omm * _interp(cont, *co_minus))
        if objective == REWARDMAX:
            u_cp = (m * env.r_plus + omm * env.r_minus) + c_common
            u_cm = (omm * env.r_plus + m * env.r_minus) + c_common
            return u_cp, u_cm
        # Information carries no payoff at all, so the two commitment signs
        # are exactly equally useful; returning one shared array makes the
        # tie bitwise and leaves the sign to the tie-break rule.
        u_c = ent_base - (m * ent_plus + omm * ent_minus) + c_common
        return u_c, u_c

    def sample_utility(cont: np.ndarray) -> np.ndarray:
        c_up = _interp(cont, *co_up)
        c_dn = _interp(cont, *co_dn)
        if objective == REWARDMAX:
            return gamma * (prob_up * c_up + prob_dn * c_dn)
        return ent_p - (prob_up * ent_up + prob_dn * ent_dn) + gamma * (prob_up * c_up + prob_dn * c_dn)

    def pick_commit(u_cp: np.ndarray, u_cm: np.ndarray) -> np.ndarray:
        act = np.where(u_cp >= u_cm, _CP, _CM).astype(np.int8)
        tie = u_cp == u_cm
        act[tie] = sign_commit[tie]
        return act

    for k in range(n, -1, -1):
        fits_c = k + env.tau_d - 1 <= n
        fits_s = k + env.tau_s - 1 <= n
        cont_d = utility[k + env.tau_d] if k + env.tau_d <= n else zeros
        cont_s = utility[k + env.tau_s] if k + env.tau_s <= n else zeros

        if k == n:
            if fits_c:
                if objective == REWARDMAX:
                    u_cp, u_cm = commit_utilities(cont_d)
                    utility[k] = np.maximum(u_cp, u_cm)
                    action[k] = pick_commit(u_cp, u_cm)
                else:
                    action[k] = sign_commit  # utility stays 0: no future information counts
            elif fits_s:
                action[k] = _S  # sole affordable action; nothing left to earn
            else:
                action[k] = sign_commit
            continue

        if fits_c and fits_s:
            u_cp, u_cm = commit_utilities(cont_d)
            u_s = sample_utility(cont_s)
            u_c = np.maximum(u_cp, u_cm)
            utility[k] = np.maximum(u_c, u_s)
            act = np.where(u_c >= u_s, pick_commit(u_cp, u_cm), _S).astype(np.int8)
            if gamma > 0.0:
                tie = (u_cp == u_cm) & (u_cm == u_s)
                act[tie] = _S
            action[k] = act
        elif fits_c:
            u_cp, u_cm = commit_utilities(cont_d)
            utility[k] = np.maximum(u_cp, u_cm)
            action[k] = pick_commit(u_cp, u_cm)
        elif fits_s:
            utility[k] = sample_utility(cont_s)
            action[k] = _S
        else:
            action[k] = sign_commit  # unreachable row; utility stays 0

    return ValueTable(objective, env, dp, y, p, y_mids, utility, action)


def query(table: ValueTable, belief: Belief, k: int) -> tuple[Action, float]:
    """Action at the belief's nearest node and the p-interpolated utility."""
    if not 0 <= k <= table.env.budget_n:
        raise ParamError(f"k: out of horizon, must be in [0, {table.env.budget_n}]")
    node = int(np.searchsorted(table.y_mids, belief.llr))
    p = np.clip(belief.likelihood, table.p_nodes[0], table.p_nodes[-1])
    idx, w = _interp_coeffs(table.p_nodes, np.asarray([p]))
    value = float(_interp(table.utility[k], idx, w)[0])
    return Action(int(table.action[k, node])), value


def _scalar_interp(table: ValueTable, k: int, p: float) -> float:
    if k > table.env.budget_n:
        return 0.0
    p = min(max(p, table.p_nodes[0]), table.p_nodes[-1])
    idx, w = _interp_coeffs(table.p_nodes, np.asarray([p]))
    return float(_interp(table.utility[k], idx, w)[0])


def _posterior_pair(p: float, sign: int, epsilon: float, q: float) -> tuple[float, float]:
    """(reward, punish) post-feedback likelihoods for a signed commitment."""
    from .beliefs import _feedback_llr, clamp_llr, likelihood_from_llr

    llr = llr_from_likelihood(p)
    # probability of each feedback given s_plus: reward feedback agrees with
    # a plus commitment, punishment agrees with a minus one
    toward_plus = (q, 1.0 - q) if sign > 0 else (1.0 - q, q)
    post = []
    for likelihood_plus in toward_plus:
        post_llr, _ = clamp_llr(_feedback_llr(llr, epsilon, likelihood_plus))
        post.append(likelihood_from_llr(post_llr))
    return post[0], post[1]


def rewardmax_commit_utility(p: float, k: int, decision: Decision, table: ValueTable) -> float:
    """Expected payoff plus discounted continuation for one commitment."""
    if table.objective != REWARDMAX:
        raise ConfigError("table: rewardmax utilities need a rewardmax table")
    env = table.env
    sign = int(decision)
    post_r, post_x = _posterior_pair(p, sign, env.epsilon, env.q)
    reward_prob = p * env.q + (1.0 - p) * (1.0 - env.q) if sign > 0 else p * (1.0 - env.q) + (1.0 - p) * env.q
    cont_r = _scalar_interp(table, k + env.tau_d, post_r)
    cont_x = _scalar_interp(table, k + env.tau_d, post_x)
    return reward_prob * (env.r_plus + env.gamma * cont_r) + (1.0 - reward_prob) * (env.r_minus + env.gamma * cont_x)


def rewardmax_sample_utility(p: float, k: int, table: ValueTable) -> float:
    """Discounted expected continuation over the two post-sample beliefs."""
    if table.objective != REWARDMAX:
        raise ConfigError("table: rewardmax utilities need a rewardmax table")
    env = table.env
    from .beliefs import belief_transfer_distribution

    if env.h == 0.5:
        return env.gamma * _scalar_interp(table, k + env.tau_s, p)
    t = belief_transfer_distribution(p, env.h)
    cont = t.up_prob * _scalar_interp(table, k + env.tau_s, t.up_likelihood)
    cont += t.down_prob * _scalar_interp(table, k + env.tau_s, t.down_likelihood)
    return env.gamma * cont


def infomax_commit_utility(p: float, k: int, decision: Decision, table: ValueTable) -> float:
    """Feedback information gain over the uninformative baseline, plus
    discounted continuation."""
    if table.objective != INFOMAX:
        raise ConfigError("table: infomax utilities need an infomax table")
    env = table.env
    sign = int(decision)
    post_r, post_x = _posterior_pair(p, sign, env.epsilon, env.q)
    reward_prob = p * env.q + (1.0 - p) * (1.0 - env.q) if sign > 0 else p * (1.0 - env.q) + (1.0 - p) * env.q
    base = entropy(p + env.epsilon - 2.0 * env.epsilon * p)
    gain = base - (reward_prob * entropy(post_r) + (1.0 - reward_prob) * entropy(post_x))
    cont_r = _scalar_interp(table, k + env.tau_d, post_r)
    cont_x = _scalar_interp(table, k + env.tau_d, post_x)
    return gain + env.gamma * (reward_prob * cont_r + (1.0 - reward_prob) * cont_x)


def infomax_sample_utility(p: float, k: int, table: ValueTable) -> float:
    """Expected entropy reduction from one sample, plus discounted continuation."""
    if table.objective != INFOMAX:
        raise ConfigError("table: infomax utilities need an infomax table")
    env = table.env
    from .beliefs import belief_transfer_distribution

    if env.h == 0.5:
        return env.gamma * _scalar_interp(table, k + env.tau_s, p)
    t = belief_transfer_distribution(p, env.h)
    expected_entropy = t.up_prob * entropy(t.up_likelihood) + t.down_prob * entropy(t.down_likelihood)
    cont = t.up_prob * _scalar_interp(table, k + env.tau_s, t.up_likelihood)
    cont += t.down_prob * _scalar_interp(table, k + env.tau_s, t.down_likelihood)
    return entropy(p) - expected_entropy + env.gamma * cont


def write_table_csv(table: ValueTable, path) -> None:
    """Serialize a solved table as CSV rows of (k, p_node, utility, action)."""
    from .params import ACTION_NAMES

    rows = []
    for k in range(table.env.budget_n + 1):
        for i in range(table.dp.grid_points):
            rows.append(
                (
                    str(k),
                    io.fmt_float(table.p_nodes[i]),
                    io.fmt_float(table.utility[k, i]),
                    ACTION_NAMES[Action(int(table.action[k, i]))],
                )
            )
    io.write_csv(path, ("k", "p_node", "utility", "action"), rows)
