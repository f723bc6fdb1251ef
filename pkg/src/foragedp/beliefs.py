"""Bayesian belief updates for the two-state foraging task.

Beliefs are carried as the log-likelihood ratio (LLR) y of state s+ over
state s-; the state likelihood p = 1/(1+e^{-y}) is derived on demand so the
two representations cannot drift apart.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .params import Decision, Feedback, ParamError

# Largest clamp magnitude for which the likelihood 1/(1+e^{-y}) stays strictly
# inside (0, 1) in float64 (the sigmoid saturates to exactly 1.0 past ~36.7).
# Post-feedback beliefs saturate at ln((1-eps)/eps) + ln(q/(1-q)) whenever
# eps > 0, but eps = 0 sweeps are legal and must keep their order statistics,
# so the clamp sits at the representable limit instead of a task-derived one.
L_MAX = 36.0


def clamp_llr(llr: float) -> tuple[float, bool]:
    """Clamp an LLR into [-L_MAX, L_MAX]; the flag reports saturation."""
    if llr > L_MAX:
        return L_MAX, True
    if llr < -L_MAX:
        return -L_MAX, True
    return llr, False


def likelihood_from_llr(llr: float) -> float:
    """State likelihood p = 1/(1+e^{-y})."""
    if not math.isfinite(llr):
        raise ParamError("llr: must be finite")
    return 1.0 / (1.0 + math.exp(-llr))


def llr_from_likelihood(p: float) -> float:
    """Inverse of likelihood_from_llr; requires p strictly inside (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ParamError("likelihood: must be strictly inside (0, 1)")
    return math.log(p / (1.0 - p))


@dataclass(frozen=True)
class Belief:
    """LLR belief with a saturation marker set when an update hit the clamp."""

    llr: float
    saturated: bool = False

    def __post_init__(self) -> None:
        if not math.isfinite(self.llr):
            raise ParamError("llr: must be finite")
        if abs(self.llr) > L_MAX:
            raise ParamError(f"llr: magnitude exceeds clamp bound {L_MAX}")

    @property
    def likelihood(self) -> float:
        return likelihood_from_llr(self.llr)

    @classmethod
    def from_likelihood(cls, p: float) -> "Belief":
        return cls(llr_from_likelihood(p))


@dataclass(frozen=True)
class BeliefTransfer:
    """Two-atom distribution of the next state likelihood after one sample."""

    up_likelihood: float
    up_prob: float
    down_likelihood: float
    down_prob: float


def evidence_increment(h: float) -> float:
    """LLR shift ln(h/(1-h)) contributed by one observation of the plus side.

    0 at h = 0.5 (uninformative samples) and inf at h = 1 (a single sample
    is conclusive); callers clamp.
    """
    if not 0.5 <= h <= 1.0:
        raise ParamError("h: must be in [0.5, 1]")
    if h == 0.5:
        return 0.0
    if h == 1.0:
        return math.inf
    return math.log(h / (1.0 - h))


def llr_within_trial_update(belief: Belief, obs: int, h: float) -> Belief:
    """Accumulate one environmental observation into the LLR.

    An observation of +1 adds ln(h/(1-h)); -1 subtracts it. The result is
    clamped to [-L_MAX, L_MAX].
    """
    if obs not in (1, -1):
        raise ParamError("obs: must be +1 or -1")
    llr, saturated = clamp_llr(belief.llr + obs * evidence_increment(h))
    return Belief(llr, saturated)


def _feedback_llr(llr: float, epsilon: float, likelihood_plus: float) -> float:
    """Across-trial LLR after conditioning on feedback, then a state change.

    ``likelihood_plus`` is the probability of the observed feedback given the
    plus state (its probability given the minus state is the complement), so
    the conditioning step shifts the LLR by log(likelihood_plus /
    (1 - likelihood_plus)) and the state-change step contracts it toward
    zero. Degenerate parameters drive the ratio to 0 or infinity; callers
    clamp.
    """
    ey = math.exp(llr)
    num = (1.0 - epsilon) * likelihood_plus * ey + epsilon * (1.0 - likelihood_plus)
    den = epsilon * likelihood_plus * ey + (1.0 - epsilon) * (1.0 - likelihood_plus)
    if num == 0.0:
        return -math.inf
    if den == 0.0:
        return math.inf
    return math.log(num) - math.log(den)


def prior_across_trial_update(
    belief: Belief, decision: Decision, feedback: Feedback, epsilon: float, q: float
) -> Belief:
    """Propagate the belief across a commitment: feedback, then state change.

    The (decision, feedback) pair matters only through the evidence it
    carries about the state: feedback that agrees with the decision's sign
    (reward after plus, punishment after minus) is evidence for the plus
    state with strength q, and disagreeing feedback is evidence against it.
    This is exact Bayesian conditioning for either decision at any belief.
    The result is clamped to [-L_MAX, L_MAX] with the saturation flag set
    when the clamp binds (reachable only for epsilon = 0 or q = 1).
    """
    agrees = (feedback == Feedback.REWARD) == (int(decision) > 0)
    likelihood_plus = q if agrees else 1.0 - q
    llr, saturated = clamp_llr(_feedback_llr(belief.llr, epsilon, likelihood_plus))
    return Belief(llr, saturated)


def belief_transfer_distribution(p: float, h: float) -> BeliefTransfer:
    """Conditional two-atom distribution of the likelihood after one sample.

    With probability p*h + (1-p)*(1-h) the sample points up and the
    likelihood moves to h*p / (h*p + (1-h)*(1-p)); otherwise it moves down
    to the mirrored value.
    """
    if not 0.0 < p < 1.0:
        raise ParamError("p: degenerate belief; must be strictly inside (0, 1)")
    if not 0.5 <= h < 1.0:
        raise ParamError("h: must be in [0.5, 1)")
    up_p = h * p / (h * p + (1.0 - h) * (1.0 - p))
    down_p = (1.0 - h) * p / ((1.0 - h) * p + h * (1.0 - p))
    up_prob = p * h + (1.0 - p) * (1.0 - h)
    down_prob = p * (1.0 - h) + (1.0 - p) * h
    return BeliefTransfer(up_p, up_prob, down_p, down_prob)
