"""Closed-form comparison of the two evidence sources.

One feedback event, viewed from a flat prior, moves the belief about the
*next* trial's state like a single sample with accuracy
q(1-epsilon) + (1-q)epsilon: the feedback reliability diluted by the chance
the state changes before the knowledge can be used. Equating that effective
accuracy with the sample accuracy h yields the miss-rate boundary
epsilon*(q) = (q - h)/(2q - 1), above which sampling is the better source.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .beliefs import evidence_increment
from .params import ParamError


@dataclass(frozen=True)
class BoundaryCurve:
    """Sampling-vs-feedback indifference points, sorted by q."""

    h: float
    q_values: tuple[float, ...]
    epsilon_values: tuple[float, ...]


def sampling_llr_gain(h: float) -> float:
    """Belief movement (LLR magnitude) delivered by one sample."""
    return evidence_increment(h)


def expected_feedback_llr_gain(epsilon: float, q: float) -> float:
    """Belief movement about the next trial's state delivered by one
    feedback event, from a flat prior."""
    if not 0.0 <= epsilon <= 0.5:
        raise ParamError("epsilon: must be in [0, 0.5]")
    if not 0.5 <= q <= 1.0:
        raise ParamError("q: must be in [0.5, 1]")
    reliability = q * (1.0 - epsilon) + (1.0 - q) * epsilon
    if reliability == 0.5:
        return 0.0
    if reliability == 1.0:
        return math.inf
    return math.log(reliability / (1.0 - reliability))


def phase_boundary(h: float, q: float) -> float:
    """Miss rate at which feedback and sampling deliver equal belief movement.

    Negative values mean sampling wins for every valid miss rate.
    """
    if not 0.5 < h <= 1.0:
        raise ParamError("h: boundary is degenerate unless 0.5 < h <= 1")
    if not 0.5 < q <= 1.0:
        raise ParamError("q: boundary requires q strictly above 0.5")
    return (q - h) / (2.0 * q - 1.0)


def boundary_curve(h: float, q_values) -> BoundaryCurve:
    """Boundary points restricted to the representable miss-rate range
    [0, 0.5]; q values at or below 0.5, and those whose boundary falls
    outside the range, are dropped."""
    qs: list[float] = []
    es: list[float] = []
    for q in sorted(float(q) for q in q_values):
        if q <= 0.5:
            continue
        eps = phase_boundary(h, q)
        if 0.0 <= eps <= 0.5:
            qs.append(q)
            es.append(eps)
    return BoundaryCurve(h, tuple(qs), tuple(es))
