"""Optimal sequential foraging between information gathering and commitment.

A finite-budget agent in a two-state world repeatedly chooses between
sampling noisy observations and committing to a decision that yields
probabilistic feedback. This package solves the exact finite-horizon policy
for reward-maximizing and information-maximizing objectives, simulates
ensembles of realizations under those policies, and computes the behavioral
and performance statistics that separate the two strategies.
"""
from ._kernels import KERNEL_NAME
from .analytics import BoundaryCurve, boundary_curve, phase_boundary
from .beliefs import Belief, BeliefTransfer, L_MAX
from .dp import ValueTable, query, solve_policy
from .metrics import BurstStats, EnsembleSummary
from .params import (
    Action,
    ConfigError,
    Decision,
    DPConfig,
    EnvParams,
    Feedback,
    HiddenState,
    INFOMAX,
    ParamError,
    REWARDMAX,
    SweepConfig,
)
from .simulate import (
    AlignmentRecord,
    AlignmentSummary,
    RealizationRecord,
    run_aligned_pair,
    run_alignment_ensemble,
    run_ensemble,
    run_realization,
)

__version__ = "0.1.0"

__all__ = [
    "Action",
    "AlignmentRecord",
    "AlignmentSummary",
    "Belief",
    "BeliefTransfer",
    "BoundaryCurve",
    "BurstStats",
    "ConfigError",
    "DPConfig",
    "Decision",
    "EnsembleSummary",
    "EnvParams",
    "Feedback",
    "HiddenState",
    "INFOMAX",
    "KERNEL_NAME",
    "L_MAX",
    "ParamError",
    "REWARDMAX",
    "RealizationRecord",
    "SweepConfig",
    "ValueTable",
    "boundary_curve",
    "phase_boundary",
    "query",
    "run_aligned_pair",
    "run_alignment_ensemble",
    "run_ensemble",
    "run_realization",
    "solve_policy",
]
