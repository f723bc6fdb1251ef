"""Burst decomposition, robustness, alignment, and paired differentials."""
import math
from types import SimpleNamespace

import numpy as np
import pytest

from foragedp import EnvParams
from foragedp.metrics import (
    BurstStats,
    EnsembleSummary,
    action_alignment,
    differentials,
    empirical_reward_rate,
    extract_bursts,
    robustness,
)
from foragedp.params import Action, ConfigError, ParamError

C, M, S = Action.COMMIT_PLUS, Action.COMMIT_MINUS, Action.SAMPLE


class TestBursts:
    def test_commits_of_both_signs_form_one_burst(self):
        b = extract_bursts([C, M, C])
        assert b.commit_bursts == (3,)
        assert b.sample_bursts == ()

    def test_alternating_runs(self):
        b = extract_bursts([S, C, S, S, M, C])
        assert b.sample_bursts == (1, 2)
        assert b.commit_bursts == (1, 2)
        assert b.mean_sample == 1.5
        assert b.mean_commit == 1.5
        assert b.ratio == 1.0

    def test_ratio_frozen_example(self):
        b = extract_bursts([S, S, S, C, S, C])
        assert b == BurstStats(commit_bursts=(1, 1), sample_bursts=(3, 1))
        assert b.ratio == 2.0

    def test_pure_exploitation_has_zero_ratio(self):
        assert extract_bursts([C, C, M]).ratio == 0.0

    def test_pure_sampling_has_infinite_ratio(self):
        assert extract_bursts([S, S]).ratio == math.inf

    def test_integer_codes_accepted(self):
        assert extract_bursts([2, 2, 0, 1]).ratio == 1.0

    def test_empty_sequence_rejected(self):
        with pytest.raises(ParamError):
            extract_bursts([])

    def test_unknown_code_rejected(self):
        with pytest.raises(ParamError):
            extract_bursts([0, 7])


class TestRobustness:
    def test_frozen_value(self):
        assert robustness([1.0, 2.0, 3.0]) == 2.449489742783178

    def test_zero_spread_is_nan(self):
        assert math.isnan(robustness([4.0, 4.0, 4.0]))

    def test_needs_two_values(self):
        with pytest.raises(ParamError):
            robustness([1.0])

    def test_scale_invariance(self):
        a = robustness([1.0, 2.0, 5.0])
        b = robustness([10.0, 20.0, 50.0])
        assert a == pytest.approx(b, rel=1e-12)


class TestAlignment:
    def _rec(self, pairs):
        return SimpleNamespace(pairs=tuple(pairs))

    def test_counts_exact_matches_only(self):
        rec = self._rec([(1, 0.0, C, C), (2, 0.1, C, M), (3, 0.2, S, S), (4, 0.3, S, C)])
        assert action_alignment(rec) == 0.5

    def test_sign_disagreement_is_a_mismatch(self):
        rec = self._rec([(1, 0.0, C, M)])
        assert action_alignment(rec) == 0.0

    def test_empty_record_rejected(self):
        with pytest.raises(ParamError):
            action_alignment(self._rec([]))


class TestDifferentials:
    ENV = EnvParams(epsilon=0.2, q=0.8)

    def _summary(self, rate_mean, kappa, env=None):
        return EnsembleSummary(
            objective="rewardmax",
            env=env or self.ENV,
            n_realizations=10,
            cell_seed=0,
            burst_ratio_mean=0.0,
            reward_rates=np.zeros(10),
            rate_mean=rate_mean,
            rate_std=0.0,
            kappa=kappa,
        )

    def test_rate_difference_normalized_by_reward(self):
        d_rho, d_kappa = differentials(self._summary(6.0, 3.0), self._summary(4.0, 1.0))
        assert d_rho == pytest.approx(0.02, abs=1e-15)
        assert d_kappa == 2.0

    def test_nan_robustness_propagates(self):
        d_rho, d_kappa = differentials(self._summary(6.0, math.nan), self._summary(4.0, 1.0))
        assert math.isnan(d_kappa)
        assert d_rho == pytest.approx(0.02, abs=1e-15)

    def test_environment_mismatch_rejected(self):
        other = EnvParams(epsilon=0.3, q=0.8)
        with pytest.raises(ConfigError):
            differentials(self._summary(1.0, 1.0), self._summary(1.0, 1.0, env=other))

    def test_reward_rate_uses_full_budget(self):
        rec = SimpleNamespace(total_reward=300.0, env=EnvParams(epsilon=0.2, q=0.8, budget_n=10))
        assert empirical_reward_rate(rec) == 30.0
