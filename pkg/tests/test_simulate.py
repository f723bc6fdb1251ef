"""Monte Carlo machinery: random-block layout, replay, and the simulators."""
import math

import numpy as np
import pytest

from foragedp import (
    DPConfig,
    EnvParams,
    INFOMAX,
    REWARDMAX,
    run_aligned_pair,
    run_alignment_ensemble,
    run_ensemble,
    run_realization,
    solve_policy,
)
from foragedp.params import Action, Decision, Feedback, HiddenState, ParamError
from foragedp.simulate import (
    advance_state,
    block_width,
    derive_cell_seed,
    draw_feedback,
    draw_observation,
    random_block,
    _replay_row,
)

ENV = EnvParams(epsilon=0.2, q=0.8, budget_n=10)
DP = DPConfig(grid_points=401)


@pytest.fixture(scope="module")
def rm_table():
    return solve_policy(REWARDMAX, ENV, DP)


@pytest.fixture(scope="module")
def im_table():
    return solve_policy(INFOMAX, ENV, DP)


class TestRandomBlocks:
    def test_block_width_counts_three_draws_per_step(self):
        assert block_width(10) == 31
        assert block_width(1) == 4

    def test_cell_seed_is_stable_and_index_sensitive(self):
        a = derive_cell_seed(20260825, (3, 4, 0))
        assert a == derive_cell_seed(20260825, (3, 4, 0))
        assert a != derive_cell_seed(20260825, (4, 3, 0))
        assert a != derive_cell_seed(20260824, (3, 4, 0))
        assert 0 <= a < 2**64

    def test_replay_row_matches_block_row(self):
        block = random_block(987654321, 50, 10)
        for i in (0, 1, 17, 49):
            assert np.array_equal(_replay_row(987654321, i, 10), block[i])

    def test_blocks_are_deterministic(self):
        assert np.array_equal(random_block(42, 20, 5), random_block(42, 20, 5))


class TestPrimitiveDraws:
    """Each draw consumes one uniform; frequencies must match the stated
    probabilities within 3 sigma over 40k draws."""

    N = 40_000

    def _uniforms(self):
        return np.random.Generator(np.random.Philox(key=77)).random(self.N)

    def _check(self, hits, p):
        sigma = math.sqrt(p * (1.0 - p) / self.N)
        assert abs(hits / self.N - p) < 3.0 * sigma

    def test_feedback_rate_when_decision_matches_state(self):
        rng = iter(self._uniforms())

        class OneShot:
            def random(self):
                return float(next(rng))

        gen = OneShot()
        hits = sum(
            draw_feedback(Decision.S_PLUS, HiddenState.S_PLUS, 0.8, gen) == Feedback.REWARD
            for _ in range(self.N)
        )
        self._check(hits, 0.8)

    def test_feedback_rate_when_decision_misses_state(self):
        rng = iter(self._uniforms())

        class OneShot:
            def random(self):
                return float(next(rng))

        hits = sum(
            draw_feedback(Decision.S_MINUS, HiddenState.S_PLUS, 0.8, OneShot()) == Feedback.REWARD
            for _ in range(self.N)
        )
        self._check(hits, 0.2)

    def test_state_change_rate(self):
        rng = iter(self._uniforms())

        class OneShot:
            def random(self):
                return float(next(rng))

        flips = sum(
            advance_state(HiddenState.S_PLUS, 0.2, OneShot()) == HiddenState.S_MINUS
            for _ in range(self.N)
        )
        self._check(flips, 0.2)

    def test_observation_rate_tracks_state_sign(self):
        rng = iter(self._uniforms())

        class OneShot:
            def random(self):
                return float(next(rng))

        ups = sum(draw_observation(HiddenState.S_MINUS, 0.75, OneShot()) == -1 for _ in range(self.N))
        self._check(ups, 0.75)


class TestEnsembles:
    def test_summary_is_deterministic(self, rm_table):
        a = run_ensemble(rm_table, ENV, 200, 555)
        b = run_ensemble(rm_table, ENV, 200, 555)
        assert np.array_equal(a.reward_rates, b.reward_rates)
        assert (a.rate_mean, a.rate_std, a.kappa, a.burst_ratio_mean) == (
            b.rate_mean,
            b.rate_std,
            b.kappa,
            b.burst_ratio_mean,
        )

    def test_different_seeds_differ(self, rm_table):
        a = run_ensemble(rm_table, ENV, 200, 555)
        b = run_ensemble(rm_table, ENV, 200, 556)
        assert not np.array_equal(a.reward_rates, b.reward_rates)

    def test_env_mismatch_rejected(self, rm_table):
        other = EnvParams(epsilon=0.3, q=0.8, budget_n=10)
        with pytest.raises(ParamError):
            run_ensemble(rm_table, other, 10, 1)

    def test_realization_count_validated(self, rm_table):
        with pytest.raises(ParamError):
            run_ensemble(rm_table, ENV, 0, 1)

    def test_worthless_feedback_fixes_burst_ratio(self):
        # q = 0.5: the reward policy samples 9 times then commits once, every
        # realization, so the ratio of mean burst lengths is exactly 9
        env = EnvParams(epsilon=0.2, q=0.5, budget_n=10)
        t = solve_policy(REWARDMAX, env, DP)
        s = run_ensemble(t, env, 300, 12345)
        assert s.burst_ratio_mean == 9.0

    def test_perfect_feedback_is_pure_exploitation(self):
        # epsilon = 0, q = 1: one decision is conclusively resolved, so
        # neither objective ever samples
        env = EnvParams(epsilon=0.0, q=1.0, budget_n=10)
        for objective in (REWARDMAX, INFOMAX):
            t = solve_policy(objective, env, DP)
            s = run_ensemble(t, env, 300, 999)
            assert s.burst_ratio_mean == 0.0


class TestReplay:
    def test_record_totals_match_kernel_row(self, rm_table):
        from foragedp.simulate import summary_block

        block_stats = summary_block(rm_table, 40, 31337)
        for i in (0, 3, 39):
            rec = run_realization(rm_table, ENV, 31337, i)
            assert rec.total_reward == block_stats[i, 0]
            assert (rec.n_commits, rec.n_samples) == (block_stats[i, 1], block_stats[i, 2])
            assert (rec.n_commit_bursts, rec.n_sample_bursts) == (
                block_stats[i, 3],
                block_stats[i, 4],
            )

    def test_budget_accounting(self, rm_table):
        rec = run_realization(rm_table, ENV, 31337, 5)
        assert rec.trial_steps + rec.sampling_steps == ENV.budget_n
        assert rec.trial_steps == rec.n_commits * ENV.tau_d
        consumed = rec.n_commits * ENV.tau_d + rec.n_samples * ENV.tau_s
        assert consumed <= ENV.budget_n

    def test_step_log_content(self, rm_table):
        rec = run_realization(rm_table, ENV, 31337, 2)
        assert rec.steps[0].belief_llr == 0.0
        for step in rec.steps:
            if step.action == Action.SAMPLE:
                assert step.outcome in ("+1", "-1")
                assert step.reward == 0.0
            else:
                assert step.outcome in ("reward", "punish")
                assert step.reward == (ENV.r_plus if step.outcome == "reward" else ENV.r_minus)
        assert rec.total_reward == sum(s.reward for s in rec.steps)

    def test_negative_realization_id_rejected(self, rm_table):
        with pytest.raises(ParamError):
            run_realization(rm_table, ENV, 1, -1)


class TestAlignment:
    def test_pair_starts_flat_and_runs_full_budget(self, rm_table, im_table):
        rec = run_aligned_pair(rm_table, im_table, ENV, 2024, REWARDMAX)
        assert rec.pairs[0][1] == 0.0
        assert 1 <= len(rec.pairs) <= ENV.budget_n
        for k, y, a_rm, a_im in rec.pairs:
            assert isinstance(a_rm, Action) and isinstance(a_im, Action)
            assert 1 <= k <= ENV.budget_n

    def test_self_alignment_is_perfect(self, rm_table):
        s = run_alignment_ensemble(rm_table, rm_table, ENV, 200, 77, REWARDMAX)
        assert s.alignment_mean == 1.0

    def test_alignment_is_deterministic(self, rm_table, im_table):
        a = run_alignment_ensemble(rm_table, im_table, ENV, 200, 77, REWARDMAX)
        b = run_alignment_ensemble(rm_table, im_table, ENV, 200, 77, REWARDMAX)
        assert a.alignment_mean == b.alignment_mean
        assert 0.0 <= a.alignment_mean <= 1.0

    @pytest.mark.parametrize("driver", [REWARDMAX, INFOMAX, "random"])
    def test_drivers_accepted(self, rm_table, im_table, driver):
        s = run_alignment_ensemble(rm_table, im_table, ENV, 50, 5, driver)
        assert 0.0 <= s.alignment_mean <= 1.0

    def test_unknown_driver_rejected(self, rm_table, im_table):
        with pytest.raises(ParamError):
            run_aligned_pair(rm_table, im_table, ENV, 1, "oracle")

    def test_mismatched_tables_rejected(self, rm_table):
        env2 = EnvParams(epsilon=0.3, q=0.8, budget_n=10)
        im2 = solve_policy(INFOMAX, env2, DP)
        with pytest.raises(ParamError):
            run_aligned_pair(rm_table, im2, ENV, 1, REWARDMAX)

    def test_matched_seeds_share_randomness(self, rm_table, im_table):
        """The paired-differential design: the same cell seed drives both
        objectives, so two identical policies produce identical ensembles."""
        a = run_ensemble(rm_table, ENV, 100, 4242)
        b = run_ensemble(rm_table, ENV, 100, 4242)
        assert np.array_equal(a.reward_rates, b.reward_rates)
