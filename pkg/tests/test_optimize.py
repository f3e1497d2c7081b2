"""Optimizer and the independent brute-force oracles."""

import math

import numpy as np
import pytest

from guesschain import (
    DiscriminationInstance,
    OptimizerConfig,
    Strategy,
    boundary_solution,
    distinguishability,
    equal_prior_jbg,
    find_sb,
    grid_search_oracle,
    individual_greedy,
    optimize_full_chain,
    optimize_reduced,
)


class TestOptimizeReduced:
    def test_symmetric_regime_matches_closed_form(self):
        inst = DiscriminationInstance(0.5, 0.5, n_receivers=2)
        result = optimize_reduced(inst)
        assert result.joint_success == pytest.approx(0.7285533905932737, abs=1e-12)
        np.testing.assert_allclose(
            result.stages[0], (0.8535533905932737, 0.8535533905932737), atol=1e-9
        )
        assert result.strategy is Strategy.JBG_OPTIMAL

    def test_certain_prior_is_free(self):
        inst = DiscriminationInstance(0.7, 1.0, n_receivers=3)
        result = optimize_reduced(inst)
        assert result.stages[0].p1 == pytest.approx(1.0, abs=1e-12)
        assert result.stages[0].p2 == pytest.approx(
            1.0 - 0.7 ** (2.0 / 3.0), abs=1e-9
        )
        assert result.joint_success == pytest.approx(1.0, abs=1e-12)

    def test_asymmetric_regime_beats_symmetric_formula(self):
        inst = DiscriminationInstance(0.9, 0.5, n_receivers=2)
        result = optimize_reduced(inst)
        symmetric = equal_prior_jbg(0.9, 2)
        assert result.joint_success > symmetric.joint_success + 1e-3
        # independent confirmation by plain exhaustive scan
        oracle = grid_search_oracle(inst, 2_000_001)
        assert result.joint_success == pytest.approx(oracle.joint_success, abs=1e-9)
        assert result.joint_success >= oracle.joint_success - 1e-12

    def test_stage_pair_is_feasible(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            inst = DiscriminationInstance(
                float(rng.uniform(0.0, 1.0)),
                float(rng.uniform(0.0, 1.0)),
                n_receivers=int(rng.integers(1, 6)),
            )
            stage = optimize_reduced(inst).stages[0]
            assert distinguishability(*stage) == pytest.approx(
                inst.effective_overlap, abs=1e-9
            )

    def test_prior_swap_mirrors_exactly(self):
        a = optimize_reduced(DiscriminationInstance(0.6, 0.3, n_receivers=3))
        b = optimize_reduced(DiscriminationInstance(0.6, 0.7, n_receivers=3))
        assert a.joint_success == b.joint_success
        assert a.stages[0].p1 == b.stages[0].p2
        assert a.stages[0].p2 == b.stages[0].p1

    def test_dominates_alternative_strategies(self):
        rng = np.random.default_rng(17)
        for _ in range(150):
            inst = DiscriminationInstance(
                float(rng.uniform(0.0, 1.0)),
                float(rng.uniform(0.0, 1.0)),
                n_receivers=int(rng.integers(1, 5)),
            )
            optimal = optimize_reduced(inst).joint_success
            assert optimal >= individual_greedy(inst).joint_success - 1e-12
            assert optimal >= boundary_solution(inst).joint_success - 1e-12

    def test_monotone_in_overlap(self):
        for eta1, n in ((0.5, 2), (0.3, 3)):
            joints = [
                optimize_reduced(
                    DiscriminationInstance(float(s), eta1, n_receivers=n)
                ).joint_success
                for s in np.linspace(0.0, 1.0, 100)
            ]
            assert all(a >= b - 1e-12 for a, b in zip(joints, joints[1:]))

    def test_monotone_in_chain_length(self):
        for s, eta1 in ((0.3, 0.5), (0.7, 0.2), (0.5, 0.8)):
            joints = [
                optimize_reduced(
                    DiscriminationInstance(s, eta1, n_receivers=n)
                ).joint_success
                for n in range(1, 6)
            ]
            assert all(a >= b - 1e-12 for a, b in zip(joints, joints[1:]))

    def test_prior_washout_limit(self):
        for s in (0.3, 0.5):
            last_p1 = None
            for eta1 in (1e-2, 1e-3, 1e-4):
                inst = DiscriminationInstance(s, eta1, n_receivers=2)
                stage = optimize_reduced(inst).stages[0]
                drift = abs(stage.p1 - (1.0 - s))
                if last_p1 is not None:
                    assert drift <= last_p1 + 1e-12
                last_p1 = drift
                assert eta1 * stage.p1 <= eta1
            assert stage.p2 >= 1.0 - 1e-3
            assert drift <= 1e-2

    def test_identical_states_single_receiver(self):
        result = optimize_reduced(DiscriminationInstance(1.0, 0.5, n_receivers=1))
        assert result.joint_success == pytest.approx(0.5, abs=1e-12)
        # tie resolves to the symmetric guessing point
        assert result.stages[0] == pytest.approx((0.5, 0.5), abs=1e-9)


class TestGridSearchOracle:
    def test_agrees_with_closed_form(self):
        oracle = grid_search_oracle(DiscriminationInstance(0.25, 0.5, n_receivers=2), 10**6)
        assert oracle.joint_success == pytest.approx(0.8705127018922193, abs=1e-10)

    def test_orthogonal_states(self):
        oracle = grid_search_oracle(DiscriminationInstance(0.0, 0.2, n_receivers=3), 101)
        assert oracle.joint_success == 1.0

    def test_identical_states_single_receiver(self):
        oracle = grid_search_oracle(DiscriminationInstance(1.0, 0.5, n_receivers=1), 1001)
        assert oracle.joint_success == pytest.approx(0.5, abs=1e-12)

    def test_quadratic_convergence(self):
        inst = DiscriminationInstance(0.4, 0.3, n_receivers=2)
        exact = optimize_reduced(inst).joint_success
        err = [exact - grid_search_oracle(inst, r).joint_success for r in (100, 1000)]
        assert err[1] <= err[0] / 50.0 + 1e-14

    def test_rejects_tiny_resolution(self):
        with pytest.raises(ValueError):
            grid_search_oracle(DiscriminationInstance(0.5, 0.5), 9)


class TestFullChainOracle:
    def test_two_receivers_equal_priors(self):
        """Best unreduced chain lands on t2 = sqrt(s) with equal stages."""
        inst = DiscriminationInstance(0.5, 0.5, n_receivers=2)
        found = optimize_full_chain(inst, 400)
        step = (1.0 - 0.5) / 399
        assert abs(found.intermediate_overlaps[0] - math.sqrt(0.5)) <= 2 * step
        theta_step = math.pi / 2 / 399
        for i in (0, 1):
            assert abs(found.stages[0][i] - found.stages[1][i]) <= theta_step

    def test_two_receivers_unequal_priors(self):
        inst = DiscriminationInstance(0.4, 0.3, n_receivers=2)
        found = optimize_full_chain(inst, 400)
        reduced = optimize_reduced(inst)
        assert found.joint_success == pytest.approx(reduced.joint_success, abs=1e-3)
        assert found.joint_success <= reduced.joint_success + 1e-9

    def test_orthogonal_states(self):
        found = optimize_full_chain(DiscriminationInstance(0.0, 0.5, n_receivers=2), 50)
        assert found.joint_success == pytest.approx(1.0, abs=1e-12)

    def test_chained_constraints_hold_at_winner(self):
        inst = DiscriminationInstance(0.5, 0.35, n_receivers=2)
        found = optimize_full_chain(inst, 200)
        t2 = found.intermediate_overlaps[0]
        assert distinguishability(*found.stages[0]) * t2 == pytest.approx(
            inst.overlap, abs=1e-6
        )
        assert distinguishability(*found.stages[1]) == pytest.approx(t2, abs=1e-9)

    def test_three_receivers(self):
        inst = DiscriminationInstance(0.4, 0.5, n_receivers=3)
        found = optimize_full_chain(inst, 30)
        reduced = optimize_reduced(inst)
        assert found.joint_success == pytest.approx(reduced.joint_success, abs=5e-3)
        assert found.joint_success <= reduced.joint_success + 1e-9
        np.testing.assert_allclose(
            found.intermediate_overlaps,
            (0.4 ** (2.0 / 3.0), 0.4 ** (1.0 / 3.0)),
            atol=0.05,
        )

    def test_unsupported_chain_length(self):
        with pytest.raises(ValueError):
            optimize_full_chain(DiscriminationInstance(0.5, 0.5, n_receivers=4), 50)
        with pytest.raises(ValueError):
            optimize_full_chain(DiscriminationInstance(0.5, 0.5, n_receivers=2), 10)


class TestThreshold:
    def test_two_receivers(self):
        assert 0.74 <= find_sb(2) <= 0.76

    def test_three_receivers(self):
        assert 0.41 <= find_sb(3) <= 0.43

    def test_decreases_with_chain_length(self):
        assert find_sb(4) < find_sb(3) < find_sb(2)

    def test_joint_success_continuous_across_threshold(self):
        threshold = find_sb(2)
        below = optimize_reduced(
            DiscriminationInstance(threshold - 1e-7, 0.5, n_receivers=2)
        ).joint_success
        above = optimize_reduced(
            DiscriminationInstance(threshold + 1e-7, 0.5, n_receivers=2)
        ).joint_success
        assert abs(above - below) <= 1e-6

    def test_rejects_single_receiver(self):
        with pytest.raises(ValueError):
            find_sb(1)


class TestOptimizerConfig:
    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            OptimizerConfig(scan_points=2)
        with pytest.raises(ValueError):
            OptimizerConfig(refine_tolerance=0.0)

    def test_custom_config_still_converges(self):
        inst = DiscriminationInstance(0.5, 0.5, n_receivers=2)
        coarse = optimize_reduced(inst, OptimizerConfig(scan_points=101))
        assert coarse.joint_success == pytest.approx(0.7285533905932737, abs=1e-10)
