import numpy as np
import pytest

from core.augment.adversarial_generator import (
    AdversarialStats,
    build_adversarial_trajectory,
    build_adversarial_trajectory_with_stats,
    descend_adversarial_states,
    generate_adversarial_state,
    paada_objective,
)
from core.augment.augment_config import AdvGenConfig
from core.autodiff.mlp import action_log_probs, value_predictions
from core.exceptions import NumericError, PreconditionError, ShapeError
from experiments.self_test import (
    ORACLE_TOLERANCE,
    adversarial_oracle_instance,
    grid_search_minimum,
    oracle_config,
    oracle_objective,
    run_adversarial_oracle_checks,
)


class TestDescendAdversarialStates:
    def test_matches_grid_search_oracle(self):
        result = run_adversarial_oracle_checks(instances=20, seed=0)
        assert result.passed, result.detail

    def test_lowers_the_objective(self):
        rng = np.random.default_rng(11)
        config = oracle_config()
        for _ in range(5):
            policy, value, transition = adversarial_oracle_instance(rng)
            found = generate_adversarial_state(policy, value, transition, config)
            start = paada_objective(policy, value, transition.state, transition, transition.state, config.lagrangian)
            end = paada_objective(policy, value, found, transition, transition.state, config.lagrangian)
            assert end <= start + 1e-12

    def test_unmoved_state_fails_grid_search_oracle(self):
        result = run_adversarial_oracle_checks(
            instances=20,
            seed=0,
            generator=lambda policy, value, transition, config: transition.state,
        )
        assert not result.passed, result.detail

    def test_oracle_minimizer_moves_past_tolerance(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            policy, value, transition = adversarial_oracle_instance(rng)
            objective = oracle_objective(policy, value, transition, oracle_config().lagrangian)
            minimizer = grid_search_minimum(objective, transition.state)
            assert np.max(np.abs(minimizer - transition.state)) > 2 * ORACLE_TOLERANCE

    def test_larger_anchor_weight_never_moves_further(self):
        rng = np.random.default_rng(5)
        for _ in range(3):
            policy, value, transition = adversarial_oracle_instance(rng)
            distances = [
                np.linalg.norm(
                    grid_search_minimum(oracle_objective(policy, value, transition, gamma), transition.state)
                    - transition.state,
                )
                for gamma in (0.001, 0.01, 0.1, 1.0, 10.0)
            ]
            assert all(later <= earlier + 1e-3 for earlier, later in zip(distances, distances[1:]))
            assert distances[-1] < distances[0]

    def test_clipping_without_bounds_rejected(self):
        policy, value, transition = adversarial_oracle_instance(np.random.default_rng(12))
        with pytest.raises(PreconditionError):
            generate_adversarial_state(policy, value, transition, AdvGenConfig(clip_to_obs_bounds=True))

    def test_clipping_keeps_state_inside_bounds(self):
        policy, value, transition = adversarial_oracle_instance(np.random.default_rng(13))
        bounds = (transition.state - 0.01, transition.state + 0.01)
        found = generate_adversarial_state(policy, value, transition, AdvGenConfig(), bounds)
        assert np.all(found >= bounds[0])
        assert np.all(found <= bounds[1])

    def test_step_count_never_exceeds_budget(self, line_world_networks, line_world_trajectory):
        policy, value = line_world_networks
        config = AdvGenConfig(max_steps=3)
        result = descend_adversarial_states(
            policy,
            value,
            line_world_trajectory.states(),
            line_world_trajectory.actions(),
            line_world_trajectory.value_targets(),
            config,
        )
        assert np.all(result.steps <= 3)
        assert result.final_grad_norm_sq.shape == (len(line_world_trajectory),)

    def test_zero_steps_returns_start_states(self, line_world_networks, line_world_trajectory):
        policy, value = line_world_networks
        states = line_world_trajectory.states()
        result = descend_adversarial_states(
            policy,
            value,
            states,
            line_world_trajectory.actions(),
            line_world_trajectory.value_targets(),
            AdvGenConfig(max_steps=0),
        )
        assert np.array_equal(result.states, states)
        assert np.all(result.steps == 0)

    def test_converged_rows_stop_immediately(self, line_world_networks, line_world_trajectory):
        policy, value = line_world_networks
        result = descend_adversarial_states(
            policy,
            value,
            line_world_trajectory.states(),
            line_world_trajectory.actions(),
            line_world_trajectory.value_targets(),
            AdvGenConfig(tolerance=1e6),
        )
        assert np.all(result.steps == 0)

    def test_rejects_wrong_state_width(self, line_world_networks):
        policy, value = line_world_networks
        with pytest.raises(ShapeError):
            descend_adversarial_states(policy, value, np.zeros((2, 5)), np.zeros(2), np.zeros(2), AdvGenConfig())

    def test_non_finite_states_raise(self, line_world_networks):
        policy, value = line_world_networks
        states = np.zeros((1, policy.input_dim))
        states[0, 0] = np.inf
        with np.errstate(invalid="ignore", over="ignore"), pytest.raises(NumericError):
            descend_adversarial_states(policy, value, states, np.array([0]), np.array([1.0]), AdvGenConfig())


class TestBuildAdversarialTrajectory:
    def test_labels_are_preserved(self, line_world_networks, line_world_trajectory):
        policy, value = line_world_networks
        adversarial = build_adversarial_trajectory(line_world_trajectory, policy, value, AdvGenConfig())

        assert len(adversarial) == len(line_world_trajectory)
        assert adversarial.level == line_world_trajectory.level
        assert np.array_equal(adversarial.actions(), line_world_trajectory.actions())
        assert np.array_equal(adversarial.rewards(), line_world_trajectory.rewards())
        assert np.array_equal(adversarial.dones(), line_world_trajectory.dones())
        assert np.array_equal(adversarial.value_targets(), line_world_trajectory.value_targets())
        assert all(transition.adversarial for transition in adversarial)
        assert not any(transition.adversarial for transition in line_world_trajectory)

    def test_behaviour_quantities_recomputed(self, line_world_networks, line_world_trajectory):
        policy, value = line_world_networks
        adversarial = build_adversarial_trajectory(line_world_trajectory, policy, value, AdvGenConfig())
        states = adversarial.states()

        expected_log_probs = action_log_probs(policy, states, adversarial.actions())
        expected_values = value_predictions(value, states)
        assert [t.log_prob_behavior for t in adversarial] == pytest.approx(expected_log_probs.tolist())
        assert [t.value_est for t in adversarial] == pytest.approx(expected_values.tolist())
        assert adversarial.advantages() == pytest.approx(adversarial.value_targets() - expected_values)

    def test_states_stay_inside_observation_bounds(self, line_world_networks, line_world_trajectory):
        policy, value = line_world_networks
        adversarial = build_adversarial_trajectory(line_world_trajectory, policy, value, AdvGenConfig(stepsize=500.0))
        low, high = line_world_trajectory.level.family.observation_bounds()
        assert np.all(adversarial.states() >= low)
        assert np.all(adversarial.states() <= high)

    def test_stats(self, line_world_networks, line_world_trajectory):
        policy, value = line_world_networks
        adversarial, stats = build_adversarial_trajectory_with_stats(
            line_world_trajectory,
            policy,
            value,
            AdvGenConfig(max_steps=5),
        )
        assert stats.count == len(line_world_trajectory)
        assert 0.0 <= stats.mean_steps <= 5.0
        expected_displacement = np.mean(np.linalg.norm(adversarial.states() - line_world_trajectory.states(), axis=1))
        assert stats.mean_displacement == pytest.approx(expected_displacement)


class TestAdversarialStats:
    def test_combine_weights_by_count(self):
        combined = AdversarialStats.combine(
            [AdversarialStats(2.0, 0.1, 1.0, 1), AdversarialStats(5.0, 0.4, 4.0, 2)],
        )
        assert combined.count == 3
        assert combined.mean_steps == pytest.approx(4.0)
        assert combined.mean_final_grad_norm == pytest.approx(0.3)
        assert combined.mean_displacement == pytest.approx(3.0)

    def test_combine_empty(self):
        assert AdversarialStats.combine([]) is None
