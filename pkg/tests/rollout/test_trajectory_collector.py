import numpy as np
import pytest

from core.envgen.env_family import EnvFamily
from core.envgen.environment_factory import make_env
from core.envgen.level_spec import LevelSpec
from core.exceptions import PreconditionError
from core.rollout.trajectory_collector import TrajectoryCollector, collect_trajectory, sample_actions


def collect(networks, levels, max_workers, rollout_length=40):
    policy, value = networks
    environments = [make_env(level) for level in levels]
    rngs = [np.random.default_rng([9, index]) for index in range(len(levels))]
    return TrajectoryCollector(rollout_length, max_workers).collect(policy, value, environments, rngs)


class TestSampleActions:
    def test_deterministic_distributions(self):
        probabilities = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 1.0]])
        rngs = [np.random.default_rng(seed) for seed in range(3)]
        assert sample_actions(probabilities, rngs).tolist() == [0, 1, 1]

    def test_empirical_frequencies(self):
        rng = np.random.default_rng(0)
        probabilities = np.array([[0.2, 0.8]])
        draws = [int(sample_actions(probabilities, [rng])[0]) for _ in range(4000)]
        assert np.mean(draws) == pytest.approx(0.8, abs=0.03)


class TestTrajectoryCollector:
    def test_rejects_non_positive_length(self):
        with pytest.raises(PreconditionError):
            TrajectoryCollector(0)

    def test_rejects_mismatched_generators(self, line_world_networks, line_world_levels):
        policy, value = line_world_networks
        environments = [make_env(level) for level in line_world_levels]
        with pytest.raises(PreconditionError):
            TrajectoryCollector(8, 1).collect(policy, value, environments, [np.random.default_rng(0)])

    def test_every_trajectory_has_exact_length(self, line_world_networks, line_world_levels):
        trajectories = collect(line_world_networks, line_world_levels, max_workers=1, rollout_length=100)
        assert len(trajectories) == len(line_world_levels)
        for trajectory, level in zip(trajectories, line_world_levels, strict=True):
            assert len(trajectory) == 100
            assert trajectory.level == level
            assert trajectory.bootstrap_state.shape == (24,)

    def test_results_independent_of_worker_count(self, line_world_networks):
        levels = [LevelSpec(EnvFamily.LINE_WORLD, seed) for seed in range(20)]
        serial = collect(line_world_networks, levels, max_workers=1)
        parallel = collect(line_world_networks, levels, max_workers=4)
        for first, second in zip(serial, parallel, strict=True):
            assert np.array_equal(first.states(), second.states())
            assert np.array_equal(first.actions(), second.actions())
            assert np.array_equal(first.rewards(), second.rewards())

    def test_auto_reset_after_episode_end(self, line_world_networks, line_world_levels):
        trajectory = collect(line_world_networks, line_world_levels[:1], max_workers=1, rollout_length=200)[0]
        dones = trajectory.dones()
        assert dones.any()
        first_done = int(np.argmax(dones))
        # the state after a finished episode is the start cell again
        assert trajectory[first_done + 1].state[0] == 1.0

    def test_behaviour_log_probs_are_finite(self, line_world_networks, line_world_levels):
        trajectory = collect(line_world_networks, line_world_levels[:1], max_workers=1)[0]
        log_probs = np.array([transition.log_prob_behavior for transition in trajectory])
        assert np.all(np.isfinite(log_probs))
        assert np.all(log_probs <= 0.0)
        assert not any(transition.adversarial for transition in trajectory)

    def test_collect_trajectory_helper(self, line_world_networks, line_world_levels):
        policy, value = line_world_networks
        trajectory = collect_trajectory(policy, value, make_env(line_world_levels[0]), 16, np.random.default_rng(3))
        assert len(trajectory) == 16
