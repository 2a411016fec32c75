import numpy as np
import pytest

from core.envgen.env_family import EnvFamily
from core.envgen.level_spec import LevelSpec
from core.exceptions import PreconditionError
from core.rollout.transition import Trajectory, Transition, TransitionBatch

LEVEL = LevelSpec(EnvFamily.LINE_WORLD, 0)


def make_transition(step, reward=0.0, done=False, **changes):
    fields = {
        "state": np.full(3, float(step)),
        "action": step % 2,
        "reward": reward,
        "value_est": 0.5,
        "advantage": float(step),
        "log_prob_behavior": -0.7,
        "done": done,
    }
    fields.update(changes)
    return Transition(**fields)


class TestTransition:
    def test_target_defaults_to_reward(self):
        assert make_transition(0, reward=2.5).target == 2.5

    def test_target_prefers_value_target(self):
        assert make_transition(0, reward=2.5, value_target=4.0).target == 4.0

    def test_with_updates_returns_copy(self):
        transition = make_transition(1)
        updated = transition.with_updates(adversarial=True, advantage=9.0)
        assert updated.adversarial is True
        assert updated.advantage == 9.0
        assert transition.adversarial is False
        assert transition.advantage == 1.0


class TestTrajectory:
    def test_empty_trajectory_rejected(self):
        with pytest.raises(PreconditionError):
            Trajectory((), LEVEL)

    def test_columns(self):
        trajectory = Trajectory([make_transition(step, reward=step, done=step == 2) for step in range(4)], LEVEL)
        assert len(trajectory) == 4
        assert trajectory.states().shape == (4, 3)
        assert trajectory.actions().tolist() == [0, 1, 0, 1]
        assert trajectory.rewards().tolist() == [0.0, 1.0, 2.0, 3.0]
        assert trajectory.dones().tolist() == [False, False, True, False]
        assert trajectory.advantages().tolist() == [0.0, 1.0, 2.0, 3.0]

    def test_with_transitions_keeps_level_and_bootstrap(self):
        bootstrap = np.ones(3)
        trajectory = Trajectory([make_transition(0)], LEVEL, bootstrap)
        replaced = trajectory.with_transitions([make_transition(5)])
        assert replaced.level == LEVEL
        assert replaced.bootstrap_state is bootstrap
        assert replaced[0].advantage == 5.0


class TestTransitionBatch:
    def test_from_transitions(self):
        batch = TransitionBatch.from_transitions([make_transition(step, value_target=1.5) for step in range(3)])
        assert len(batch) == 3
        assert batch.states.dtype == np.float64
        assert batch.actions.dtype == np.int64
        assert batch.value_targets.tolist() == [1.5, 1.5, 1.5]

    def test_empty_batch_rejected(self):
        with pytest.raises(PreconditionError):
            TransitionBatch.from_transitions([])

    def test_subset_and_with_advantages(self):
        batch = TransitionBatch.from_transitions([make_transition(step) for step in range(5)])
        subset = batch.subset(np.array([4, 1]))
        assert subset.advantages.tolist() == [4.0, 1.0]
        assert subset.states[0, 0] == 4.0

        replaced = batch.with_advantages([1, 1, 1, 1, 1])
        assert replaced.advantages.dtype == np.float64
        assert batch.advantages.tolist() == [0.0, 1.0, 2.0, 3.0, 4.0]
