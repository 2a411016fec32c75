import numpy as np

from .env_family import (
    DISTRACTOR_LENGTH,
    DISTRACTOR_RANGE,
    LINE_WORLD_GOAL_REWARD,
    LINE_WORLD_STEP_PENALTY,
    LINE_WORLD_TRACK_LENGTH,
)
from .environment_interface import Environment
from .level_rng import LevelAttribute, level_rng
from .level_spec import LevelSpec

MOVE_LEFT = 0
MOVE_RIGHT = 1


class LineWorld(Environment):
    """
    A 1-D track: the agent starts in cell 0 and must walk right to the last cell.

    The observation is a one-hot position followed by a per-level distractor vector that never
    influences dynamics or reward.
    """

    def __init__(self, level: LevelSpec):
        super().__init__(level)
        self.distractor = level_rng(level.level_seed, LevelAttribute.DISTRACTOR).uniform(
            *DISTRACTOR_RANGE,
            size=DISTRACTOR_LENGTH,
        )
        self.goal_cell = LINE_WORLD_TRACK_LENGTH - 1
        self.position = 0

    def _reset_agent(self) -> None:
        self.position = 0

    def _move(self, action: int) -> bool:
        delta = 1 if action == MOVE_RIGHT else -1
        self.position = int(np.clip(self.position + delta, 0, self.goal_cell))
        return self.position == self.goal_cell

    def _observe(self) -> np.ndarray:
        one_hot = np.zeros(LINE_WORLD_TRACK_LENGTH)
        one_hot[self.position] = 1.0
        return np.concatenate([one_hot, self.distractor])

    def step_penalty(self) -> float:
        return LINE_WORLD_STEP_PENALTY

    def goal_reward(self) -> float:
        return LINE_WORLD_GOAL_REWARD
