from __future__ import annotations

from enum import Enum

import numpy as np

from .exceptions import UnknownEnvFamilyError

LINE_WORLD_TRACK_LENGTH = 16
LINE_WORLD_HORIZON = 64
LINE_WORLD_STEP_PENALTY = 0.01
LINE_WORLD_GOAL_REWARD = 1.0

GRID_GOAL_SIZE = 8
GRID_GOAL_HORIZON = 100
GRID_GOAL_STEP_PENALTY = 0.1
GRID_GOAL_GOAL_REWARD = 10.0
GRID_GOAL_WALL_PROBABILITY = 0.2
GRID_GOAL_PALETTE_RANGE = (0.5, 1.5)

DISTRACTOR_LENGTH = 8
DISTRACTOR_RANGE = (-1.0, 1.0)


class EnvFamily(Enum):
    LINE_WORLD = "LineWorld"
    GRID_GOAL = "GridGoal"

    @staticmethod
    def from_string(family_str: str) -> EnvFamily:
        try:
            return EnvFamily(family_str)
        except ValueError:
            raise UnknownEnvFamilyError(family_str, [family.value for family in EnvFamily]) from None

    @property
    def observation_dim(self) -> int:
        if self is EnvFamily.LINE_WORLD:
            return LINE_WORLD_TRACK_LENGTH + DISTRACTOR_LENGTH
        return GRID_GOAL_SIZE * GRID_GOAL_SIZE + DISTRACTOR_LENGTH

    @property
    def num_actions(self) -> int:
        return 2 if self is EnvFamily.LINE_WORLD else 4

    @property
    def horizon(self) -> int:
        return LINE_WORLD_HORIZON if self is EnvFamily.LINE_WORLD else GRID_GOAL_HORIZON

    @property
    def return_bounds(self) -> tuple[float, float]:
        if self is EnvFamily.LINE_WORLD:
            best = LINE_WORLD_GOAL_REWARD - LINE_WORLD_STEP_PENALTY * (LINE_WORLD_TRACK_LENGTH - 1)
            return -LINE_WORLD_STEP_PENALTY * LINE_WORLD_HORIZON, best
        return -GRID_GOAL_STEP_PENALTY * GRID_GOAL_HORIZON, GRID_GOAL_GOAL_REWARD

    def observation_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-coordinate lower and upper bounds of any observation this family can emit."""
        if self is EnvFamily.LINE_WORLD:
            layout_low = np.zeros(LINE_WORLD_TRACK_LENGTH)
            layout_high = np.ones(LINE_WORLD_TRACK_LENGTH)
        else:
            cells = GRID_GOAL_SIZE * GRID_GOAL_SIZE
            layout_low = np.zeros(cells)
            layout_high = np.full(cells, GRID_GOAL_PALETTE_RANGE[1])
        low = np.concatenate([layout_low, np.full(DISTRACTOR_LENGTH, DISTRACTOR_RANGE[0])])
        high = np.concatenate([layout_high, np.full(DISTRACTOR_LENGTH, DISTRACTOR_RANGE[1])])
        return low, high
