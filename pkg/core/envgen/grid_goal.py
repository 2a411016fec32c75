import numpy as np

from .env_family import (
    DISTRACTOR_LENGTH,
    DISTRACTOR_RANGE,
    GRID_GOAL_GOAL_REWARD,
    GRID_GOAL_PALETTE_RANGE,
    GRID_GOAL_SIZE,
    GRID_GOAL_STEP_PENALTY,
)
from .environment_interface import Environment
from .grid_layout import GOAL_CELL, MOVES, START_CELL, generate_walls
from .level_rng import LevelAttribute, level_rng
from .level_spec import LevelSpec


class GridGoal(Environment):
    """
    An 8x8 maze with random walls; the agent walks from the top-left corner to the bottom-right one.

    Observations encode the grid with a per-level colour palette (wall, goal, agent) and append the
    level distractor. Bumping into a wall or the border leaves the agent in place.
    """

    def __init__(self, level: LevelSpec):
        super().__init__(level)
        self.walls = generate_walls(level_rng(level.level_seed, LevelAttribute.LAYOUT))
        wall_colour, goal_colour, agent_colour = level_rng(level.level_seed, LevelAttribute.PALETTE).uniform(
            *GRID_GOAL_PALETTE_RANGE,
            size=3,
        )
        self.wall_colour = float(wall_colour)
        self.goal_colour = float(goal_colour)
        self.agent_colour = float(agent_colour)
        self.distractor = level_rng(level.level_seed, LevelAttribute.DISTRACTOR).uniform(
            *DISTRACTOR_RANGE,
            size=DISTRACTOR_LENGTH,
        )
        self.position = START_CELL

    def _reset_agent(self) -> None:
        self.position = START_CELL

    def _move(self, action: int) -> bool:
        d_row, d_col = MOVES[action]
        row, col = self.position[0] + d_row, self.position[1] + d_col
        if 0 <= row < GRID_GOAL_SIZE and 0 <= col < GRID_GOAL_SIZE and not self.walls[row, col]:
            self.position = (row, col)
        return self.position == GOAL_CELL

    def _observe(self) -> np.ndarray:
        grid = np.where(self.walls, self.wall_colour, 0.0)
        grid[GOAL_CELL] = self.goal_colour
        grid[self.position] = self.agent_colour
        return np.concatenate([grid.ravel(), self.distractor])

    def step_penalty(self) -> float:
        return GRID_GOAL_STEP_PENALTY

    def goal_reward(self) -> float:
        return GRID_GOAL_GOAL_REWARD
