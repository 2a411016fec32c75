from collections import deque

import numpy as np

from .env_family import GRID_GOAL_SIZE, GRID_GOAL_WALL_PROBABILITY

START_CELL = (0, 0)
GOAL_CELL = (GRID_GOAL_SIZE - 1, GRID_GOAL_SIZE - 1)

# up, down, left, right
MOVES = ((-1, 0), (1, 0), (0, -1), (0, 1))


def bfs_distance(walls: np.ndarray, start: tuple[int, int], goal: tuple[int, int]) -> int | None:
    """Shortest number of moves from start to goal avoiding walls, or None if the goal is unreachable."""
    rows, cols = walls.shape
    distances = {start: 0}
    frontier = deque([start])

    while frontier:
        cell = frontier.popleft()
        if cell == goal:
            return distances[cell]
        for d_row, d_col in MOVES:
            row, col = cell[0] + d_row, cell[1] + d_col
            if 0 <= row < rows and 0 <= col < cols and not walls[row, col] and (row, col) not in distances:
                distances[(row, col)] = distances[cell] + 1
                frontier.append((row, col))

    return None


def generate_walls(rng: np.random.Generator, max_attempts: int = 10_000) -> np.ndarray:
    """
    Draws a wall mask where every cell except start and goal is a wall with fixed probability.

    Layouts are redrawn from the same stream until the goal is reachable from the start.
    """
    for _ in range(max_attempts):
        walls = rng.random((GRID_GOAL_SIZE, GRID_GOAL_SIZE)) < GRID_GOAL_WALL_PROBABILITY
        walls[START_CELL] = False
        walls[GOAL_CELL] = False
        if bfs_distance(walls, START_CELL, GOAL_CELL) is not None:
            return walls

    raise RuntimeError(f"No connected layout found after {max_attempts} attempts")
