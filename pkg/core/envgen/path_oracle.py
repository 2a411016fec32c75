from .environment_factory import make_env
from .environment_interface import Environment
from .grid_goal import GridGoal
from .grid_layout import GOAL_CELL, START_CELL, bfs_distance
from .level_spec import LevelSpec
from .line_world import LineWorld


def shortest_path_length(env: Environment) -> int:
    """Minimum number of steps from the start state to the goal."""
    if isinstance(env, LineWorld):
        return env.goal_cell
    if isinstance(env, GridGoal):
        distance = bfs_distance(env.walls, START_CELL, GOAL_CELL)
        if distance is None:
            raise RuntimeError(f"Level {env.level} has no path from start to goal")
        return distance
    raise TypeError(f"No oracle for environment type {type(env).__name__}")


def oracle_return_for_env(env: Environment) -> float:
    path_length = shortest_path_length(env)
    return env.goal_reward() - env.step_penalty() * path_length


def oracle_return(level: LevelSpec) -> float:
    """Optimal undiscounted return of the level, computed by breadth-first search over its layout."""
    return oracle_return_for_env(make_env(level))
