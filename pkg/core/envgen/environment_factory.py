from .env_family import EnvFamily
from .environment_interface import Environment
from .grid_goal import GridGoal
from .level_spec import LevelSpec
from .line_world import LineWorld


class EnvironmentFactory:
    @staticmethod
    def create_environment(level: LevelSpec) -> Environment:
        environment_map = {
            EnvFamily.LINE_WORLD: LineWorld,
            EnvFamily.GRID_GOAL: GridGoal,
        }
        return environment_map[level.family](level)


def make_env(level: LevelSpec | str) -> Environment:
    """Instantiates the level; accepts a LevelSpec or its 'family:seed' string form."""
    if isinstance(level, str):
        level = LevelSpec.from_string(level)
    return EnvironmentFactory.create_environment(level)
