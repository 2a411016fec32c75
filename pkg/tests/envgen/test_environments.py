from collections import deque

import numpy as np
import pytest

from core.envgen.env_family import DISTRACTOR_LENGTH, EnvFamily
from core.envgen.environment_factory import EnvironmentFactory, make_env
from core.envgen.exceptions import EpisodeFinishedError, InvalidActionError, UnknownEnvFamilyError
from core.envgen.grid_goal import GridGoal
from core.envgen.grid_layout import GOAL_CELL, MOVES, START_CELL, bfs_distance
from core.envgen.level_spec import LevelSpec
from core.envgen.line_world import MOVE_LEFT, MOVE_RIGHT, LineWorld


class TestEnvFamily:
    def test_from_string(self):
        assert EnvFamily.from_string("GridGoal") is EnvFamily.GRID_GOAL

    def test_unknown_family(self):
        with pytest.raises(UnknownEnvFamilyError, match="Available families are: LineWorld, GridGoal"):
            EnvFamily.from_string("CoinRun")

    @pytest.mark.parametrize(
        ("family", "observation_dim", "num_actions", "horizon"),
        [(EnvFamily.LINE_WORLD, 24, 2, 64), (EnvFamily.GRID_GOAL, 72, 4, 100)],
    )
    def test_dimensions(self, family, observation_dim, num_actions, horizon):
        assert family.observation_dim == observation_dim
        assert family.num_actions == num_actions
        assert family.horizon == horizon
        low, high = family.observation_bounds()
        assert low.shape == high.shape == (observation_dim,)
        assert np.all(low < high)


class TestLineWorld:
    @pytest.fixture
    def env(self):
        return make_env("LineWorld:3")

    def test_factory_builds_line_world(self, env):
        assert isinstance(env, LineWorld)
        assert env.level == LevelSpec(EnvFamily.LINE_WORLD, 3)

    def test_reset_observation(self, env):
        observation = env.reset()
        assert observation.shape == (24,)
        assert observation[0] == 1.0
        assert observation[1:16].sum() == 0.0
        assert np.all(np.abs(observation[16:]) <= 1.0)

    def test_always_right_reaches_goal_in_fifteen_steps(self, env):
        env.reset()
        total = 0.0
        for step in range(15):
            result = env.step(MOVE_RIGHT)
            total += result.reward
            assert result.done == (step == 14)
        assert total == pytest.approx(0.85)
        assert not result.truncated

    def test_left_wall_keeps_position(self, env):
        env.reset()
        result = env.step(MOVE_LEFT)
        assert result.observation[0] == 1.0
        assert result.reward == pytest.approx(-0.01)

    def test_truncation_at_horizon(self, env):
        env.reset()
        for _ in range(64):
            result = env.step(MOVE_LEFT)
        assert result.done
        assert result.truncated

    def test_step_after_done(self, env):
        env.reset()
        for _ in range(15):
            env.step(MOVE_RIGHT)
        with pytest.raises(EpisodeFinishedError):
            env.step(MOVE_RIGHT)

    def test_invalid_action(self, env):
        env.reset()
        with pytest.raises(InvalidActionError):
            env.step(2)

    def test_distractor_is_per_level_and_deterministic(self):
        first = make_env("LineWorld:3").reset()[16:]
        again = make_env("LineWorld:3").reset()[16:]
        other = make_env("LineWorld:4").reset()[16:]
        assert np.array_equal(first, again)
        assert not np.array_equal(first, other)


class TestGridGoal:
    def test_every_layout_is_connected(self):
        for seed in range(1000):
            env = make_env(LevelSpec(EnvFamily.GRID_GOAL, seed))
            assert isinstance(env, GridGoal)
            assert not env.walls[START_CELL], seed
            assert not env.walls[GOAL_CELL], seed
            assert bfs_distance(env.walls, START_CELL, GOAL_CELL) is not None, seed

    def test_adjacent_seeds_give_different_layouts(self):
        walls = [make_env(LevelSpec(EnvFamily.GRID_GOAL, seed)).walls for seed in range(101)]
        differing = sum(not np.array_equal(first, second) for first, second in zip(walls, walls[1:]))
        assert differing >= 95

    def test_observation_encodes_palette(self):
        env = make_env("GridGoal:5")
        observation = env.reset()
        grid = observation[:-DISTRACTOR_LENGTH].reshape(8, 8)
        assert grid[START_CELL] == pytest.approx(env.agent_colour)
        assert grid[GOAL_CELL] == pytest.approx(env.goal_colour)
        assert np.all(grid[env.walls] == pytest.approx(env.wall_colour))
        assert 0.5 <= env.wall_colour <= 1.5

    def test_walls_block_movement(self):
        env = make_env("GridGoal:5")
        env.reset()
        result = env.step(0)  # up, out of the grid
        assert env.position == START_CELL
        assert result.reward == pytest.approx(-0.1)

    def test_same_seed_same_level(self):
        first, second = make_env("GridGoal:17"), make_env("GridGoal:17")
        assert np.array_equal(first.walls, second.walls)
        assert first.wall_colour == second.wall_colour

    def test_shortest_path_reaches_goal_with_oracle_return(self):
        env = make_env("GridGoal:9")
        env.reset()
        path = _shortest_action_sequence(env.walls)
        total = sum(env.step(action).reward for action in path)
        assert env.done
        assert total == pytest.approx(10.0 - 0.1 * len(path))


def _shortest_action_sequence(walls):
    parents = {START_CELL: None}
    frontier = deque([START_CELL])
    while frontier:
        cell = frontier.popleft()
        for action, (d_row, d_col) in enumerate(MOVES):
            nxt = (cell[0] + d_row, cell[1] + d_col)
            if 0 <= nxt[0] < 8 and 0 <= nxt[1] < 8 and not walls[nxt] and nxt not in parents:
                parents[nxt] = (cell, action)
                frontier.append(nxt)
    actions = []
    cell = GOAL_CELL
    while parents[cell] is not None:
        cell, action = parents[cell]
        actions.append(action)
    return actions[::-1]


def test_factory_dispatch():
    env = EnvironmentFactory.create_environment(LevelSpec(EnvFamily.GRID_GOAL, 0))
    assert env.family is EnvFamily.GRID_GOAL
