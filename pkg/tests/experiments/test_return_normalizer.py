import numpy as np
import pytest

from core.autodiff.mlp_params import Activation, OutputHead, init_mlp
from core.envgen.env_family import EnvFamily
from core.envgen.level_spec import LevelSpec
from core.envgen.line_world import MOVE_RIGHT
from experiments.exceptions import DegenerateBoundsError
from experiments.return_normalizer import NormalizationBounds, estimate_bounds, mean_normalized_return
from experiments.zero_shot_evaluator import ActingPolicy, ForwardPolicy, UniformRandomPolicy, ZeroShotEvaluator


class TestMeanNormalizedReturn:
    def test_average_over_families(self):
        bounds = {"LineWorld": NormalizationBounds(-1.0, 1.0), "GridGoal": NormalizationBounds(0.0, 10.0)}
        value = mean_normalized_return({"LineWorld": 0.0, "GridGoal": 10.0}, bounds)
        assert value == pytest.approx(0.75)

    def test_values_outside_unit_interval_kept(self):
        bounds = {"LineWorld": NormalizationBounds(0.0, 1.0)}
        assert mean_normalized_return({"LineWorld": -0.5}, bounds) == pytest.approx(-0.5)
        assert mean_normalized_return({"LineWorld": 1.5}, bounds) == pytest.approx(1.5)

    def test_degenerate_bounds(self):
        with pytest.raises(DegenerateBoundsError):
            mean_normalized_return({"LineWorld": 0.5}, {"LineWorld": NormalizationBounds(1.0, 1.0)})

    def test_missing_family_bounds(self):
        with pytest.raises(KeyError):
            mean_normalized_return({"GridGoal": 0.5}, {"LineWorld": NormalizationBounds(0.0, 1.0)})


class TestEstimateBounds:
    def test_line_world_bounds(self, line_world_levels):
        bounds = estimate_bounds(line_world_levels, 2, np.random.default_rng(0))
        assert set(bounds) == {"LineWorld"}
        assert bounds["LineWorld"].r_max == pytest.approx(0.85)
        assert -0.64 <= bounds["LineWorld"].r_min < 0.85

    def test_grid_goal_upper_bound_is_mean_oracle(self):
        levels = [LevelSpec(EnvFamily.GRID_GOAL, seed) for seed in range(3)]
        bounds = estimate_bounds(levels, 1, np.random.default_rng(0))
        assert bounds["GridGoal"].r_max <= 8.6
        assert bounds["GridGoal"].r_min < bounds["GridGoal"].r_max

    def test_same_generator_same_bounds(self, line_world_levels):
        first = estimate_bounds(line_world_levels, 1, np.random.default_rng(3))
        second = estimate_bounds(line_world_levels, 1, np.random.default_rng(3))
        assert first == second


class RightwardPolicy(ActingPolicy):
    def probabilities(self, states: np.ndarray) -> np.ndarray:
        probabilities = np.zeros((len(states), EnvFamily.LINE_WORLD.num_actions))
        probabilities[:, MOVE_RIGHT] = 1.0
        return probabilities


class TestNormalizationAnchors:
    @pytest.mark.parametrize("family", [EnvFamily.LINE_WORLD, EnvFamily.GRID_GOAL])
    def test_upper_anchor_covers_observed_returns(self, family):
        levels = [LevelSpec(family, seed) for seed in range(6)]
        bounds = estimate_bounds(levels, 2, np.random.default_rng(0))[family.value]
        assert bounds.r_min < bounds.r_max

        policies = [UniformRandomPolicy(family.num_actions)]
        for seed in range(3):
            network = init_mlp(
                [family.observation_dim, 16, family.num_actions],
                Activation.TANH,
                OutputHead.POLICY,
                np.random.default_rng(seed),
            )
            policies.append(ForwardPolicy(network))

        evaluator = ZeroShotEvaluator(levels, episodes_per_level=2)
        for index, policy in enumerate(policies):
            observed = evaluator.evaluate(policy, np.random.default_rng(100 + index)).family_returns[family.value]
            assert bounds.r_max + 0.1 >= observed

    def test_optimal_line_world_policy_reaches_upper_anchor(self, line_world_levels):
        bounds = estimate_bounds(line_world_levels, 1, np.random.default_rng(0))["LineWorld"]
        observed = ZeroShotEvaluator(line_world_levels).evaluate(RightwardPolicy(), np.random.default_rng(1))
        assert observed.family_returns["LineWorld"] == pytest.approx(bounds.r_max)
