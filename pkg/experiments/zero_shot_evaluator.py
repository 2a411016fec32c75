from abc import ABC, abstractmethod
from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass
import logging

import numpy as np

from core.autodiff.mlp import policy_probabilities
from core.autodiff.mlp_params import MlpParams
from core.envgen.environment_factory import make_env
from core.envgen.environment_interface import Environment
from core.envgen.level_spec import LevelSpec
from core.exceptions import PreconditionError
from core.rollout.trajectory_collector import sample_actions


class ActingPolicy(ABC):
    """Forward-only view of a policy: it can produce action distributions and nothing else."""

    @abstractmethod
    def probabilities(self, states: np.ndarray) -> np.ndarray:
        pass


class ForwardPolicy(ActingPolicy):
    def __init__(self, params: MlpParams):
        self._params = params

    def probabilities(self, states: np.ndarray) -> np.ndarray:
        return policy_probabilities(self._params, states)


class UniformRandomPolicy(ActingPolicy):
    def __init__(self, num_actions: int):
        self.num_actions = num_actions

    def probabilities(self, states: np.ndarray) -> np.ndarray:
        return np.full((len(states), self.num_actions), 1.0 / self.num_actions)


@dataclass(frozen=True)
class EvaluationResult:
    family_returns: dict[str, float]
    level_returns: dict[str, list[float]]


class ZeroShotEvaluator:
    """
    Runs a policy on a fixed set of test levels without any learning or augmentation.

    Levels of one family are stepped in lock-step so the network is evaluated once per step for all of them.
    Returns are undiscounted unless a discount is given.
    """

    def __init__(self, test_levels: Sequence[LevelSpec], episodes_per_level: int = 1, discount: float | None = None):
        if not test_levels:
            raise PreconditionError("Zero-shot evaluation needs at least one test level")
        if episodes_per_level < 1:
            raise PreconditionError(f"episodes_per_level must be positive, got {episodes_per_level}")
        self.logger = logging.getLogger(self.__class__.__name__)
        self.test_levels = list(test_levels)
        self.episodes_per_level = episodes_per_level
        self.discount = discount
        self._environments: dict[LevelSpec, Environment] = {}

    def _environment(self, level: LevelSpec) -> Environment:
        if level not in self._environments:
            self._environments[level] = make_env(level)
        return self._environments[level]

    def evaluate(self, policy: ActingPolicy, rng: np.random.Generator) -> EvaluationResult:
        by_family: dict[str, list[LevelSpec]] = defaultdict(list)
        for level in self.test_levels:
            by_family[level.family.value].append(level)

        family_returns = {}
        level_returns = {}
        for family, levels in by_family.items():
            returns = self._run_family(policy, levels, rng)
            level_returns.update({level.to_string(): returns[level] for level in levels})
            family_returns[family] = float(np.mean([value for level in levels for value in returns[level]]))

        return EvaluationResult(family_returns, level_returns)

    def _run_family(
        self,
        policy: ActingPolicy,
        levels: list[LevelSpec],
        rng: np.random.Generator,
    ) -> dict[LevelSpec, list[float]]:
        environments = [self._environment(level) for level in levels]
        returns: dict[LevelSpec, list[float]] = {level: [] for level in levels}
        observations = [environment.reset() for environment in environments]
        episode_return = np.zeros(len(levels))
        weight = np.ones(len(levels))
        active = list(range(len(levels)))

        while active:
            probabilities = policy.probabilities(np.stack([observations[index] for index in active]))
            actions = sample_actions(probabilities, [rng] * len(active))
            still_active = []
            for row, index in enumerate(active):
                result = environments[index].step(int(actions[row]))
                episode_return[index] += weight[index] * result.reward
                weight[index] *= self.discount if self.discount is not None else 1.0
                observations[index] = result.observation
                if not result.done:
                    still_active.append(index)
                    continue

                returns[levels[index]].append(float(episode_return[index]))
                episode_return[index], weight[index] = 0.0, 1.0
                if len(returns[levels[index]]) < self.episodes_per_level:
                    observations[index] = environments[index].reset()
                    still_active.append(index)
            active = still_active

        return returns


def evaluate_zero_shot(
    policy: ActingPolicy,
    test_levels: Sequence[LevelSpec],
    episodes_per_level: int,
    rng: np.random.Generator,
    discount: float | None = None,
) -> dict[str, float]:
    """Mean episode return per environment family over every test level and episode."""
    return ZeroShotEvaluator(test_levels, episodes_per_level, discount).evaluate(policy, rng).family_returns
