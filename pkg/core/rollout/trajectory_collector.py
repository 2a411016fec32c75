from collections.abc import Sequence
import logging

import numpy as np

from core.autodiff.mlp import floored_log_probs, policy_probabilities, value_predictions
from core.autodiff.mlp_params import MlpParams
from core.envgen.environment_interface import Environment
from core.exceptions import PreconditionError
from utils.worker_pool import ordered_map

from .transition import Transition, Trajectory

# Fixed so that batched forward passes, and therefore results, never depend on the thread count
ENVIRONMENT_CHUNK_SIZE = 16


def sample_actions(probabilities: np.ndarray, rngs: Sequence[np.random.Generator]) -> np.ndarray:
    """Draws one action per row, each row from its own generator."""
    cumulative = np.cumsum(probabilities, axis=1)
    actions = np.empty(len(rngs), dtype=np.int64)
    for row, rng in enumerate(rngs):
        action = int(np.searchsorted(cumulative[row], rng.random() * cumulative[row, -1], side="right"))
        actions[row] = min(action, probabilities.shape[1] - 1)
    return actions


class TrajectoryCollector:
    """
    Runs the current policy on a set of environments in lock-step and records fixed-length trajectories.

    Every environment is reset at the start of a collection and automatically reset whenever an episode ends, so each
    trajectory holds exactly ``rollout_length`` transitions.
    """

    def __init__(self, rollout_length: int, max_workers: int | None = None):
        if rollout_length < 1:
            raise PreconditionError(f"Rollout length must be positive, got {rollout_length}")
        self.logger = logging.getLogger(self.__class__.__name__)
        self.rollout_length = rollout_length
        self.max_workers = max_workers

    def collect(
        self,
        policy: MlpParams,
        value: MlpParams,
        environments: Sequence[Environment],
        rngs: Sequence[np.random.Generator],
    ) -> list[Trajectory]:
        if len(environments) != len(rngs):
            raise PreconditionError(f"Got {len(environments)} environments but {len(rngs)} generators")

        chunks = [
            (environments[start : start + ENVIRONMENT_CHUNK_SIZE], rngs[start : start + ENVIRONMENT_CHUNK_SIZE])
            for start in range(0, len(environments), ENVIRONMENT_CHUNK_SIZE)
        ]
        results = ordered_map(
            lambda chunk: self._collect_chunk(policy, value, chunk[0], chunk[1]),
            chunks,
            self.max_workers,
        )
        trajectories = [trajectory for chunk_result in results for trajectory in chunk_result]
        self.logger.debug(f"Collected {len(trajectories)} trajectories of length {self.rollout_length}")
        return trajectories

    def _collect_chunk(
        self,
        policy: MlpParams,
        value: MlpParams,
        environments: Sequence[Environment],
        rngs: Sequence[np.random.Generator],
    ) -> list[Trajectory]:
        observations = np.stack([environment.reset() for environment in environments])
        records: list[list[Transition]] = [[] for _ in environments]

        for _ in range(self.rollout_length):
            probabilities = policy_probabilities(policy, observations)
            values = value_predictions(value, observations)
            actions = sample_actions(probabilities, rngs)
            log_probs, _ = floored_log_probs(probabilities, actions)

            next_observations = []
            for index, environment in enumerate(environments):
                result = environment.step(int(actions[index]))
                records[index].append(
                    Transition(
                        state=observations[index].copy(),
                        action=int(actions[index]),
                        reward=float(result.reward),
                        value_est=float(values[index]),
                        advantage=0.0,
                        log_prob_behavior=float(log_probs[index]),
                        done=result.done,
                    ),
                )
                next_observations.append(environment.reset() if result.done else result.observation)
            observations = np.stack(next_observations)

        return [
            Trajectory(tuple(transitions), environment.level, observations[index].copy())
            for index, (environment, transitions) in enumerate(zip(environments, records, strict=True))
        ]


def collect_trajectory(
    policy: MlpParams,
    value: MlpParams,
    environment: Environment,
    rollout_length: int,
    rng: np.random.Generator,
) -> Trajectory:
    """Collects one trajectory of exactly ``rollout_length`` transitions on a single environment."""
    return TrajectoryCollector(rollout_length, max_workers=1).collect(policy, value, [environment], [rng])[0]
