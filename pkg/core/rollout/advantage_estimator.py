from enum import Enum

import numpy as np

from core.autodiff.mlp import value_predictions
from core.autodiff.mlp_params import MlpParams

from .transition import EpisodeReturn, Trajectory

DEFAULT_DISCOUNT = 0.999
DEFAULT_GAE_LAMBDA = 0.95


class AdvantageEstimator(Enum):
    IMMEDIATE = "immediate"
    RETURNS = "returns"
    GAE = "gae"

    @staticmethod
    def from_string(estimator_str: str):
        try:
            return AdvantageEstimator(estimator_str)
        except ValueError:
            available_estimators = ", ".join([estimator.value for estimator in AdvantageEstimator])
            raise ValueError(
                f"Invalid advantage estimator: '{estimator_str}'. Available estimators are: {available_estimators}",
            ) from None


def _bootstrap_value(trajectory: Trajectory, value: MlpParams) -> float:
    if trajectory[-1].done or trajectory.bootstrap_state is None:
        return 0.0
    return float(value_predictions(value, trajectory.bootstrap_state)[0])


def compute_advantages(
    trajectory: Trajectory,
    value: MlpParams,
    estimator: AdvantageEstimator = AdvantageEstimator.IMMEDIATE,
    discount: float = DEFAULT_DISCOUNT,
    gae_lambda: float = DEFAULT_GAE_LAMBDA,
) -> Trajectory:
    """
    Fills advantages, value estimates and value targets of every transition.

    ``IMMEDIATE`` uses A_t = r_t - V(s_t) with target r_t. ``RETURNS`` uses the discounted return G_t of the
    episode segment (bootstrapped with V at a window cut) as target and G_t - V(s_t) as advantage. ``GAE`` uses
    generalized advantage estimation with target A_t + V(s_t). Episode boundaries are never crossed.
    """
    values = value_predictions(value, trajectory.states())
    rewards = trajectory.rewards()
    dones = trajectory.dones()

    if estimator is AdvantageEstimator.IMMEDIATE:
        advantages = rewards - values
        targets = rewards
    else:
        next_value = _bootstrap_value(trajectory, value)
        advantages = np.zeros_like(rewards)
        targets = np.zeros_like(rewards)
        running_return = next_value
        running_advantage = 0.0
        for step in reversed(range(len(trajectory))):
            if dones[step]:
                running_return = 0.0
                running_advantage = 0.0
                next_value = 0.0
            if estimator is AdvantageEstimator.RETURNS:
                running_return = rewards[step] + discount * running_return
                targets[step] = running_return
                advantages[step] = running_return - values[step]
            else:
                delta = rewards[step] + discount * next_value - values[step]
                running_advantage = delta + discount * gae_lambda * running_advantage
                advantages[step] = running_advantage
                targets[step] = running_advantage + values[step]
            next_value = values[step]

    return trajectory.with_transitions(
        [
            transition.with_updates(
                value_est=float(values[index]),
                advantage=float(advantages[index]),
                value_target=float(targets[index]),
            )
            for index, transition in enumerate(trajectory)
        ],
    )


def episode_returns(trajectory: Trajectory, discount: float = DEFAULT_DISCOUNT) -> list[EpisodeReturn]:
    """
    Discounted return of every episode segment in the trajectory.

    The trailing segment that was cut by the window end is reported with ``complete=False``.
    """
    returns = []
    episode_return = 0.0
    weight = 1.0
    length = 0
    for transition in trajectory:
        episode_return += weight * transition.reward
        weight *= discount
        length += 1
        if transition.done:
            returns.append(EpisodeReturn(episode_return, length, complete=True))
            episode_return, weight, length = 0.0, 1.0, 0

    if length:
        returns.append(EpisodeReturn(episode_return, length, complete=False))
    return returns
