import numpy as np

from core.autodiff.mlp import action_log_probs
from core.autodiff.mlp_params import MlpParams
from core.exceptions import ShapeError
from core.rollout.transition import Trajectory

from .augment_config import MixupConfig


def draw_mixing_coefficient(config: MixupConfig, rng: np.random.Generator) -> float:
    if config.forced_lambda is not None:
        return float(config.forced_lambda)
    return float(rng.beta(config.alpha, config.beta))


def mixup_trajectory_with_lambda(
    trajectory: Trajectory,
    config: MixupConfig,
    rng: np.random.Generator,
    policy: MlpParams,
    permutation: np.ndarray | None = None,
) -> tuple[Trajectory, float]:
    """
    Convexly mixes every transition with a partner drawn by a random permutation of the same trajectory.

    A single coefficient lambda is used for the whole trajectory. States, rewards, advantages, value targets and
    value estimates are interpolated, the action of the first transition is kept with probability lambda, and the
    behaviour log-probability of every mixed point is recomputed under ``policy``. Transitions paired with
    themselves are returned untouched.
    """
    lam = draw_mixing_coefficient(config, rng)
    length = len(trajectory)
    if permutation is None:
        permutation = rng.permutation(length)
    permutation = np.asarray(permutation, dtype=np.int64)
    if permutation.shape != (length,) or not np.array_equal(np.sort(permutation), np.arange(length)):
        raise ShapeError(f"permutation of {length} positions", permutation.shape, "mixup permutation")

    if lam == 1.0:
        return trajectory.with_transitions(trajectory.transitions), lam

    keep_action = rng.random(length) < lam
    mixed_rows = np.flatnonzero(permutation != np.arange(length))
    if mixed_rows.size == 0:
        return trajectory.with_transitions(trajectory.transitions), lam

    states = trajectory.states()
    actions = trajectory.actions()
    mixed_states = lam * states[mixed_rows] + (1.0 - lam) * states[permutation[mixed_rows]]
    mixed_actions = np.where(keep_action[mixed_rows], actions[mixed_rows], actions[permutation[mixed_rows]])
    mixed_log_probs = action_log_probs(policy, mixed_states, mixed_actions)

    transitions = list(trajectory.transitions)
    for offset, row in enumerate(mixed_rows):
        first = trajectory[row]
        second = trajectory[int(permutation[row])]
        transitions[row] = first.with_updates(
            state=mixed_states[offset],
            action=int(mixed_actions[offset]),
            reward=lam * first.reward + (1.0 - lam) * second.reward,
            value_est=lam * first.value_est + (1.0 - lam) * second.value_est,
            advantage=lam * first.advantage + (1.0 - lam) * second.advantage,
            value_target=lam * first.target + (1.0 - lam) * second.target,
            log_prob_behavior=float(mixed_log_probs[offset]),
            adversarial=first.adversarial or second.adversarial,
        )
    return trajectory.with_transitions(transitions), lam


def mixup_trajectory(
    trajectory: Trajectory,
    config: MixupConfig,
    rng: np.random.Generator,
    policy: MlpParams,
    permutation: np.ndarray | None = None,
) -> Trajectory:
    mixed, _ = mixup_trajectory_with_lambda(trajectory, config, rng, policy, permutation)
    return mixed
