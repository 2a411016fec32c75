from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
import logging

import numpy as np

from core.autodiff.mlp import action_log_probs, value_predictions
from core.autodiff.mlp_params import MlpParams
from core.autodiff.objectives import paada_objective_and_gradient
from core.exceptions import NumericError, PreconditionError, ShapeError
from core.rollout.transition import Trajectory, Transition

from .augment_config import AdvGenConfig


@dataclass(frozen=True)
class AdversarialStats:
    mean_steps: float
    mean_final_grad_norm: float
    mean_displacement: float
    count: int

    @staticmethod
    def combine(stats: Sequence[AdversarialStats]) -> AdversarialStats | None:
        total = sum(item.count for item in stats)
        if total == 0:
            return None

        def weighted(attribute: str) -> float:
            return sum(getattr(item, attribute) * item.count for item in stats) / total

        return AdversarialStats(
            mean_steps=weighted("mean_steps"),
            mean_final_grad_norm=weighted("mean_final_grad_norm"),
            mean_displacement=weighted("mean_displacement"),
            count=total,
        )


@dataclass(frozen=True)
class DescentResult:
    states: np.ndarray
    steps: np.ndarray
    final_grad_norm_sq: np.ndarray


def paada_objective(
    policy: MlpParams,
    value: MlpParams,
    state: np.ndarray,
    transition: Transition,
    anchor: np.ndarray,
    gamma_lagr: float,
) -> float:
    """log pi(a_t|s) * (target_t - V(s)) + gamma * ||s - anchor||^2 for a single candidate state."""
    objectives, _ = paada_objective_and_gradient(
        policy,
        value,
        np.asarray(state, dtype=np.float64)[np.newaxis, :],
        np.array([transition.action]),
        np.array([transition.target]),
        np.asarray(anchor, dtype=np.float64)[np.newaxis, :],
        gamma_lagr,
    )
    return float(objectives[0])


def descend_adversarial_states(
    policy: MlpParams,
    value: MlpParams,
    states: np.ndarray,
    actions: np.ndarray,
    targets: np.ndarray,
    config: AdvGenConfig,
    obs_bounds: tuple[np.ndarray, np.ndarray] | None = None,
) -> DescentResult:
    """
    Fixed-step gradient descent on the adversarial objective, one independent search per row.

    A row stops as soon as its squared gradient norm drops below the tolerance, or after ``max_steps`` updates.
    Rows are anchored at their starting state.
    """
    anchors = np.array(states, dtype=np.float64)
    if anchors.ndim != 2 or anchors.shape[1] != policy.input_dim:
        raise ShapeError((len(anchors), policy.input_dim), anchors.shape, "adversarial start states")
    actions = np.asarray(actions, dtype=np.int64)
    targets = np.asarray(targets, dtype=np.float64)

    current = anchors.copy()
    steps = np.zeros(len(anchors), dtype=np.int64)
    active = np.ones(len(anchors), dtype=bool)

    for step in range(1, config.max_steps + 1):
        rows = np.flatnonzero(active)
        if rows.size == 0:
            break

        _, gradients = paada_objective_and_gradient(
            policy,
            value,
            current[rows],
            actions[rows],
            targets[rows],
            anchors[rows],
            config.lagrangian,
            config.value_detached,
        )
        norm_sq = np.sum(gradients**2, axis=1)
        converged = norm_sq < config.tolerance
        active[rows[converged]] = False

        moving = rows[~converged]
        updated = current[moving] - config.stepsize * gradients[~converged]
        if obs_bounds is not None:
            updated = np.clip(updated, obs_bounds[0], obs_bounds[1])
        if not np.all(np.isfinite(updated)):
            raise NumericError(
                "Adversarial descent produced non-finite states",
                step=step,
                diagnostics={"rows": int(moving.size), "max_grad_norm_sq": float(np.max(norm_sq))},
            )
        current[moving] = updated
        steps[moving] += 1

    _, final_gradients = paada_objective_and_gradient(
        policy,
        value,
        current,
        actions,
        targets,
        anchors,
        config.lagrangian,
        config.value_detached,
    )
    return DescentResult(current, steps, np.sum(final_gradients**2, axis=1))


def generate_adversarial_state(
    policy: MlpParams,
    value: MlpParams,
    transition: Transition,
    config: AdvGenConfig,
    obs_bounds: tuple[np.ndarray, np.ndarray] | None = None,
) -> np.ndarray:
    """Adversarial counterpart of one transition's state, clipped to ``obs_bounds`` when clipping is enabled."""
    if config.clip_to_obs_bounds and obs_bounds is None:
        raise PreconditionError("Clipping to observation bounds is enabled but no bounds were given")
    result = descend_adversarial_states(
        policy,
        value,
        np.asarray(transition.state, dtype=np.float64)[np.newaxis, :],
        np.array([transition.action]),
        np.array([transition.target]),
        config,
        obs_bounds if config.clip_to_obs_bounds else None,
    )
    return result.states[0]


def build_adversarial_trajectory_with_stats(
    trajectory: Trajectory,
    policy: MlpParams,
    value: MlpParams,
    config: AdvGenConfig,
) -> tuple[Trajectory, AdversarialStats]:
    obs_bounds = trajectory.level.family.observation_bounds() if config.clip_to_obs_bounds else None
    states = trajectory.states()
    actions = trajectory.actions()
    targets = trajectory.value_targets()

    result = descend_adversarial_states(policy, value, states, actions, targets, config, obs_bounds)
    log_probs = action_log_probs(policy, result.states, actions)
    values = value_predictions(value, result.states)

    adversarial = trajectory.with_transitions(
        [
            transition.with_updates(
                state=result.states[index].copy(),
                value_est=float(values[index]),
                advantage=float(targets[index] - values[index]),
                log_prob_behavior=float(log_probs[index]),
                adversarial=True,
            )
            for index, transition in enumerate(trajectory)
        ],
    )
    stats = AdversarialStats(
        mean_steps=float(np.mean(result.steps)),
        mean_final_grad_norm=float(np.mean(np.sqrt(result.final_grad_norm_sq))),
        mean_displacement=float(np.mean(np.linalg.norm(result.states - states, axis=1))),
        count=len(trajectory),
    )
    logging.debug(
        f"Adversarial trajectory on {trajectory.level}: mean steps {stats.mean_steps:.2f}, "
        f"mean displacement {stats.mean_displacement:.4f}",
    )
    return adversarial, stats


def build_adversarial_trajectory(
    trajectory: Trajectory,
    policy: MlpParams,
    value: MlpParams,
    config: AdvGenConfig,
) -> Trajectory:
    """Replaces every state with its adversarial counterpart; actions, rewards and done flags are kept."""
    adversarial, _ = build_adversarial_trajectory_with_stats(trajectory, policy, value, config)
    return adversarial
