from dataclasses import dataclass
from enum import Enum

import numpy as np

from config.exceptions import ConfigValidationError
from core.exceptions import PreconditionError, ShapeError
from core.rollout.transition import Transition, TransitionBatch

from .mlp import floored_log_probs, log_softmax, mlp_backward, mlp_forward, softmax
from .mlp_params import MlpParams, OutputHead, ParamGradient


@dataclass(frozen=True)
class PpoClipLoss:
    """Clipped surrogate (maximized), optionally with an entropy bonus."""

    clip_eps: float = 0.2
    entropy_coef: float = 0.0


@dataclass(frozen=True)
class PolicyGradientLoss:
    """Plain likelihood-ratio surrogate mean(log pi(a|s) * A) (maximized)."""

    entropy_coef: float = 0.0


@dataclass(frozen=True)
class ValueRegressionLoss:
    """Mean squared error between V(s) and the stored value targets (minimized)."""

    pass


LossSpec = PpoClipLoss | PolicyGradientLoss | ValueRegressionLoss


class InputObjective(Enum):
    LOG_PROB = "log_prob"
    VALUE = "value"
    PAADA = "paada"


def _check_batch(params: MlpParams, batch: TransitionBatch) -> None:
    if len(batch) == 0:
        raise PreconditionError("Objective evaluated on an empty batch")
    if batch.states.shape != (len(batch), params.input_dim):
        raise ShapeError((len(batch), params.input_dim), batch.states.shape, "batch states")


def _entropy_terms(logits: np.ndarray, probabilities: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    log_probabilities = log_softmax(logits)
    entropy = -np.sum(probabilities * log_probabilities, axis=1)
    entropy_gradient = -probabilities * (log_probabilities + entropy[:, np.newaxis])
    return entropy, entropy_gradient


def _objective_and_output_gradient(loss: LossSpec, output: np.ndarray, batch: TransitionBatch):
    batch_size = len(batch)

    if isinstance(loss, ValueRegressionLoss):
        residual = output[:, 0] - batch.value_targets
        output_gradient = np.zeros_like(output)
        output_gradient[:, 0] = 2.0 * residual / batch_size
        return float(np.mean(residual**2)), output_gradient

    probabilities = softmax(output)
    log_probs, active = floored_log_probs(probabilities, batch.actions)
    one_hot = np.eye(output.shape[1])[batch.actions]
    score = (one_hot - probabilities) * active[:, np.newaxis]

    if isinstance(loss, PpoClipLoss):
        ratio = np.exp(log_probs - batch.log_prob_behavior)
        unclipped = ratio * batch.advantages
        clipped = np.clip(ratio, 1.0 - loss.clip_eps, 1.0 + loss.clip_eps) * batch.advantages
        surrogate = np.minimum(unclipped, clipped)
        # the min only passes gradient through the unclipped branch
        log_prob_gradient = np.where(unclipped <= clipped, unclipped, 0.0)
    else:
        surrogate = log_probs * batch.advantages
        log_prob_gradient = batch.advantages

    objective = float(np.mean(surrogate))
    output_gradient = log_prob_gradient[:, np.newaxis] * score / batch_size

    if loss.entropy_coef:
        entropy, entropy_gradient = _entropy_terms(output, probabilities)
        objective += loss.entropy_coef * float(np.mean(entropy))
        output_gradient = output_gradient + loss.entropy_coef * entropy_gradient / batch_size

    return objective, output_gradient


def _required_head(loss: LossSpec) -> OutputHead:
    return OutputHead.VALUE if isinstance(loss, ValueRegressionLoss) else OutputHead.POLICY


def evaluate_objective(loss: LossSpec, params: MlpParams, batch: TransitionBatch) -> float:
    _check_batch(params, batch)
    if params.head is not _required_head(loss):
        raise ShapeError(_required_head(loss).value, params.head.value, "network head")
    objective, _ = _objective_and_output_gradient(loss, mlp_forward(params, batch.states).output, batch)
    return objective


def grad_params(loss: LossSpec, params: MlpParams, batch: TransitionBatch) -> ParamGradient:
    """Exact gradient of the batch-mean objective with respect to every weight and bias."""
    _check_batch(params, batch)
    if params.head is not _required_head(loss):
        raise ShapeError(_required_head(loss).value, params.head.value, "network head")
    cache = mlp_forward(params, batch.states)
    _, output_gradient = _objective_and_output_gradient(loss, cache.output, batch)
    gradient, _ = mlp_backward(params, cache, output_gradient)
    return gradient


def paada_objective_and_gradient(
    policy: MlpParams,
    value: MlpParams,
    states: np.ndarray,
    actions: np.ndarray,
    targets: np.ndarray,
    anchors: np.ndarray,
    gamma_lagr: float,
    value_detached: bool = False,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Row-wise adversarial objective log pi(a|s) * (target - V(s)) + gamma * ||s - anchor||^2 and its state gradient.

    Each row depends on its own inputs only, so a batch can be evaluated in one pass.
    """
    if gamma_lagr < 0:
        raise ConfigValidationError(invalid_fields=["adv.lagrangian"])
    states = np.asarray(states, dtype=np.float64)
    anchors = np.asarray(anchors, dtype=np.float64)
    if anchors.shape != states.shape:
        raise ShapeError(states.shape, anchors.shape, "anchor states")

    policy_cache = mlp_forward(policy, states)
    probabilities = softmax(policy_cache.output)
    log_probs, active = floored_log_probs(probabilities, actions)
    value_cache = mlp_forward(value, states)
    values = value_cache.output[:, 0]
    advantages = np.asarray(targets, dtype=np.float64) - values
    displacement = states - anchors

    objectives = log_probs * advantages + gamma_lagr * np.sum(displacement**2, axis=1)

    one_hot = np.eye(policy.output_dim)[np.asarray(actions, dtype=np.int64)]
    score = (one_hot - probabilities) * active[:, np.newaxis]
    _, gradient = mlp_backward(policy, policy_cache, advantages[:, np.newaxis] * score)
    if not value_detached:
        _, value_gradient = mlp_backward(value, value_cache, -log_probs[:, np.newaxis])
        gradient = gradient + value_gradient
    gradient = gradient + 2.0 * gamma_lagr * displacement
    return objectives, gradient


def grad_input(
    objective: InputObjective,
    policy: MlpParams,
    value: MlpParams,
    transition: Transition,
    anchor: np.ndarray | None = None,
    gamma_lagr: float = 0.0,
    value_detached: bool = False,
) -> np.ndarray:
    """
    Gradient of a scalar objective with respect to the transition's state.

    ``LOG_PROB`` differentiates log pi(a|s), ``VALUE`` differentiates V(s) and ``PAADA`` the anchored adversarial
    objective; ``anchor`` defaults to the state itself.
    """
    if gamma_lagr < 0:
        raise ConfigValidationError(invalid_fields=["adv.lagrangian"])
    state = np.asarray(transition.state, dtype=np.float64)
    anchor = state if anchor is None else np.asarray(anchor, dtype=np.float64)
    if anchor.shape != state.shape:
        raise ShapeError(state.shape, anchor.shape, "anchor state")

    if objective is InputObjective.VALUE:
        cache = mlp_forward(value, state)
        _, gradient = mlp_backward(value, cache, np.ones_like(cache.output))
        return gradient[0]

    if objective is InputObjective.LOG_PROB:
        cache = mlp_forward(policy, state)
        probabilities = softmax(cache.output)
        _, active = floored_log_probs(probabilities, np.array([transition.action]))
        one_hot = np.eye(policy.output_dim)[[transition.action]]
        _, gradient = mlp_backward(policy, cache, (one_hot - probabilities) * active[:, np.newaxis])
        return gradient[0]

    _, gradient = paada_objective_and_gradient(
        policy,
        value,
        state[np.newaxis, :],
        np.array([transition.action]),
        np.array([transition.target]),
        anchor[np.newaxis, :],
        gamma_lagr,
        value_detached,
    )
    return gradient[0]
