from dataclasses import dataclass

import numpy as np

from core.exceptions import NumericError, ShapeError

from .mlp_params import Activation, MlpParams, OutputHead, ParamGradient

LOG_PROB_FLOOR = 1e-8


@dataclass
class ForwardCache:
    """Intermediate values of one batched forward pass, kept for the reverse sweep."""

    layer_inputs: list[np.ndarray]
    hidden_outputs: list[np.ndarray]
    output: np.ndarray


def _as_batch(params: MlpParams, states: np.ndarray) -> np.ndarray:
    batch = np.asarray(states, dtype=np.float64)
    if batch.ndim == 1:
        batch = batch[np.newaxis, :]
    if batch.ndim != 2 or batch.shape[1] != params.input_dim:
        raise ShapeError(params.input_dim, batch.shape[-1] if batch.ndim else 0, "state dimension")
    if not np.all(np.isfinite(batch)):
        raise NumericError("Non-finite state passed to network")
    return batch


def _activate(activation: Activation, pre_activation: np.ndarray) -> np.ndarray:
    if activation is Activation.TANH:
        return np.tanh(pre_activation)
    return np.maximum(pre_activation, 0.0)


def _activation_derivative(activation: Activation, hidden_output: np.ndarray) -> np.ndarray:
    if activation is Activation.TANH:
        return 1.0 - hidden_output**2
    return (hidden_output > 0.0).astype(np.float64)


def mlp_forward(params: MlpParams, states: np.ndarray) -> ForwardCache:
    """Runs a batch of states (N x d) through the network and returns the raw output layer (N x out)."""
    activations = _as_batch(params, states)
    layer_inputs = []
    hidden_outputs = []
    last_layer = params.num_layers - 1

    for index, (weight, bias) in enumerate(zip(params.weights, params.biases, strict=True)):
        layer_inputs.append(activations)
        pre_activation = activations @ weight.T + bias
        if index < last_layer:
            activations = _activate(params.activation, pre_activation)
            hidden_outputs.append(activations)
        else:
            activations = pre_activation

    return ForwardCache(layer_inputs, hidden_outputs, activations)


def mlp_backward(
    params: MlpParams,
    cache: ForwardCache,
    output_gradient: np.ndarray,
) -> tuple[ParamGradient, np.ndarray]:
    """
    Reverse sweep over the static graph.

    Args:
        params: Parameters used for the forward pass.
        cache: Result of :func:`mlp_forward` on the same parameters.
        output_gradient: Derivative of the (already batch-reduced) objective w.r.t. the raw output, N x out.

    Returns:
        Parameter gradient summed over the batch and the per-row input gradient (N x d).
    """
    upstream = np.asarray(output_gradient, dtype=np.float64)
    if upstream.shape != cache.output.shape:
        raise ShapeError(cache.output.shape, upstream.shape, "output gradient")

    weight_grads: list[np.ndarray] = [None] * params.num_layers
    bias_grads: list[np.ndarray] = [None] * params.num_layers

    for index in range(params.num_layers - 1, -1, -1):
        weight_grads[index] = upstream.T @ cache.layer_inputs[index]
        bias_grads[index] = upstream.sum(axis=0)
        upstream = upstream @ params.weights[index]
        if index > 0:
            upstream = upstream * _activation_derivative(params.activation, cache.hidden_outputs[index - 1])

    return ParamGradient(tuple(weight_grads), tuple(bias_grads)), upstream


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - np.max(logits, axis=-1, keepdims=True)
    exponentials = np.exp(shifted)
    return exponentials / np.sum(exponentials, axis=-1, keepdims=True)


def log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - np.max(logits, axis=-1, keepdims=True)
    return shifted - np.log(np.sum(np.exp(shifted), axis=-1, keepdims=True))


def _require_head(params: MlpParams, head: OutputHead) -> None:
    if params.head is not head:
        raise ShapeError(f"{head.value} head", f"{params.head.value} head", "network head")


def policy_probabilities(params: MlpParams, states: np.ndarray) -> np.ndarray:
    _require_head(params, OutputHead.POLICY)
    return softmax(mlp_forward(params, states).output)


def value_predictions(params: MlpParams, states: np.ndarray) -> np.ndarray:
    _require_head(params, OutputHead.VALUE)
    return mlp_forward(params, states).output[:, 0]


def policy_forward(params: MlpParams, state: np.ndarray) -> np.ndarray:
    """Action distribution for a single state."""
    if np.ndim(state) != 1:
        raise ShapeError("1-D state", np.shape(state), "state")
    return policy_probabilities(params, state)[0]


def value_forward(params: MlpParams, state: np.ndarray) -> float:
    """Scalar state-value estimate for a single state."""
    if np.ndim(state) != 1:
        raise ShapeError("1-D state", np.shape(state), "state")
    return float(value_predictions(params, state)[0])


def floored_log_probs(probabilities: np.ndarray, actions: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Log-probability of the chosen actions with the probability floor applied.

    Returns the log-probabilities and a mask that is 0.0 where the floor was active (the gradient vanishes there).
    """
    actions = np.asarray(actions, dtype=np.int64)
    chosen = probabilities[np.arange(len(actions)), actions]
    floored = np.maximum(chosen, LOG_PROB_FLOOR)
    active = (chosen > LOG_PROB_FLOOR).astype(np.float64)
    return np.log(floored), active


def action_log_probs(params: MlpParams, states: np.ndarray, actions: np.ndarray) -> np.ndarray:
    probabilities = policy_probabilities(params, states)
    actions = np.asarray(actions, dtype=np.int64)
    if actions.shape != (probabilities.shape[0],):
        raise ShapeError((probabilities.shape[0],), actions.shape, "action batch")
    if np.any(actions < 0) or np.any(actions >= params.output_dim):
        raise ShapeError(f"actions in [0, {params.output_dim})", actions, "action index")
    log_probs, _ = floored_log_probs(probabilities, actions)
    return log_probs
