from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
import hashlib

import numpy as np

from core.exceptions import NumericError, ShapeError


class Activation(Enum):
    TANH = "tanh"
    RELU = "relu"

    @staticmethod
    def from_string(activation_str: str):
        try:
            return Activation(activation_str)
        except ValueError:
            available_activations = ", ".join([activation.value for activation in Activation])
            raise ValueError(
                f"Invalid activation: '{activation_str}'. Available activations are: {available_activations}",
            ) from None

    @property
    def code(self) -> int:
        return 0 if self is Activation.TANH else 1

    @staticmethod
    def from_code(code: int) -> Activation:
        return Activation.TANH if code == 0 else Activation.RELU


class OutputHead(Enum):
    POLICY = "policy"
    VALUE = "value"

    @property
    def code(self) -> int:
        return 0 if self is OutputHead.POLICY else 1

    @staticmethod
    def from_code(code: int) -> OutputHead:
        return OutputHead.POLICY if code == 0 else OutputHead.VALUE


def _frozen(array: np.ndarray) -> np.ndarray:
    frozen = np.array(array, dtype=np.float64, copy=True)
    frozen.setflags(write=False)
    return frozen


@dataclass(frozen=True)
class MlpParams:
    """
    Parameters of a fully connected network.

    Layer ``i`` maps ``weights[i].shape[1]`` inputs to ``weights[i].shape[0]`` outputs. Hidden layers use
    ``activation``; the output layer is linear and ``head`` decides how the raw output is read
    (softmax over actions or a scalar value). Arrays are stored read-only, every update builds a new instance.
    """

    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]
    activation: Activation = Activation.TANH
    head: OutputHead = OutputHead.POLICY

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(_frozen(weight) for weight in self.weights))
        object.__setattr__(self, "biases", tuple(_frozen(bias) for bias in self.biases))
        self.validate()

    def validate(self) -> None:
        if not self.weights or len(self.weights) != len(self.biases):
            raise ShapeError(f"{len(self.weights)} biases", f"{len(self.biases)} biases", "layer list")

        for index, (weight, bias) in enumerate(zip(self.weights, self.biases, strict=True)):
            if weight.ndim != 2:
                raise ShapeError("2-D weight matrix", weight.shape, f"layer {index} weights")
            if bias.shape != (weight.shape[0],):
                raise ShapeError((weight.shape[0],), bias.shape, f"layer {index} bias")
            if index > 0 and weight.shape[1] != self.weights[index - 1].shape[0]:
                raise ShapeError(self.weights[index - 1].shape[0], weight.shape[1], f"layer {index} input width")
            if not (np.all(np.isfinite(weight)) and np.all(np.isfinite(bias))):
                raise NumericError(f"Non-finite parameters in layer {index}")

        if self.head is OutputHead.VALUE and self.output_dim != 1:
            raise ShapeError(1, self.output_dim, "value head output width")

    @property
    def input_dim(self) -> int:
        return self.weights[0].shape[1]

    @property
    def output_dim(self) -> int:
        return self.weights[-1].shape[0]

    @property
    def num_layers(self) -> int:
        return len(self.weights)

    @property
    def num_parameters(self) -> int:
        return sum(weight.size + bias.size for weight, bias in zip(self.weights, self.biases, strict=True))

    def layer_sizes(self) -> list[int]:
        return [self.input_dim] + [weight.shape[0] for weight in self.weights]

    def copy(self) -> MlpParams:
        return MlpParams(self.weights, self.biases, self.activation, self.head)

    def with_arrays(self, weights: Sequence[np.ndarray], biases: Sequence[np.ndarray]) -> MlpParams:
        return MlpParams(tuple(weights), tuple(biases), self.activation, self.head)

    def flatten(self) -> np.ndarray:
        parts = [weight.ravel() for weight in self.weights] + [bias.ravel() for bias in self.biases]
        return np.concatenate(parts)

    def unflatten(self, vector: np.ndarray) -> MlpParams:
        vector = np.asarray(vector, dtype=np.float64)
        if vector.shape != (self.num_parameters,):
            raise ShapeError((self.num_parameters,), vector.shape, "flat parameter vector")

        offset = 0
        weights = []
        for weight in self.weights:
            weights.append(vector[offset : offset + weight.size].reshape(weight.shape))
            offset += weight.size
        biases = []
        for bias in self.biases:
            biases.append(vector[offset : offset + bias.size].reshape(bias.shape))
            offset += bias.size
        return self.with_arrays(weights, biases)

    def checksum(self) -> str:
        digest = hashlib.sha256()
        digest.update(f"{self.activation.value}:{self.head.value}".encode())
        for weight, bias in zip(self.weights, self.biases, strict=True):
            digest.update(weight.astype("<f8").tobytes())
            digest.update(bias.astype("<f8").tobytes())
        return digest.hexdigest()


@dataclass(frozen=True)
class ParamGradient:
    """Gradient with the exact shapes of the :class:`MlpParams` it was taken against."""

    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]

    def global_norm(self) -> float:
        squares = sum(float(np.sum(weight**2)) for weight in self.weights)
        squares += sum(float(np.sum(bias**2)) for bias in self.biases)
        return float(np.sqrt(squares))

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(array)) for array in (*self.weights, *self.biases))

    def flatten(self) -> np.ndarray:
        parts = [weight.ravel() for weight in self.weights] + [bias.ravel() for bias in self.biases]
        return np.concatenate(parts)

    @staticmethod
    def zeros_like(params: MlpParams) -> ParamGradient:
        return ParamGradient(
            tuple(np.zeros_like(weight) for weight in params.weights),
            tuple(np.zeros_like(bias) for bias in params.biases),
        )


def init_mlp(
    layer_sizes: Sequence[int],
    activation: Activation,
    head: OutputHead,
    rng: np.random.Generator,
) -> MlpParams:
    """
    Builds a network with Glorot-uniform weights and zero biases.

    Args:
        layer_sizes: Widths from input to output, e.g. ``[24, 64, 64, 2]``.
        activation: Hidden-layer nonlinearity.
        head: Output interpretation.
        rng: Generator used for every weight draw.
    """
    if len(layer_sizes) < 2 or any(size < 1 for size in layer_sizes):
        raise ShapeError("at least two positive layer sizes", list(layer_sizes), "layer sizes")

    weights = []
    biases = []
    for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:], strict=True):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return MlpParams(tuple(weights), tuple(biases), activation, head)
