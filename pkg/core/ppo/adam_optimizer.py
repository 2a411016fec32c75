import logging

import numpy as np

from core.autodiff.mlp_params import MlpParams, ParamGradient
from core.exceptions import ShapeError


class AdamOptimizer:
    """
    Adam with bias-corrected first and second moments, one state per parameter array.

    ``step`` returns new parameters and never touches the ones passed in.
    """

    def __init__(self, learning_rate: float, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.logger = logging.getLogger(self.__class__.__name__)
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.step_count = 0
        self._first_moments: list[np.ndarray] | None = None
        self._second_moments: list[np.ndarray] | None = None

    def step(self, params: MlpParams, gradient: ParamGradient, maximize: bool = False) -> MlpParams:
        arrays = [*params.weights, *params.biases]
        gradients = [*gradient.weights, *gradient.biases]
        if [array.shape for array in arrays] != [grad.shape for grad in gradients]:
            raise ShapeError([array.shape for array in arrays], [grad.shape for grad in gradients], "gradient")

        if self._first_moments is None:
            self._first_moments = [np.zeros_like(array) for array in arrays]
            self._second_moments = [np.zeros_like(array) for array in arrays]

        self.step_count += 1
        first_correction = 1.0 - self.beta1**self.step_count
        second_correction = 1.0 - self.beta2**self.step_count
        direction = 1.0 if maximize else -1.0

        updated = []
        for index, (array, grad) in enumerate(zip(arrays, gradients, strict=True)):
            self._first_moments[index] = self.beta1 * self._first_moments[index] + (1.0 - self.beta1) * grad
            self._second_moments[index] = self.beta2 * self._second_moments[index] + (1.0 - self.beta2) * grad**2
            first_hat = self._first_moments[index] / first_correction
            second_hat = self._second_moments[index] / second_correction
            step = self.learning_rate * first_hat / (np.sqrt(second_hat) + self.eps)
            updated.append(array + direction * step)

        layer_count = params.num_layers
        return params.with_arrays(updated[:layer_count], updated[layer_count:])
