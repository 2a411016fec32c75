from collections.abc import Sequence
import logging

import numpy as np

from core.autodiff.mlp_params import MlpParams
from core.autodiff.objectives import LossSpec, PpoClipLoss, ValueRegressionLoss, grad_params
from core.exceptions import NumericError, PreconditionError
from core.rollout.transition import Transition, TransitionBatch

from .adam_optimizer import AdamOptimizer
from .ppo_config import PpoConfig


def minibatch_indices(size: int, minibatch_size: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Shuffled index blocks covering ``size`` samples; the last block may be smaller."""
    order = rng.permutation(size)
    return [order[start : start + minibatch_size] for start in range(0, size, minibatch_size)]


class PpoUpdater:
    """
    Holds one Adam state per network and applies the clipped-surrogate and value-regression updates.

    Optimizer moments persist across training epochs.
    """

    def __init__(self, config: PpoConfig):
        self.logger = logging.getLogger(self.__class__.__name__)
        self.config = config
        self.policy_optimizer = AdamOptimizer(config.policy_lr, config.adam_beta1, config.adam_beta2, config.adam_eps)
        self.value_optimizer = AdamOptimizer(config.value_lr, config.adam_beta1, config.adam_beta2, config.adam_eps)

    def update_policy(self, policy: MlpParams, batch: TransitionBatch, rng: np.random.Generator) -> MlpParams:
        loss = PpoClipLoss(clip_eps=self.config.clip_eps, entropy_coef=self.config.entropy_coef)
        return self._run_updates(policy, batch, rng, loss, self.policy_optimizer, maximize=True, name="policy")

    def update_value(self, value: MlpParams, batch: TransitionBatch, rng: np.random.Generator) -> MlpParams:
        return self._run_updates(
            value,
            batch,
            rng,
            ValueRegressionLoss(),
            self.value_optimizer,
            maximize=False,
            name="value",
        )

    def _run_updates(
        self,
        params: MlpParams,
        batch: TransitionBatch,
        rng: np.random.Generator,
        loss: LossSpec,
        optimizer: AdamOptimizer,
        maximize: bool,
        name: str,
    ) -> MlpParams:
        if len(batch) == 0:
            raise PreconditionError(f"Cannot update the {name} network on an empty batch")

        for update_epoch in range(1, self.config.update_epochs + 1):
            for minibatch_index, indices in enumerate(minibatch_indices(len(batch), self.config.minibatch_size, rng)):
                gradient = grad_params(loss, params, batch.subset(indices))
                if not gradient.is_finite():
                    raise NumericError(
                        f"Non-finite {name} gradient",
                        step=update_epoch,
                        diagnostics={"minibatch": minibatch_index, "grad_norm": gradient.global_norm()},
                    )
                params = optimizer.step(params, gradient, maximize=maximize)

        self.logger.debug(f"Applied {optimizer.step_count} cumulative {name} optimizer steps")
        return params


def update_policy(
    policy: MlpParams,
    transitions: TransitionBatch | Sequence[Transition],
    config: PpoConfig,
    optimizer: AdamOptimizer | None = None,
    rng: np.random.Generator | None = None,
) -> MlpParams:
    """Ascends the clipped surrogate plus entropy bonus for ``update_epochs`` passes of shuffled minibatches."""
    updater = PpoUpdater(config)
    if optimizer is not None:
        updater.policy_optimizer = optimizer
    batch = transitions if isinstance(transitions, TransitionBatch) else TransitionBatch.from_transitions(transitions)
    return updater.update_policy(policy, batch, rng or np.random.default_rng(0))


def update_value(
    value: MlpParams,
    transitions: TransitionBatch | Sequence[Transition],
    config: PpoConfig,
    optimizer: AdamOptimizer | None = None,
    rng: np.random.Generator | None = None,
) -> MlpParams:
    """Descends the squared error between V(s) and the stored value targets."""
    updater = PpoUpdater(config)
    if optimizer is not None:
        updater.value_optimizer = optimizer
    batch = transitions if isinstance(transitions, TransitionBatch) else TransitionBatch.from_transitions(transitions)
    return updater.update_value(value, batch, rng or np.random.default_rng(0))
