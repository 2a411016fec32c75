from collections.abc import Sequence

from core.autodiff.mlp_params import MlpParams
from core.autodiff.objectives import PolicyGradientLoss, PpoClipLoss, evaluate_objective
from core.rollout.transition import Transition, TransitionBatch


def _as_batch(batch: TransitionBatch | Sequence[Transition]) -> TransitionBatch:
    if isinstance(batch, TransitionBatch):
        return batch
    return TransitionBatch.from_transitions(batch)


def pg_objective(policy: MlpParams, batch: TransitionBatch | Sequence[Transition]) -> float:
    """Mean of log pi(a|s) * A over the batch."""
    return evaluate_objective(PolicyGradientLoss(), policy, _as_batch(batch))


def ppo_clip_objective(policy: MlpParams, batch: TransitionBatch | Sequence[Transition], clip_eps: float) -> float:
    """Mean of min(rho * A, clip(rho, 1 - eps, 1 + eps) * A), rho taken against the stored behaviour log-probs."""
    return evaluate_objective(PpoClipLoss(clip_eps=clip_eps), policy, _as_batch(batch))
