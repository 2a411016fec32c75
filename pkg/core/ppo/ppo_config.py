from dataclasses import dataclass

from config.exceptions import ConfigValidationError
from core.autodiff.mlp_params import Activation
from core.rollout.advantage_estimator import AdvantageEstimator

from .augmentation_mode import AugmentationMode


@dataclass(frozen=True)
class PpoConfig:
    clip_eps: float = 0.2
    policy_lr: float = 5e-4
    value_lr: float = 5e-4
    update_epochs: int = 3
    minibatch_size: int = 64
    entropy_coef: float = 0.01
    pretrain_epochs: int = 50
    discount: float = 0.999
    total_epochs: int = 600
    mode: AugmentationMode = AugmentationMode.PPO
    nu: float = 0.5
    advantage_estimator: AdvantageEstimator = AdvantageEstimator.IMMEDIATE
    gae_lambda: float = 0.95
    normalize_advantages: bool = False
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    checkpoint_every: int = 0
    rollout_length: int = 256
    max_trajectories: int = 64

    def __post_init__(self):
        checks = {
            "ppo.clip_eps": 0.0 < self.clip_eps < 1.0,
            "ppo.policy_lr": self.policy_lr >= 0.0,
            "ppo.value_lr": self.value_lr >= 0.0,
            "ppo.update_epochs": self.update_epochs >= 1,
            "ppo.minibatch_size": self.minibatch_size >= 1,
            "ppo.entropy_coef": self.entropy_coef >= 0.0,
            "ppo.pretrain_epochs": self.pretrain_epochs >= 0,
            "ppo.discount": 0.0 <= self.discount <= 1.0,
            "ppo.total_epochs": self.total_epochs >= 1,
            "ppo.nu": 0.0 <= self.nu <= 1.0,
            "ppo.gae_lambda": 0.0 <= self.gae_lambda <= 1.0,
            "ppo.adam_beta1": 0.0 <= self.adam_beta1 < 1.0,
            "ppo.adam_beta2": 0.0 <= self.adam_beta2 < 1.0,
            "ppo.adam_eps": self.adam_eps > 0.0,
            "ppo.checkpoint_every": self.checkpoint_every >= 0,
            "rollout.length": self.rollout_length >= 1,
            "rollout.max_trajectories": self.max_trajectories >= 1,
        }
        invalid_fields = [name for name, valid in checks.items() if not valid]
        if invalid_fields:
            raise ConfigValidationError(invalid_fields=invalid_fields)


@dataclass(frozen=True)
class NetworkConfig:
    hidden_sizes: tuple[int, ...] = (64, 64)
    activation: Activation = Activation.TANH

    def __post_init__(self):
        if not self.hidden_sizes or any(size < 1 for size in self.hidden_sizes):
            raise ConfigValidationError(invalid_fields=["network.hidden_sizes"])
