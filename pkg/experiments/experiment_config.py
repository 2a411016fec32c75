from dataclasses import dataclass, field

from config.exceptions import ConfigValidationError
from core.augment.augment_config import AdvGenConfig, MixupConfig
from core.envgen.env_family import EnvFamily
from core.ppo.augmentation_mode import AugmentationMode
from core.ppo.ppo_config import NetworkConfig, PpoConfig


@dataclass(frozen=True)
class ExperimentConfig:
    families: tuple[EnvFamily, ...] = (EnvFamily.LINE_WORLD, EnvFamily.GRID_GOAL)
    num_levels: int = 100
    xi: float = 0.25
    split_seed: int = 0
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)
    modes: tuple[AugmentationMode, ...] = (AugmentationMode.PPO, AugmentationMode.PAADA_MIXUP)
    ppo: PpoConfig = field(default_factory=PpoConfig)
    adv: AdvGenConfig = field(default_factory=AdvGenConfig)
    mixup: MixupConfig = field(default_factory=MixupConfig)
    network: NetworkConfig = field(default_factory=NetworkConfig)
    output_dir: str = "runs"
    eval_every: int = 10
    episodes_per_level: int = 1
    eval_discounted: bool = False
    bound_episodes: int = 4
    report_window: int = 100
    dump_trajectories: bool = False

    def __post_init__(self):
        checks = {
            "experiment.families": len(self.families) > 0,
            "experiment.m": self.num_levels >= 1,
            "experiment.xi": 0.0 < self.xi <= 1.0,
            "experiment.seeds": len(self.seeds) > 0,
            "experiment.modes": len(self.modes) > 0,
            "experiment.eval_every": self.eval_every >= 1,
            "experiment.episodes_per_level": self.episodes_per_level >= 1,
            "experiment.bound_episodes": self.bound_episodes >= 1,
            "experiment.report_window": self.report_window >= 1,
        }
        invalid_fields = [name for name, valid in checks.items() if not valid]
        if invalid_fields:
            raise ConfigValidationError(invalid_fields=invalid_fields)

    def to_flat_dict(self) -> dict[str, str]:
        """Resolved key-value form, in the same syntax the configuration file uses."""
        ppo = self.ppo
        return {
            "experiment.families": ", ".join(family.value for family in self.families),
            "experiment.m": str(self.num_levels),
            "experiment.xi": repr(self.xi),
            "experiment.split_seed": str(self.split_seed),
            "experiment.seeds": ", ".join(str(seed) for seed in self.seeds),
            "experiment.modes": ", ".join(mode.value for mode in self.modes),
            "experiment.output_dir": self.output_dir,
            "experiment.eval_every": str(self.eval_every),
            "experiment.episodes_per_level": str(self.episodes_per_level),
            "experiment.eval_discounted": str(self.eval_discounted).lower(),
            "experiment.bound_episodes": str(self.bound_episodes),
            "experiment.report_window": str(self.report_window),
            "network.hidden_sizes": ", ".join(str(size) for size in self.network.hidden_sizes),
            "network.activation": self.network.activation.value,
            "rollout.length": str(ppo.rollout_length),
            "rollout.max_trajectories": str(ppo.max_trajectories),
            "rollout.dump_trajectories": str(self.dump_trajectories).lower(),
            "ppo.clip_eps": repr(ppo.clip_eps),
            "ppo.policy_lr": repr(ppo.policy_lr),
            "ppo.value_lr": repr(ppo.value_lr),
            "ppo.update_epochs": str(ppo.update_epochs),
            "ppo.minibatch_size": str(ppo.minibatch_size),
            "ppo.entropy_coef": repr(ppo.entropy_coef),
            "ppo.pretrain_epochs": str(ppo.pretrain_epochs),
            "ppo.discount": repr(ppo.discount),
            "ppo.total_epochs": str(ppo.total_epochs),
            "ppo.mode": ppo.mode.value,
            "ppo.nu": repr(ppo.nu),
            "ppo.advantage_estimator": ppo.advantage_estimator.value,
            "ppo.gae_lambda": repr(ppo.gae_lambda),
            "ppo.normalize_advantages": str(ppo.normalize_advantages).lower(),
            "ppo.adam_beta1": repr(ppo.adam_beta1),
            "ppo.adam_beta2": repr(ppo.adam_beta2),
            "ppo.adam_eps": repr(ppo.adam_eps),
            "ppo.checkpoint_every": str(ppo.checkpoint_every),
            "adv.stepsize": repr(self.adv.stepsize),
            "adv.max_steps": str(self.adv.max_steps),
            "adv.tolerance": repr(self.adv.tolerance),
            "adv.lagrangian": repr(self.adv.lagrangian),
            "adv.value_detached": str(self.adv.value_detached).lower(),
            "adv.clip_to_obs_bounds": str(self.adv.clip_to_obs_bounds).lower(),
            "mixup.alpha": repr(self.mixup.alpha),
            "mixup.beta": repr(self.mixup.beta),
            "mixup.forced_lambda": "none" if self.mixup.forced_lambda is None else repr(self.mixup.forced_lambda),
        }
