import configparser
import logging
import os
from typing import Any

from core.augment.augment_config import AdvGenConfig, MixupConfig, beta_for_xi
from core.ppo.ppo_config import NetworkConfig, PpoConfig
from experiments.experiment_config import ExperimentConfig

from .config_schema import AUTO, parse_value
from .exceptions import ConfigFileNotFoundError, ConfigParseError

ROOT_SECTION = "paada"

PPO_KEYS = {
    "ppo.clip_eps": "clip_eps",
    "ppo.policy_lr": "policy_lr",
    "ppo.value_lr": "value_lr",
    "ppo.update_epochs": "update_epochs",
    "ppo.minibatch_size": "minibatch_size",
    "ppo.entropy_coef": "entropy_coef",
    "ppo.pretrain_epochs": "pretrain_epochs",
    "ppo.discount": "discount",
    "ppo.total_epochs": "total_epochs",
    "ppo.mode": "mode",
    "ppo.nu": "nu",
    "ppo.advantage_estimator": "advantage_estimator",
    "ppo.gae_lambda": "gae_lambda",
    "ppo.normalize_advantages": "normalize_advantages",
    "ppo.adam_beta1": "adam_beta1",
    "ppo.adam_beta2": "adam_beta2",
    "ppo.adam_eps": "adam_eps",
    "ppo.checkpoint_every": "checkpoint_every",
    "rollout.length": "rollout_length",
    "rollout.max_trajectories": "max_trajectories",
}

ADV_KEYS = {
    "adv.stepsize": "stepsize",
    "adv.max_steps": "max_steps",
    "adv.tolerance": "tolerance",
    "adv.lagrangian": "lagrangian",
    "adv.value_detached": "value_detached",
    "adv.clip_to_obs_bounds": "clip_to_obs_bounds",
}

NETWORK_KEYS = {"network.hidden_sizes": "hidden_sizes", "network.activation": "activation"}

EXPERIMENT_KEYS = {
    "experiment.families": "families",
    "experiment.m": "num_levels",
    "experiment.xi": "xi",
    "experiment.split_seed": "split_seed",
    "experiment.seeds": "seeds",
    "experiment.modes": "modes",
    "experiment.output_dir": "output_dir",
    "experiment.eval_every": "eval_every",
    "experiment.episodes_per_level": "episodes_per_level",
    "experiment.eval_discounted": "eval_discounted",
    "experiment.bound_episodes": "bound_episodes",
    "experiment.report_window": "report_window",
    "rollout.dump_trajectories": "dump_trajectories",
}


def _typed_fields(config: dict[str, str], key_map: dict[str, str]) -> dict[str, Any]:
    return {field_name: parse_value(key, config[key]) for key, field_name in key_map.items() if key in config}


def build_ppo_config(config: dict[str, str]) -> PpoConfig:
    return PpoConfig(**_typed_fields(config, PPO_KEYS))


def build_adv_gen_config(config: dict[str, str]) -> AdvGenConfig:
    return AdvGenConfig(**_typed_fields(config, ADV_KEYS))


def build_network_config(config: dict[str, str]) -> NetworkConfig:
    return NetworkConfig(**_typed_fields(config, NETWORK_KEYS))


def build_mixup_config(config: dict[str, str]) -> MixupConfig:
    fields = {}
    if "mixup.alpha" in config:
        fields["alpha"] = parse_value("mixup.alpha", config["mixup.alpha"])
    if "mixup.forced_lambda" in config:
        fields["forced_lambda"] = parse_value("mixup.forced_lambda", config["mixup.forced_lambda"])

    beta = parse_value("mixup.beta", config["mixup.beta"]) if "mixup.beta" in config else AUTO
    if beta == AUTO:
        xi = ExperimentConfig.xi
        if "experiment.xi" in config:
            xi = parse_value("experiment.xi", config["experiment.xi"])
        beta = beta_for_xi(xi)
    return MixupConfig(beta=beta, **fields)


def build_experiment_config(config: dict[str, str]) -> ExperimentConfig:
    return ExperimentConfig(
        ppo=build_ppo_config(config),
        adv=build_adv_gen_config(config),
        mixup=build_mixup_config(config),
        network=build_network_config(config),
        **_typed_fields(config, EXPERIMENT_KEYS),
    )


def parse_flat_config(text: str, source: str) -> dict[str, str]:
    """Parses ``key = value`` lines (``#``/``;`` comments allowed) into a flat dict; duplicate keys are errors."""
    parser = configparser.ConfigParser(interpolation=None, strict=True, comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(f"[{ROOT_SECTION}]\n{text}", source=source)
    except configparser.Error as e:
        raise ConfigParseError(source, e, line_offset=1) from e
    return {key: value.strip() for key, value in parser[ROOT_SECTION].items()}


class ConfigManager:
    def __init__(self, config_file, config_validator):
        self.logger = logging.getLogger(self.__class__.__name__)
        self.config_file = config_file
        self.config_validator = config_validator
        self.config: dict[str, str] = {}
        self.load_config()

    def load_config(self):
        if not os.path.exists(self.config_file):
            self.logger.error(f"Config file {self.config_file} does not exist.")
            raise ConfigFileNotFoundError(self.config_file)

        with open(self.config_file, encoding="utf-8") as file:
            text = file.read()

        try:
            self.config = parse_flat_config(text, self.config_file)
        except ConfigParseError as e:
            self.logger.error(f"Failed to parse {self.config_file} at line {e.line}: {e.original_exception}")
            raise
        self.config_validator.validate(self.config)

    def apply_overrides(self, overrides: dict[str, str]) -> None:
        """Merges command-line overrides (raw strings keyed like the file) and re-validates."""
        merged = {**self.config, **{key: str(value) for key, value in overrides.items() if value is not None}}
        self.config_validator.validate(merged)
        self.config = merged

    def get(self, key, default=None):
        if key not in self.config:
            return default
        return parse_value(key, self.config[key])

    def get_experiment_config(self) -> ExperimentConfig:
        return build_experiment_config(self.config)

    def get_ppo_config(self) -> PpoConfig:
        return build_ppo_config(self.config)

    def get_adv_gen_config(self) -> AdvGenConfig:
        return build_adv_gen_config(self.config)

    def get_mixup_config(self) -> MixupConfig:
        return build_mixup_config(self.config)

    def get_network_config(self) -> NetworkConfig:
        return build_network_config(self.config)

    def get_logging_level(self) -> int:
        level = self.get("logging.log_level", "INFO")
        return getattr(logging, level, logging.INFO)

    def should_log_to_file(self) -> bool:
        return self.get("logging.log_to_file", False)
