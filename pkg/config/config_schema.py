from collections.abc import Callable
import logging
from typing import Any

from core.autodiff.mlp_params import Activation
from core.envgen.env_family import EnvFamily
from core.ppo.augmentation_mode import AugmentationMode
from core.rollout.advantage_estimator import AdvantageEstimator

AUTO = "auto"
NONE = "none"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"Invalid boolean: '{raw}'")


def parse_list(raw: str) -> list[str]:
    return [item.strip() for item in raw.split(",") if item.strip()]


def parse_int_list(raw: str) -> tuple[int, ...]:
    return tuple(int(item) for item in parse_list(raw))


def parse_optional_float(raw: str) -> float | None:
    return None if raw.strip().lower() == NONE else float(raw)


def parse_auto_float(raw: str) -> float | str:
    return AUTO if raw.strip().lower() == AUTO else float(raw)


def parse_log_level(raw: str) -> str:
    level = raw.strip().upper()
    if level not in LOG_LEVELS:
        raise ValueError(f"Invalid log level: '{raw}'. Available levels are: {', '.join(LOG_LEVELS)}")
    return level


CONFIG_SCHEMA: dict[str, Callable[[str], Any]] = {
    "experiment.families": lambda raw: tuple(EnvFamily.from_string(item) for item in parse_list(raw)),
    "experiment.m": int,
    "experiment.xi": float,
    "experiment.split_seed": int,
    "experiment.seeds": parse_int_list,
    "experiment.modes": lambda raw: tuple(AugmentationMode.from_string(item) for item in parse_list(raw)),
    "experiment.output_dir": str.strip,
    "experiment.eval_every": int,
    "experiment.episodes_per_level": int,
    "experiment.eval_discounted": parse_bool,
    "experiment.bound_episodes": int,
    "experiment.report_window": int,
    "network.hidden_sizes": parse_int_list,
    "network.activation": lambda raw: Activation.from_string(raw.strip()),
    "rollout.length": int,
    "rollout.max_trajectories": int,
    "rollout.dump_trajectories": parse_bool,
    "ppo.clip_eps": float,
    "ppo.policy_lr": float,
    "ppo.value_lr": float,
    "ppo.update_epochs": int,
    "ppo.minibatch_size": int,
    "ppo.entropy_coef": float,
    "ppo.pretrain_epochs": int,
    "ppo.discount": float,
    "ppo.total_epochs": int,
    "ppo.mode": lambda raw: AugmentationMode.from_string(raw.strip()),
    "ppo.nu": float,
    "ppo.advantage_estimator": lambda raw: AdvantageEstimator.from_string(raw.strip()),
    "ppo.gae_lambda": float,
    "ppo.normalize_advantages": parse_bool,
    "ppo.adam_beta1": float,
    "ppo.adam_beta2": float,
    "ppo.adam_eps": float,
    "ppo.checkpoint_every": int,
    "adv.stepsize": float,
    "adv.max_steps": int,
    "adv.tolerance": float,
    "adv.lagrangian": float,
    "adv.value_detached": parse_bool,
    "adv.clip_to_obs_bounds": parse_bool,
    "mixup.alpha": float,
    "mixup.beta": parse_auto_float,
    "mixup.forced_lambda": parse_optional_float,
    "logging.log_level": parse_log_level,
    "logging.log_to_file": parse_bool,
}


def parse_value(key: str, raw: str) -> Any:
    """Converts one raw string value; raises KeyError for unknown keys and ValueError for malformed values."""
    converter = CONFIG_SCHEMA[key]
    try:
        return converter(raw)
    except ValueError:
        logging.debug(f"Could not parse {key} = '{raw}'")
        raise
