import numpy as np
import pytest

from core.augment.augment_config import AdvGenConfig
from core.autodiff.mlp_params import Activation, OutputHead, init_mlp
from core.envgen.env_family import EnvFamily
from core.envgen.environment_factory import make_env
from core.envgen.level_spec import LevelSpec
from core.ppo.augmentation_mode import AugmentationMode
from core.ppo.ppo_config import NetworkConfig, PpoConfig
from core.rollout.advantage_estimator import AdvantageEstimator, compute_advantages
from core.rollout.trajectory_collector import collect_trajectory
from experiments.experiment_config import ExperimentConfig


@pytest.fixture
def valid_config():
    """Fixture providing a valid flat configuration, as read from a key-value file."""
    return {
        "experiment.families": "LineWorld",
        "experiment.m": "10",
        "experiment.xi": "0.5",
        "experiment.split_seed": "3",
        "experiment.seeds": "0, 1",
        "experiment.modes": "ppo, paada+mixup",
        "experiment.output_dir": "runs",
        "experiment.eval_every": "5",
        "network.hidden_sizes": "16, 16",
        "network.activation": "relu",
        "rollout.length": "32",
        "rollout.max_trajectories": "4",
        "ppo.clip_eps": "0.2",
        "ppo.policy_lr": "0.001",
        "ppo.total_epochs": "20",
        "ppo.pretrain_epochs": "5",
        "ppo.nu": "0.5",
        "ppo.advantage_estimator": "gae",
        "adv.stepsize": "10.0",
        "adv.lagrangian": "0.01",
        "mixup.alpha": "0.2",
        "mixup.beta": "auto",
        "mixup.forced_lambda": "none",
        "logging.log_level": "DEBUG",
        "logging.log_to_file": "true",
    }


@pytest.fixture
def valid_config_text(valid_config):
    lines = ["# test configuration", *[f"{key} = {value}" for key, value in valid_config.items()]]
    return "\n".join(lines) + "\n"


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def line_world_networks(rng):
    """Small policy and value networks sized for LineWorld observations."""
    family = EnvFamily.LINE_WORLD
    policy = init_mlp([family.observation_dim, 8, family.num_actions], Activation.TANH, OutputHead.POLICY, rng)
    value = init_mlp([family.observation_dim, 8, 1], Activation.TANH, OutputHead.VALUE, rng)
    return policy, value


@pytest.fixture
def line_world_levels():
    return [LevelSpec(EnvFamily.LINE_WORLD, seed) for seed in range(4)]


@pytest.fixture
def small_ppo_config():
    return PpoConfig(
        rollout_length=32,
        max_trajectories=4,
        total_epochs=3,
        pretrain_epochs=1,
        minibatch_size=32,
        update_epochs=1,
    )


@pytest.fixture
def small_network_config():
    return NetworkConfig(hidden_sizes=(8,))


@pytest.fixture
def line_world_trajectory(line_world_networks):
    """A 32-step LineWorld rollout with return-based advantages filled in."""
    policy, value = line_world_networks
    trajectory = collect_trajectory(
        policy,
        value,
        make_env(LevelSpec(EnvFamily.LINE_WORLD, 0)),
        32,
        np.random.default_rng(5),
    )
    return compute_advantages(trajectory, value, AdvantageEstimator.RETURNS, discount=0.99)


@pytest.fixture
def small_experiment_config(tmp_path):
    """A two-epoch LineWorld experiment small enough to run end to end in a test."""
    return ExperimentConfig(
        families=(EnvFamily.LINE_WORLD,),
        num_levels=6,
        xi=0.5,
        split_seed=1,
        seeds=(0,),
        modes=(AugmentationMode.PPO, AugmentationMode.PAADA),
        ppo=PpoConfig(rollout_length=16, max_trajectories=2, total_epochs=2, pretrain_epochs=1, minibatch_size=16),
        adv=AdvGenConfig(max_steps=3),
        network=NetworkConfig(hidden_sizes=(8,)),
        output_dir=str(tmp_path / "runs"),
        eval_every=1,
        bound_episodes=1,
    )
