import logging
import os
from unittest.mock import Mock, mock_open, patch

import pytest

from config.config_manager import ConfigManager, build_experiment_config, parse_flat_config
from config.config_validator import ConfigValidator
from config.exceptions import ConfigFileNotFoundError, ConfigParseError, ConfigValidationError
from core.autodiff.mlp_params import Activation
from core.envgen.env_family import EnvFamily
from core.ppo.augmentation_mode import AugmentationMode
from core.rollout.advantage_estimator import AdvantageEstimator

SAMPLE_CONFIG = os.path.join(os.path.dirname(__file__), "..", "..", "config", "experiment.cfg")


class TestConfigManager:
    @pytest.fixture
    def mock_validator(self):
        return Mock(spec=ConfigValidator)

    @pytest.fixture
    def config_manager(self, mock_validator, valid_config_text):
        mocked_open = mock_open(read_data=valid_config_text)
        with patch("builtins.open", mocked_open), patch("os.path.exists", return_value=True):
            return ConfigManager("experiment.cfg", mock_validator)

    def test_load_config_valid(self, config_manager, valid_config, mock_validator):
        mock_validator.validate.assert_called_once_with(valid_config)
        assert config_manager.config == valid_config

    def test_load_config_file_not_found(self, mock_validator):
        with patch("os.path.exists", return_value=False), pytest.raises(ConfigFileNotFoundError):
            ConfigManager("experiment.cfg", mock_validator)

    def test_load_config_duplicate_key(self, mock_validator):
        mocked_open = mock_open(read_data="ppo.nu = 0.5\nppo.nu = 0.25\n")
        with (
            patch("builtins.open", mocked_open),
            patch("os.path.exists", return_value=True),
            pytest.raises(ConfigParseError) as excinfo,
        ):
            ConfigManager("experiment.cfg", mock_validator)
        assert excinfo.value.line == 2
        assert "experiment.cfg:2" in str(excinfo.value)

    def test_load_config_line_without_separator(self, mock_validator):
        mocked_open = mock_open(read_data="ppo.nu 0.5\n")
        with (
            patch("builtins.open", mocked_open),
            patch("os.path.exists", return_value=True),
            pytest.raises(ConfigParseError),
        ):
            ConfigManager("experiment.cfg", mock_validator)

    def test_get_experiment_config(self, config_manager):
        experiment = config_manager.get_experiment_config()
        assert experiment.families == (EnvFamily.LINE_WORLD,)
        assert experiment.num_levels == 10
        assert experiment.xi == 0.5
        assert experiment.split_seed == 3
        assert experiment.seeds == (0, 1)
        assert experiment.modes == (AugmentationMode.PPO, AugmentationMode.PAADA_MIXUP)
        assert experiment.eval_every == 5
        assert experiment.episodes_per_level == 1

    def test_get_ppo_config(self, config_manager):
        ppo = config_manager.get_ppo_config()
        assert ppo.rollout_length == 32
        assert ppo.max_trajectories == 4
        assert ppo.policy_lr == pytest.approx(0.001)
        assert ppo.total_epochs == 20
        assert ppo.pretrain_epochs == 5
        assert ppo.advantage_estimator is AdvantageEstimator.GAE
        assert ppo.value_lr == pytest.approx(5e-4)

    def test_get_adv_gen_config(self, config_manager):
        adv = config_manager.get_adv_gen_config()
        assert adv.stepsize == 10.0
        assert adv.lagrangian == 0.01
        assert adv.max_steps == 50
        assert adv.value_detached is False

    def test_get_mixup_config_auto_beta(self, config_manager):
        mixup = config_manager.get_mixup_config()
        assert mixup.alpha == 0.2
        assert mixup.beta == 0.5
        assert mixup.forced_lambda is None

    def test_get_network_config(self, config_manager):
        network = config_manager.get_network_config()
        assert network.hidden_sizes == (16, 16)
        assert network.activation is Activation.RELU

    def test_get_logging_settings(self, config_manager):
        assert config_manager.get_logging_level() == logging.DEBUG
        assert config_manager.should_log_to_file() is True

    def test_get_with_default(self, config_manager):
        assert config_manager.get("ppo.nu") == 0.5
        assert config_manager.get("adv.max_steps", 7) == 7

    def test_apply_overrides(self, config_manager):
        config_manager.apply_overrides({"experiment.xi": "1.0", "experiment.seeds": "4", "experiment.output_dir": None})
        experiment = config_manager.get_experiment_config()
        assert experiment.xi == 1.0
        assert experiment.seeds == (4,)
        assert experiment.output_dir == "runs"
        # auto beta follows the overridden training fraction
        assert experiment.mixup.beta == 0.2


class TestConfigManagerWithFiles:
    def test_defaults_for_missing_keys(self, tmp_path):
        config_file = tmp_path / "empty.cfg"
        config_file.write_text("# nothing set\n")
        config_manager = ConfigManager(str(config_file), ConfigValidator())

        experiment = config_manager.get_experiment_config()
        assert experiment.num_levels == 100
        assert experiment.xi == 0.25
        assert experiment.mixup.beta == 1.0
        assert config_manager.get_logging_level() == logging.INFO
        assert config_manager.should_log_to_file() is False

    def test_invalid_value_rejected(self, tmp_path):
        config_file = tmp_path / "bad.cfg"
        config_file.write_text("experiment.xi = 0\n")
        with pytest.raises(ConfigValidationError, match="experiment.xi"):
            ConfigManager(str(config_file), ConfigValidator())

    def test_sample_config_is_valid(self):
        config_manager = ConfigManager(SAMPLE_CONFIG, ConfigValidator())
        experiment = config_manager.get_experiment_config()
        assert experiment.families == (EnvFamily.LINE_WORLD, EnvFamily.GRID_GOAL)
        assert experiment.mixup.beta == 1.0

    def test_resolved_config_round_trips(self, tmp_path, valid_config):
        original = build_experiment_config(valid_config)
        resolved = original.to_flat_dict()

        config_file = tmp_path / "resolved.cfg"
        config_file.write_text("\n".join(f"{key} = {value}" for key, value in resolved.items()))
        second = ConfigManager(str(config_file), ConfigValidator())
        assert second.get_experiment_config() == original


def test_parse_flat_config_keeps_case_and_strips_comments():
    parsed = parse_flat_config("; comment\nexperiment.families = GridGoal\n# another\n", "inline")
    assert parsed == {"experiment.families": "GridGoal"}
