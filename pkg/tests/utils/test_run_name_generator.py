from unittest.mock import patch

from core.envgen.env_family import EnvFamily
from core.ppo.augmentation_mode import AugmentationMode
from core.ppo.ppo_config import PpoConfig
from experiments.experiment_config import ExperimentConfig
from utils.run_name_generator import generate_run_name


@patch("utils.run_name_generator.datetime")
def test_generate_run_name(mock_datetime):
    mock_datetime.now.return_value.strftime.return_value = "20241220_120000"
    config = ExperimentConfig(
        families=(EnvFamily.LINE_WORLD, EnvFamily.GRID_GOAL),
        num_levels=100,
        xi=0.25,
        modes=(AugmentationMode.PPO, AugmentationMode.PAADA_MIXUP),
        ppo=PpoConfig(total_epochs=600),
    )

    result = generate_run_name(config)

    assert result == "paada_LineWorld-GridGoal_m100_xi0.25_modesppo-paada_mixup_epochs600_20241220_120000"


def test_generate_run_name_single_family():
    config = ExperimentConfig(families=(EnvFamily.GRID_GOAL,), num_levels=5, xi=1.0)
    result = generate_run_name(config)
    assert result.startswith("paada_GridGoal_m5_xi1.0_")
    assert "+" not in result
