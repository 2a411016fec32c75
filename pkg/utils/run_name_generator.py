from datetime import datetime, timezone
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from experiments.experiment_config import ExperimentConfig

UTC = timezone.utc


def generate_run_name(config: "ExperimentConfig") -> str:
    """
    Generates a unique and descriptive name for an experiment run.

    Args:
        config (ExperimentConfig): Experiment settings to summarize.

    Returns:
        str: A name including families, level count, training fraction, modes, epochs and a UTC timestamp.
    """
    families = "-".join(family.value for family in config.families)
    modes = "-".join(mode.value.replace("+", "_") for mode in config.modes)
    start_time = datetime.now(tz=UTC).strftime("%Y%m%d_%H%M%S")

    return (
        f"paada_{families}_m{config.num_levels}_xi{config.xi}_"
        f"modes{modes}_epochs{config.ppo.total_epochs}_{start_time}"
    )
