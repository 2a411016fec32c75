from dataclasses import dataclass
from fractions import Fraction
import logging
import math

import numpy as np

from .env_family import EnvFamily
from .exceptions import InvalidSplitError
from .level_spec import LevelSpec

FAMILY_STREAM = {EnvFamily.LINE_WORLD: 0, EnvFamily.GRID_GOAL: 1}


@dataclass(frozen=True)
class LevelSplit:
    train: tuple[LevelSpec, ...]
    test: tuple[LevelSpec, ...]


def training_set_size(num_levels: int, xi: float) -> int:
    # Fraction keeps ceil exact for decimal fractions such as 0.1 * 30
    return math.ceil(Fraction(str(xi)) * num_levels)


def sample_levels(num_levels: int, xi: float, split_seed: int, family: EnvFamily) -> LevelSplit:
    """
    Builds the fixed test set (level seeds 0..m-1) and draws the training subset from it.

    Args:
        num_levels: Size m of the test set.
        xi: Fraction of test levels available for training, in (0, 1].
        split_seed: Seed of the subset draw; identical seeds give identical splits.
        family: Environment family of every level in the split.
    """
    if num_levels < 1:
        raise InvalidSplitError(f"Number of levels must be at least 1, got {num_levels}")
    if not 0.0 < xi <= 1.0:
        raise InvalidSplitError(f"Training fraction xi must be in (0, 1], got {xi}")

    test = tuple(LevelSpec(family, seed) for seed in range(num_levels))
    rng = np.random.default_rng([split_seed, FAMILY_STREAM[family]])
    chosen = rng.choice(num_levels, size=training_set_size(num_levels, xi), replace=False)
    train = tuple(test[int(index)] for index in chosen)
    logging.debug(f"Sampled {len(train)} training levels out of {num_levels} for {family.value}")
    return LevelSplit(train, test)
