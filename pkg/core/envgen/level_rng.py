from enum import IntEnum

import numpy as np


class LevelAttribute(IntEnum):
    """Stream identifiers for level randomness. Append new members, never renumber existing ones."""

    LAYOUT = 0
    PALETTE = 1
    DISTRACTOR = 2


def level_rng(level_seed: int, attribute: LevelAttribute) -> np.random.Generator:
    """
    Independent counter-based generator for one attribute of one level.

    Each (level_seed, attribute) pair keys its own Philox stream, so drawing more values for one attribute,
    or adding a new attribute, leaves the draws of every other attribute unchanged.
    """
    seed_sequence = np.random.SeedSequence([level_seed, int(attribute)])
    return np.random.Generator(np.random.Philox(seed_sequence))
