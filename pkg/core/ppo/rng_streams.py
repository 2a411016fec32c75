from enum import IntEnum

import numpy as np


class RngStream(IntEnum):
    """One independent random stream per concern, so enabling one augmentation never shifts the draws of another."""

    INIT = 0
    ROLLOUT = 1
    MERGE = 2
    MIXUP = 3
    MINIBATCH = 4
    EVALUATION = 5
    BOUNDS = 6


def stream_rng(seed: int, stream: RngStream, *counters: int) -> np.random.Generator:
    return np.random.default_rng([seed, int(stream), *counters])
