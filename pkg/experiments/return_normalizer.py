from collections import defaultdict
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
import logging

import numpy as np

from core.envgen.level_spec import LevelSpec
from core.envgen.path_oracle import oracle_return

from .exceptions import DegenerateBoundsError
from .zero_shot_evaluator import UniformRandomPolicy, ZeroShotEvaluator

NORMALIZED_FAMILY = "MNR"


@dataclass(frozen=True)
class NormalizationBounds:
    r_min: float
    r_max: float


def mean_normalized_return(
    family_returns: Mapping[str, float],
    bounds: Mapping[str, NormalizationBounds],
) -> float:
    """Average over families of (R - R_min) / (R_max - R_min); values outside [0, 1] are kept as is."""
    normalized = []
    for family, value in family_returns.items():
        family_bounds = bounds[family]
        if not family_bounds.r_max > family_bounds.r_min:
            raise DegenerateBoundsError(family, family_bounds.r_min, family_bounds.r_max)
        normalized.append((value - family_bounds.r_min) / (family_bounds.r_max - family_bounds.r_min))
    return float(np.mean(normalized))


def estimate_bounds(
    test_levels: Sequence[LevelSpec],
    episodes_per_level: int,
    rng: np.random.Generator,
) -> dict[str, NormalizationBounds]:
    """
    Per-family anchors: R_min is the Monte-Carlo return of a uniform random policy, R_max the oracle optimum.
    """
    by_family: dict[str, list[LevelSpec]] = defaultdict(list)
    for level in test_levels:
        by_family[level.family.value].append(level)

    bounds = {}
    for family, levels in by_family.items():
        evaluator = ZeroShotEvaluator(levels, episodes_per_level)
        random_policy = UniformRandomPolicy(levels[0].family.num_actions)
        r_min = evaluator.evaluate(random_policy, rng).family_returns[family]
        r_max = float(np.mean([oracle_return(level) for level in levels]))
        if not r_max > r_min:
            raise DegenerateBoundsError(family, r_min, r_max)
        bounds[family] = NormalizationBounds(r_min, r_max)
        logging.info(f"Normalization bounds for {family}: R_min={r_min:.4f}, R_max={r_max:.4f}")
    return bounds
