from fractions import Fraction
import math

import numpy as np

from core.exceptions import PreconditionError
from core.rollout.transition import Trajectory


def replacement_count(length: int, nu: float) -> int:
    """floor(nu * length), exact for decimal nu."""
    return math.floor(Fraction(str(nu)) * length)


def merge_trajectories(
    trajectory: Trajectory,
    adversarial: Trajectory,
    nu: float,
    rng: np.random.Generator,
) -> Trajectory:
    """
    Swaps floor(nu * |tau|) uniformly chosen positions of the raw trajectory for their adversarial counterparts.

    Positions not chosen keep the raw transition; order is preserved.
    """
    if len(trajectory) != len(adversarial):
        raise PreconditionError(f"Cannot merge trajectories of lengths {len(trajectory)} and {len(adversarial)}")
    if not 0.0 <= nu <= 1.0:
        raise PreconditionError(f"Replacement ratio nu must be in [0, 1], got {nu}")

    count = replacement_count(len(trajectory), nu)
    if count == 0:
        return trajectory.with_transitions(trajectory.transitions)

    positions = rng.choice(len(trajectory), size=count, replace=False)
    merged = list(trajectory.transitions)
    for position in positions:
        merged[int(position)] = adversarial[int(position)]
    return trajectory.with_transitions(merged)
