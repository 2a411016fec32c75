from collections.abc import Callable

import numpy as np

FINITE_DIFFERENCE_STEP = 1e-5
GRADIENT_TOLERANCE = 1e-4


def central_difference(function: Callable[[np.ndarray], float], point: np.ndarray, step: float) -> np.ndarray:
    """Numerical gradient of a scalar function by central differences on every coordinate."""
    point = np.array(point, dtype=np.float64)
    gradient = np.zeros_like(point)
    for index in np.ndindex(point.shape):
        original = point[index]
        point[index] = original + step
        upper = function(point)
        point[index] = original - step
        lower = function(point)
        point[index] = original
        gradient[index] = (upper - lower) / (2.0 * step)
    return gradient


def relative_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-8) -> float:
    """Largest coordinate-wise |a - n| / max(|a|, |n|, floor)."""
    analytic = np.asarray(analytic, dtype=np.float64)
    numeric = np.asarray(numeric, dtype=np.float64)
    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)
    return float(np.max(np.abs(analytic - numeric) / scale))


def gradients_agree(
    analytic: np.ndarray,
    numeric: np.ndarray,
    tolerance: float = GRADIENT_TOLERANCE,
    absolute_floor: float = 1e-7,
) -> bool:
    """
    Relative agreement check that ignores coordinates where both gradients are numerically zero.

    Central differences carry roughly step^2 truncation plus eps/step round-off, so coordinates below
    ``absolute_floor`` in magnitude on both sides are compared absolutely instead.
    """
    analytic = np.asarray(analytic, dtype=np.float64)
    numeric = np.asarray(numeric, dtype=np.float64)
    tiny = (np.abs(analytic) < absolute_floor) & (np.abs(numeric) < absolute_floor)
    if np.all(tiny):
        return True
    return relative_error(analytic[~tiny], numeric[~tiny]) <= tolerance
