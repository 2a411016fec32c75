from dataclasses import dataclass

from config.exceptions import ConfigValidationError


@dataclass(frozen=True)
class AdvGenConfig:
    """Settings of the gradient-descent search for adversarial states."""

    stepsize: float = 10.0
    max_steps: int = 50
    tolerance: float = 5e-6
    lagrangian: float = 0.01
    value_detached: bool = False
    clip_to_obs_bounds: bool = True

    def __post_init__(self):
        invalid_fields = []
        if not self.stepsize > 0:
            invalid_fields.append("adv.stepsize")
        if self.max_steps < 0:
            invalid_fields.append("adv.max_steps")
        if not self.tolerance > 0:
            invalid_fields.append("adv.tolerance")
        if self.lagrangian < 0:
            invalid_fields.append("adv.lagrangian")
        if invalid_fields:
            raise ConfigValidationError(invalid_fields=invalid_fields)


def beta_for_xi(xi: float) -> float:
    """Default Beta shape for the mixing coefficient; fewer training levels get a flatter distribution."""
    if xi >= 1.0:
        return 0.2
    if xi >= 0.5:
        return 0.5
    return 1.0


@dataclass(frozen=True)
class MixupConfig:
    alpha: float = 0.2
    beta: float = 0.2
    forced_lambda: float | None = None

    def __post_init__(self):
        invalid_fields = []
        if not self.alpha > 0:
            invalid_fields.append("mixup.alpha")
        if not self.beta > 0:
            invalid_fields.append("mixup.beta")
        if self.forced_lambda is not None and not 0.0 <= self.forced_lambda <= 1.0:
            invalid_fields.append("mixup.forced_lambda")
        if invalid_fields:
            raise ConfigValidationError(invalid_fields=invalid_fields)
