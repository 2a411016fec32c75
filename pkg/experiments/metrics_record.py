from __future__ import annotations

from dataclasses import asdict, dataclass
import json
import math

# Fields that legitimately differ between two otherwise identical runs
NON_DETERMINISTIC_FIELDS = ("wall_clock_seconds",)


@dataclass(frozen=True)
class MetricsRecord:
    epoch: int
    mode: str
    seed: int
    xi: float
    train_return: dict[str, float]
    test_return: dict[str, float] | None = None
    mean_normalized_return: float | None = None
    generalization_gap: dict[str, float] | None = None
    adv_mean_steps: float | None = None
    adv_mean_grad_norm: float | None = None
    adv_mean_displacement: float | None = None
    mixup_lambda: float | None = None
    wall_clock_seconds: float = 0.0

    def __post_init__(self):
        numbers = [self.xi, self.wall_clock_seconds, *self.train_return.values()]
        numbers += list((self.test_return or {}).values()) + list((self.generalization_gap or {}).values())
        numbers += [
            value
            for value in (
                self.mean_normalized_return,
                self.adv_mean_steps,
                self.adv_mean_grad_norm,
                self.adv_mean_displacement,
                self.mixup_lambda,
            )
            if value is not None
        ]
        if not all(math.isfinite(value) for value in numbers):
            raise ValueError(f"Metrics record for epoch {self.epoch} contains non-finite values")

    @property
    def is_evaluation(self) -> bool:
        return self.test_return is not None

    def to_json_line(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @staticmethod
    def from_json_line(line: str) -> MetricsRecord:
        return MetricsRecord(**json.loads(line))
