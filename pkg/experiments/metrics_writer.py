from collections.abc import Sequence
import logging
import os
import time

from tabulate import tabulate

from core.envgen.level_spec import LevelSpec
from core.ppo.event_bus import EventBus, Events
from core.ppo.rng_streams import RngStream, stream_rng
from core.ppo.trainer import EpochReport

from .exceptions import ExperimentIOError
from .metrics_record import MetricsRecord
from .return_normalizer import NormalizationBounds, mean_normalized_return
from .zero_shot_evaluator import ForwardPolicy, ZeroShotEvaluator

# Second counter of the evaluation stream, separating train-level sweeps from test-level sweeps of one epoch
TRAIN_LEVEL_COUNTER = 1


def append_metrics_record(record: MetricsRecord, file_path: str) -> None:
    try:
        with open(file_path, "a", encoding="utf-8") as metrics_file:
            metrics_file.write(record.to_json_line() + "\n")
    except OSError as e:
        logging.error(f"Failed to append metrics to {file_path}: {e}")
        raise ExperimentIOError(file_path, e) from e


def read_metrics(file_path: str) -> list[MetricsRecord]:
    if not os.path.exists(file_path):
        raise ExperimentIOError(file_path, "metrics file does not exist")
    with open(file_path, encoding="utf-8") as metrics_file:
        return [MetricsRecord.from_json_line(line) for line in metrics_file if line.strip()]


class MetricsRecorder:
    """
    Turns every completed training epoch into one metrics line.

    Every ``eval_every`` epochs (and on the last epoch) the freshly updated policy is evaluated zero-shot on the
    test levels through a forward-only view, and the test returns and normalized return are added. The generalization
    gap compares that same policy on the train levels with its test returns; ``train_return`` stays the mean rollout
    return collected before the update.
    """

    def __init__(
        self,
        event_bus: EventBus,
        metrics_path: str,
        test_levels: Sequence[LevelSpec],
        train_levels: Sequence[LevelSpec],
        bounds: dict[str, NormalizationBounds],
        seed: int,
        xi: float,
        total_epochs: int,
        eval_every: int = 10,
        episodes_per_level: int = 1,
        discount: float | None = None,
    ):
        self.logger = logging.getLogger(self.__class__.__name__)
        self.metrics_path = metrics_path
        self.evaluator = ZeroShotEvaluator(test_levels, episodes_per_level, discount)
        self.train_evaluator = ZeroShotEvaluator(train_levels, episodes_per_level, discount)
        self.bounds = bounds
        self.seed = seed
        self.xi = xi
        self.total_epochs = total_epochs
        self.eval_every = eval_every
        self.records: list[MetricsRecord] = []
        self._started = time.perf_counter()
        event_bus.subscribe(Events.EPOCH_COMPLETED, self.on_epoch_completed)

    def on_epoch_completed(self, report: EpochReport) -> None:
        summary = report.summary
        test_return = None
        normalized = None
        gap = None

        if summary.epoch % self.eval_every == 0 or summary.epoch == self.total_epochs:
            rng = stream_rng(self.seed, RngStream.EVALUATION, summary.epoch)
            policy = ForwardPolicy(report.policy)
            test_return = self.evaluator.evaluate(policy, rng).family_returns
            normalized = mean_normalized_return(test_return, self.bounds)
            train_rng = stream_rng(self.seed, RngStream.EVALUATION, summary.epoch, TRAIN_LEVEL_COUNTER)
            train_return = self.train_evaluator.evaluate(policy, train_rng).family_returns
            gap = {
                family: train_return[family] - value for family, value in test_return.items() if family in train_return
            }
            self._log_evaluation(summary.epoch, test_return, normalized)

        adversarial = summary.adversarial
        record = MetricsRecord(
            epoch=summary.epoch,
            mode=summary.mode.value,
            seed=self.seed,
            xi=self.xi,
            train_return=dict(summary.train_returns),
            test_return=test_return,
            mean_normalized_return=normalized,
            generalization_gap=gap,
            adv_mean_steps=adversarial.mean_steps if adversarial else None,
            adv_mean_grad_norm=adversarial.mean_final_grad_norm if adversarial else None,
            adv_mean_displacement=adversarial.mean_displacement if adversarial else None,
            mixup_lambda=summary.mixup_lambda,
            wall_clock_seconds=time.perf_counter() - self._started,
        )
        append_metrics_record(record, self.metrics_path)
        self.records.append(record)

    def _log_evaluation(self, epoch: int, test_return: dict[str, float], normalized: float) -> None:
        rows = [[family, f"{value:.4f}"] for family, value in test_return.items()]
        rows.append(["MNR", f"{normalized:.4f}"])
        table = tabulate(rows, headers=["Family", "Test return"], tablefmt="grid")
        self.logger.info(f"\nZero-shot evaluation after epoch {epoch} (seed {self.seed}):\n{table}")
