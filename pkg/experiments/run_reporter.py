from collections.abc import Sequence
from dataclasses import dataclass
import glob
import logging
import os

import numpy as np
import pandas as pd
from tabulate import tabulate

from .exceptions import ExperimentIOError
from .experiment_runner import METRICS_FILE
from .metrics_writer import read_metrics
from .return_normalizer import NORMALIZED_FAMILY

GROUP_COLUMNS = ["xi", "mode", "family"]


@dataclass
class RunReport:
    summary: pd.DataFrame
    series: pd.DataFrame

    def to_text(self) -> str:
        rows = [
            [
                row.xi,
                row.mode,
                row.family,
                f"{row.mean:.4f} ± {row.std:.4f}",
                f"{row.seed_mean:.4f} ± {row.seed_stderr:.4f}",
                int(row.samples),
                int(row.seeds),
            ]
            for row in self.summary.itertuples(index=False)
        ]
        headers = ["xi", "Mode", "Family", "Test mean ± std", "Seed mean ± s.e.", "Samples", "Seeds"]
        return tabulate(rows, headers=headers, tablefmt="grid")

    def save_csv(self, file_path: str) -> str:
        """Writes the summary to ``file_path`` and the full evaluation series next to it."""
        root, extension = os.path.splitext(file_path)
        series_path = f"{root}_series{extension or '.csv'}"
        try:
            self.summary.to_csv(file_path, index=False)
            self.series.to_csv(series_path, index=False)
        except OSError as e:
            raise ExperimentIOError(file_path, e) from e
        logging.info(f"Report saved to {file_path} and {series_path}")
        return series_path


class RunReporter:
    """
    Aggregates the evaluation sweeps of one or more runs.

    For every run only the last ``window`` evaluation sweeps count. They are pooled per (xi, mode, family), and the
    normalized return is reported as the pseudo-family ``MNR``. The seed statistics first average the runs of each
    seed, so the ``MNR`` of a seed is the mean over its families, and then take mean and standard error across seeds.
    Standard deviations use the sample convention (n-1) and are 0 for a single value.
    """

    def __init__(self, run_dirs: Sequence[str], window: int = 100):
        self.logger = logging.getLogger(self.__class__.__name__)
        self.run_dirs = list(run_dirs)
        self.window = window

    def _metrics_files(self) -> list[str]:
        files = []
        for run_dir in self.run_dirs:
            if os.path.isfile(run_dir):
                files.append(run_dir)
            else:
                files.extend(sorted(glob.glob(os.path.join(run_dir, "**", METRICS_FILE), recursive=True)))
        if not files:
            raise ExperimentIOError(", ".join(self.run_dirs), f"no {METRICS_FILE} files found")
        return files

    def load_series(self) -> pd.DataFrame:
        rows = []
        for metrics_file in self._metrics_files():
            run = os.path.dirname(os.path.abspath(metrics_file))
            for record in read_metrics(metrics_file):
                rows.extend(
                    {
                        "run": run,
                        "xi": record.xi,
                        "mode": record.mode,
                        "seed": record.seed,
                        "epoch": record.epoch,
                        "family": family,
                        "train_return": record.train_return.get(family, np.nan),
                        "test_return": value,
                    }
                    for family, value in (record.test_return or {}).items()
                )
                if record.mean_normalized_return is not None:
                    rows.append(
                        {
                            "run": run,
                            "xi": record.xi,
                            "mode": record.mode,
                            "seed": record.seed,
                            "epoch": record.epoch,
                            "family": NORMALIZED_FAMILY,
                            "train_return": np.nan,
                            "test_return": record.mean_normalized_return,
                        },
                    )

        columns = ["run", "xi", "mode", "seed", "epoch", "family", "train_return", "test_return"]
        return pd.DataFrame(rows, columns=columns)

    def summarize(self, series: pd.DataFrame) -> pd.DataFrame:
        if series.empty:
            return pd.DataFrame(
                columns=[*GROUP_COLUMNS, "mean", "std", "samples", "seed_mean", "seed_stderr", "seeds"],
            )

        windowed = series.sort_values("epoch").groupby([*GROUP_COLUMNS, "run"], sort=False).tail(self.window)
        pooled = windowed.groupby(GROUP_COLUMNS)["test_return"].agg(["mean", "std", "count"])
        pooled = pooled.rename(columns={"count": "samples"})
        pooled["std"] = pooled["std"].fillna(0.0)

        per_run = windowed.groupby([*GROUP_COLUMNS, "seed", "run"])["test_return"].mean()
        per_seed = per_run.groupby(level=[*GROUP_COLUMNS, "seed"]).mean()
        across = per_seed.groupby(level=GROUP_COLUMNS).agg(["mean", "std", "count"])
        across["std"] = across["std"].fillna(0.0)
        pooled["seed_mean"] = across["mean"]
        pooled["seed_stderr"] = across["std"] / np.sqrt(across["count"])
        pooled["seeds"] = across["count"]
        return pooled.reset_index()

    def report(self) -> RunReport:
        series = self.load_series()
        result = RunReport(self.summarize(series), series)
        self.logger.info(f"\nGeneralization summary (last {self.window} evaluation sweeps):\n{result.to_text()}")
        return result


def report(run_dirs: Sequence[str], window: int = 100) -> RunReport:
    return RunReporter(run_dirs, window).report()
