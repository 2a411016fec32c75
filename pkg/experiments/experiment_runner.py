import asyncio
from dataclasses import replace
from datetime import datetime, timezone
from importlib import metadata
import json
import logging
import os

from tabulate import tabulate

from core.autodiff.checkpoint import load_checkpoint, save_checkpoint
from core.autodiff.exceptions import CheckpointFormatError
from core.autodiff.mlp_params import MlpParams
from core.envgen.env_family import EnvFamily
from core.envgen.level_sampler import LevelSplit, sample_levels
from core.ppo.augmentation_mode import AugmentationMode
from core.ppo.event_bus import EventBus
from core.ppo.rng_streams import RngStream, stream_rng
from core.ppo.trainer import PaadaTrainer
from utils.run_name_generator import generate_run_name
from utils.worker_pool import resolve_worker_count

from .exceptions import ExperimentIOError
from .experiment_config import ExperimentConfig
from .metrics_writer import MetricsRecorder
from .return_normalizer import NORMALIZED_FAMILY, NormalizationBounds, estimate_bounds, mean_normalized_return
from .zero_shot_evaluator import ForwardPolicy, evaluate_zero_shot

UTC = timezone.utc

MANIFEST_FILE = "manifest.json"
METRICS_FILE = "metrics.jsonl"
FINAL_CHECKPOINT_FILE = "policy_final.ckpt"
PACKAGE_NAME = "paada_rl"


def code_version() -> str:
    try:
        return metadata.version(PACKAGE_NAME)
    except metadata.PackageNotFoundError:
        return "0.1.0+local"


def run_path(run_dir: str, family: EnvFamily, seed: int, mode: AugmentationMode) -> str:
    return os.path.join(run_dir, family.value, f"seed_{seed}", mode.value)


def family_bounds(config: ExperimentConfig, family: EnvFamily, split: LevelSplit) -> dict[str, NormalizationBounds]:
    bounds_rng = stream_rng(config.split_seed, RngStream.BOUNDS, list(EnvFamily).index(family))
    return estimate_bounds(split.test, config.bound_episodes, bounds_rng)


def checkpoint_family(policy: MlpParams, families: tuple[EnvFamily, ...], checkpoint_file: str) -> EnvFamily:
    for family in families:
        if policy.input_dim == family.observation_dim and policy.output_dim == family.num_actions:
            return family
    raise CheckpointFormatError(
        checkpoint_file,
        f"policy shape {policy.input_dim}->{policy.output_dim} matches none of "
        f"{', '.join(family.value for family in families)}",
    )


def evaluate_checkpoint(
    config: ExperimentConfig,
    checkpoint_file: str,
    episodes_per_level: int | None = None,
) -> dict[str, float]:
    """
    Zero-shot evaluation of a saved policy on the test split its configuration defines.

    Returns the mean return of the policy's family and its normalized return under the key ``MNR``.
    """
    networks = load_checkpoint(checkpoint_file)
    if "policy" not in networks:
        raise CheckpointFormatError(checkpoint_file, "no 'policy' network stored")
    policy = networks["policy"]
    family = checkpoint_family(policy, config.families, checkpoint_file)

    split = sample_levels(config.num_levels, config.xi, config.split_seed, family)
    bounds = family_bounds(config, family, split)
    returns = evaluate_zero_shot(
        ForwardPolicy(policy),
        split.test,
        episodes_per_level or config.episodes_per_level,
        stream_rng(config.split_seed, RngStream.EVALUATION),
        discount=config.ppo.discount if config.eval_discounted else None,
    )
    returns[NORMALIZED_FAMILY] = mean_normalized_return(returns, bounds)

    rows = [[name, f"{value:.4f}"] for name, value in returns.items()]
    table = tabulate(rows, headers=["Family", "Return"], tablefmt="grid")
    logging.info(f"\nCheckpoint {checkpoint_file} on {len(split.test)} test levels:\n{table}")
    return returns


class ExperimentRunner:
    """
    Trains every (family, seed, mode) combination of an experiment on shared level splits.

    The manifest is written before any training starts; each run then writes its own metrics stream and final
    checkpoint. Runs execute concurrently on worker threads and are individually deterministic.
    """

    def __init__(self, config: ExperimentConfig, run_dir: str | None = None, max_workers: int | None = None):
        self.logger = logging.getLogger(self.__class__.__name__)
        self.config = config
        self.run_dir = run_dir or os.path.join(config.output_dir, generate_run_name(config))
        self.max_workers = max_workers or resolve_worker_count()
        self.splits: dict[EnvFamily, LevelSplit] = {}
        self.bounds: dict[str, NormalizationBounds] = {}

    def prepare(self) -> None:
        try:
            os.makedirs(self.run_dir, exist_ok=True)
            marker = os.path.join(self.run_dir, ".write_check")
            with open(marker, "w") as marker_file:
                marker_file.write("")
            os.remove(marker)
        except OSError as e:
            self.logger.error(f"Run directory {self.run_dir} is not writable: {e}")
            raise ExperimentIOError(self.run_dir, e) from e

        for family in self.config.families:
            split = sample_levels(self.config.num_levels, self.config.xi, self.config.split_seed, family)
            self.splits[family] = split
            self.bounds.update(family_bounds(self.config, family, split))

        self._write_manifest()

    def _write_manifest(self) -> None:
        manifest = {
            "code_version": code_version(),
            "created_at": datetime.now(tz=UTC).isoformat(),
            "config": self.config.to_flat_dict(),
            "splits": {
                family.value: {
                    "train_size": len(split.train),
                    "test_size": len(split.test),
                    "train": [level.to_string() for level in split.train],
                    "test": [level.to_string() for level in split.test],
                }
                for family, split in self.splits.items()
            },
            "bounds": {family: {"r_min": b.r_min, "r_max": b.r_max} for family, b in self.bounds.items()},
        }
        manifest_path = os.path.join(self.run_dir, MANIFEST_FILE)
        try:
            with open(manifest_path, "w", encoding="utf-8") as manifest_file:
                json.dump(manifest, manifest_file, indent=4)
        except OSError as e:
            raise ExperimentIOError(manifest_path, e) from e
        self.logger.info(f"Manifest written to {manifest_path}")

    def run_single(self, family: EnvFamily, seed: int, mode: AugmentationMode, inner_workers: int = 1) -> str:
        split = self.splits[family]
        directory = run_path(self.run_dir, family, seed, mode)
        os.makedirs(directory, exist_ok=True)
        metrics_path = os.path.join(directory, METRICS_FILE)
        if os.path.exists(metrics_path):
            os.remove(metrics_path)

        ppo_config = replace(self.config.ppo, mode=mode)
        event_bus = EventBus()
        MetricsRecorder(
            event_bus,
            metrics_path,
            split.test,
            split.train,
            {family.value: self.bounds[family.value]},
            seed=seed,
            xi=self.config.xi,
            total_epochs=ppo_config.total_epochs,
            eval_every=self.config.eval_every,
            episodes_per_level=self.config.episodes_per_level,
            discount=ppo_config.discount if self.config.eval_discounted else None,
        )
        trainer = PaadaTrainer(
            ppo_config,
            self.config.adv,
            self.config.mixup,
            split.train,
            seed,
            network_config=self.config.network,
            event_bus=event_bus,
            checkpoint_dir=os.path.join(directory, "checkpoints"),
            dump_dir=os.path.join(directory, "trajectories") if self.config.dump_trajectories else None,
            max_workers=inner_workers,
        )
        result = trainer.train()
        networks = {"policy": result.policy, "value": result.value}
        save_checkpoint(os.path.join(directory, FINAL_CHECKPOINT_FILE), networks)
        self.logger.info(f"Finished {family.value} seed {seed} mode {mode.value}: outputs in {directory}")
        return directory

    async def run_all(self) -> str:
        self.prepare()
        combinations = [
            (family, seed, mode)
            for family in self.config.families
            for seed in self.config.seeds
            for mode in self.config.modes
        ]
        concurrency = max(1, min(self.max_workers, len(combinations)))
        inner_workers = max(1, self.max_workers // concurrency)
        semaphore = asyncio.Semaphore(concurrency)

        async def guarded(family: EnvFamily, seed: int, mode: AugmentationMode) -> str:
            async with semaphore:
                return await asyncio.to_thread(self.run_single, family, seed, mode, inner_workers)

        results = await asyncio.gather(*(guarded(*combination) for combination in combinations), return_exceptions=True)
        failures = [result for result in results if isinstance(result, BaseException)]
        for failure in failures:
            self.logger.error(f"Run failed: {failure}", exc_info=failure)
        if failures:
            raise failures[0]

        self.logger.info(f"All {len(combinations)} runs completed. Results in {self.run_dir}")
        return self.run_dir


def run_experiment(config: ExperimentConfig, run_dir: str | None = None, max_workers: int | None = None) -> str:
    """Prepares splits, bounds and manifest, then trains every seed and mode; returns the run directory."""
    return asyncio.run(ExperimentRunner(config, run_dir, max_workers).run_all())
