from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
import logging
import os

import numpy as np

from core.augment.adversarial_generator import AdversarialStats, build_adversarial_trajectory_with_stats
from core.augment.augment_config import AdvGenConfig, MixupConfig
from core.augment.mixup import mixup_trajectory_with_lambda
from core.augment.trajectory_merger import merge_trajectories, replacement_count
from core.autodiff.checkpoint import save_checkpoint
from core.autodiff.mlp_params import MlpParams, OutputHead, init_mlp
from core.envgen.environment_factory import make_env
from core.envgen.environment_interface import Environment
from core.envgen.level_spec import LevelSpec
from core.exceptions import PreconditionError
from core.rollout.advantage_estimator import compute_advantages, episode_returns
from core.rollout.trajectory_collector import TrajectoryCollector
from core.rollout.trajectory_dump import dump_trajectories_jsonl
from core.rollout.transition import Trajectory, TransitionBatch
from utils.worker_pool import ordered_map

from .augmentation_mode import AugmentationMode
from .event_bus import EventBus, Events
from .ppo_config import NetworkConfig, PpoConfig
from .ppo_updater import PpoUpdater
from .rng_streams import RngStream, stream_rng

ADVANTAGE_NORMALIZATION_EPS = 1e-8


@dataclass(frozen=True)
class EpochSummary:
    epoch: int
    mode: AugmentationMode
    augmented: bool
    train_returns: dict[str, float]
    adversarial: AdversarialStats | None
    mixup_lambda: float | None
    num_transitions: int


@dataclass(frozen=True)
class EpochReport:
    """Payload of ``Events.EPOCH_COMPLETED``: the summary plus the networks after this epoch's updates."""

    summary: EpochSummary
    policy: MlpParams
    value: MlpParams


@dataclass
class TrainingResult:
    policy: MlpParams
    value: MlpParams
    summaries: list[EpochSummary] = field(default_factory=list)


def mean_complete_return(trajectories: Sequence[Trajectory]) -> float | None:
    """Undiscounted mean return over the episodes that finished inside the collected windows."""
    returns = [
        episode.value
        for trajectory in trajectories
        for episode in episode_returns(trajectory, discount=1.0)
        if episode.complete
    ]
    return float(np.mean(returns)) if returns else None


class PaadaTrainer:
    """
    PPO training loop with policy-aware adversarial augmentation and mixup.

    Each epoch collects one trajectory per scheduled training level, augments the batch according to the mode
    (adversarial states from the pre-training threshold on, optionally followed by mixup), then updates the policy
    and the value network on the augmented batch.
    """

    def __init__(
        self,
        ppo_config: PpoConfig,
        adv_config: AdvGenConfig,
        mixup_config: MixupConfig,
        levels: Sequence[LevelSpec],
        seed: int,
        network_config: NetworkConfig | None = None,
        event_bus: EventBus | None = None,
        checkpoint_dir: str | None = None,
        dump_dir: str | None = None,
        max_workers: int | None = None,
    ):
        if not levels:
            raise PreconditionError("Training needs at least one level")
        families = {level.family for level in levels}
        if len(families) != 1:
            names = sorted(family.value for family in families)
            raise PreconditionError(f"All training levels must share one family, got {names}")

        self.logger = logging.getLogger(self.__class__.__name__)
        self.ppo_config = ppo_config
        self.adv_config = adv_config
        self.mixup_config = mixup_config
        self.network_config = network_config or NetworkConfig()
        self.levels = list(levels)
        self.family = self.levels[0].family
        self.seed = seed
        self.event_bus = event_bus
        self.checkpoint_dir = checkpoint_dir
        self.dump_dir = dump_dir
        self.max_workers = max_workers
        self.collector = TrajectoryCollector(ppo_config.rollout_length, max_workers)
        self.updater = PpoUpdater(ppo_config)
        self._environments: dict[LevelSpec, Environment] = {}
        self.policy, self.value = self._initialize_networks()

    def _initialize_networks(self) -> tuple[MlpParams, MlpParams]:
        rng = stream_rng(self.seed, RngStream.INIT)
        hidden = list(self.network_config.hidden_sizes)
        input_dim = self.family.observation_dim
        activation = self.network_config.activation
        policy = init_mlp([input_dim, *hidden, self.family.num_actions], activation, OutputHead.POLICY, rng)
        value = init_mlp([input_dim, *hidden, 1], activation, OutputHead.VALUE, rng)
        return policy, value

    def scheduled_levels(self, epoch: int) -> list[LevelSpec]:
        """Round-robin assignment of at most ``max_trajectories`` levels to this epoch."""
        count = min(len(self.levels), self.ppo_config.max_trajectories)
        start = ((epoch - 1) * count) % len(self.levels)
        return [self.levels[(start + offset) % len(self.levels)] for offset in range(count)]

    def _environment(self, level: LevelSpec) -> Environment:
        if level not in self._environments:
            self._environments[level] = make_env(level)
        return self._environments[level]

    def train(self) -> TrainingResult:
        result = TrainingResult(self.policy, self.value)
        self.logger.info(
            f"Training {self.ppo_config.mode.value} on {len(self.levels)} {self.family.value} levels "
            f"for {self.ppo_config.total_epochs} epochs (seed {self.seed})",
        )

        for epoch in range(1, self.ppo_config.total_epochs + 1):
            summary = self.run_epoch(epoch)
            result.summaries.append(summary)
            if self.event_bus:
                self.event_bus.publish_sync(Events.EPOCH_COMPLETED, EpochReport(summary, self.policy, self.value))
            self._maybe_checkpoint(epoch)

        result.policy, result.value = self.policy, self.value
        if self.event_bus:
            self.event_bus.publish_sync(Events.TRAINING_FINISHED, result)
        return result

    def run_epoch(self, epoch: int) -> EpochSummary:
        mode = self.ppo_config.mode
        policy, value = self.policy, self.value
        levels = self.scheduled_levels(epoch)
        environments = [self._environment(level) for level in levels]
        rngs = [stream_rng(self.seed, RngStream.ROLLOUT, epoch, index) for index in range(len(levels))]

        trajectories = self.collector.collect(policy, value, environments, rngs)
        trajectories = [
            compute_advantages(
                trajectory,
                value,
                self.ppo_config.advantage_estimator,
                self.ppo_config.discount,
                self.ppo_config.gae_lambda,
            )
            for trajectory in trajectories
        ]
        train_return = mean_complete_return(trajectories)

        augmented = False
        adversarial_stats = None
        mixup_lambda = None

        if mode.uses_adversarial and epoch >= self.ppo_config.pretrain_epochs:
            augmented = True
            trajectories, adversarial_stats = self._apply_adversarial(trajectories, policy, value, epoch)
            if mode is AugmentationMode.PAADA_MIXUP:
                trajectories, mixup_lambda = self._apply_mixup(trajectories, policy, epoch)
        elif mode is AugmentationMode.MIXREG_BASELINE:
            augmented = True
            trajectories, mixup_lambda = self._apply_mixup(trajectories, policy, epoch)

        if self.dump_dir:
            dump_trajectories_jsonl(trajectories, os.path.join(self.dump_dir, f"epoch_{epoch:04d}.jsonl"))

        transitions = [transition for trajectory in trajectories for transition in trajectory]
        batch = TransitionBatch.from_transitions(transitions)
        if self.ppo_config.normalize_advantages:
            advantages = batch.advantages
            batch = batch.with_advantages(
                (advantages - advantages.mean()) / (advantages.std() + ADVANTAGE_NORMALIZATION_EPS),
            )

        self.policy = self.updater.update_policy(policy, batch, stream_rng(self.seed, RngStream.MINIBATCH, epoch, 0))
        self.value = self.updater.update_value(value, batch, stream_rng(self.seed, RngStream.MINIBATCH, epoch, 1))

        train_returns = {self.family.value: train_return} if train_return is not None else {}
        summary = EpochSummary(
            epoch=epoch,
            mode=mode,
            augmented=augmented,
            train_returns=train_returns,
            adversarial=adversarial_stats,
            mixup_lambda=mixup_lambda,
            num_transitions=len(batch),
        )
        self._log_epoch(summary)
        return summary

    def _apply_adversarial(
        self,
        trajectories: list[Trajectory],
        policy: MlpParams,
        value: MlpParams,
        epoch: int,
    ) -> tuple[list[Trajectory], AdversarialStats | None]:
        # nothing would be selected by the merge, so the search is skipped
        if replacement_count(self.ppo_config.rollout_length, self.ppo_config.nu) == 0:
            return trajectories, None

        generated = ordered_map(
            lambda trajectory: build_adversarial_trajectory_with_stats(trajectory, policy, value, self.adv_config),
            trajectories,
            self.max_workers,
        )
        merged = [
            merge_trajectories(
                trajectory,
                adversarial,
                self.ppo_config.nu,
                stream_rng(self.seed, RngStream.MERGE, epoch, index),
            )
            for index, (trajectory, (adversarial, _)) in enumerate(zip(trajectories, generated, strict=True))
        ]
        return merged, AdversarialStats.combine([stats for _, stats in generated])

    def _apply_mixup(
        self,
        trajectories: list[Trajectory],
        policy: MlpParams,
        epoch: int,
    ) -> tuple[list[Trajectory], float]:
        mixed = [
            mixup_trajectory_with_lambda(
                trajectory,
                self.mixup_config,
                stream_rng(self.seed, RngStream.MIXUP, epoch, index),
                policy,
            )
            for index, trajectory in enumerate(trajectories)
        ]
        return [trajectory for trajectory, _ in mixed], float(np.mean([lam for _, lam in mixed]))

    def _maybe_checkpoint(self, epoch: int) -> None:
        every = self.ppo_config.checkpoint_every
        if not (every and self.checkpoint_dir and epoch % every == 0):
            return

        path = os.path.join(self.checkpoint_dir, f"checkpoint_epoch_{epoch:04d}.ckpt")
        save_checkpoint(path, {"policy": self.policy, "value": self.value})
        if self.event_bus:
            self.event_bus.publish_sync(Events.CHECKPOINT_SAVED, path)

    def _log_epoch(self, summary: EpochSummary) -> None:
        returns = ", ".join(f"{family}={value:.3f}" for family, value in summary.train_returns.items()) or "n/a"
        message = (
            f"Epoch {summary.epoch}/{self.ppo_config.total_epochs} [{summary.mode.value}] "
            f"train return {returns}, {summary.num_transitions} transitions"
        )
        if summary.adversarial:
            message += (
                f", adversarial steps {summary.adversarial.mean_steps:.1f}"
                f" displacement {summary.adversarial.mean_displacement:.4f}"
            )
        if summary.mixup_lambda is not None:
            message += f", mixup lambda {summary.mixup_lambda:.3f}"
        self.logger.info(message)


def train(
    ppo_config: PpoConfig,
    adv_config: AdvGenConfig,
    mixup_config: MixupConfig,
    levels: Sequence[LevelSpec],
    seed: int,
    network_config: NetworkConfig | None = None,
    event_bus: EventBus | None = None,
    checkpoint_dir: str | None = None,
) -> TrainingResult:
    """Runs the full training schedule and returns the final networks with one summary per epoch."""
    trainer = PaadaTrainer(
        ppo_config,
        adv_config,
        mixup_config,
        levels,
        seed,
        network_config=network_config,
        event_bus=event_bus,
        checkpoint_dir=checkpoint_dir,
    )
    return trainer.train()
