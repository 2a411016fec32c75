from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, replace

import numpy as np

from core.envgen.level_spec import LevelSpec
from core.exceptions import PreconditionError


@dataclass(frozen=True, eq=False)
class Transition:
    state: np.ndarray
    action: int
    reward: float
    value_est: float
    advantage: float
    log_prob_behavior: float
    done: bool
    adversarial: bool = False
    value_target: float | None = None

    @property
    def target(self) -> float:
        """Regression target of the value network; the immediate reward unless an estimator set one."""
        return self.reward if self.value_target is None else self.value_target

    def with_updates(self, **changes) -> Transition:
        return replace(self, **changes)


@dataclass(frozen=True)
class EpisodeReturn:
    value: float
    length: int
    complete: bool


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Exactly T consecutive transitions collected on one level.

    Episodes are concatenated with automatic resets; ``bootstrap_state`` is the observation that followed the
    last transition, used when an estimator needs to bootstrap across the window cut.
    """

    transitions: tuple[Transition, ...]
    level: LevelSpec
    bootstrap_state: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "transitions", tuple(self.transitions))
        if not self.transitions:
            raise PreconditionError(f"Trajectory on level {self.level} has no transitions")

    def __len__(self) -> int:
        return len(self.transitions)

    def __getitem__(self, index: int) -> Transition:
        return self.transitions[index]

    def __iter__(self):
        return iter(self.transitions)

    def states(self) -> np.ndarray:
        return np.stack([transition.state for transition in self.transitions])

    def actions(self) -> np.ndarray:
        return np.array([transition.action for transition in self.transitions], dtype=np.int64)

    def rewards(self) -> np.ndarray:
        return np.array([transition.reward for transition in self.transitions], dtype=np.float64)

    def advantages(self) -> np.ndarray:
        return np.array([transition.advantage for transition in self.transitions], dtype=np.float64)

    def value_targets(self) -> np.ndarray:
        return np.array([transition.target for transition in self.transitions], dtype=np.float64)

    def dones(self) -> np.ndarray:
        return np.array([transition.done for transition in self.transitions], dtype=bool)

    def with_transitions(self, transitions: Sequence[Transition]) -> Trajectory:
        return Trajectory(tuple(transitions), self.level, self.bootstrap_state)


@dataclass(frozen=True, eq=False)
class TransitionBatch:
    """Column-wise view of a set of transitions, the form every batch objective consumes."""

    states: np.ndarray
    actions: np.ndarray
    advantages: np.ndarray
    log_prob_behavior: np.ndarray
    value_targets: np.ndarray

    def __len__(self) -> int:
        return len(self.actions)

    @staticmethod
    def from_transitions(transitions: Sequence[Transition]) -> TransitionBatch:
        if not transitions:
            raise PreconditionError("Cannot build a batch from zero transitions")
        return TransitionBatch(
            states=np.stack([transition.state for transition in transitions]).astype(np.float64),
            actions=np.array([transition.action for transition in transitions], dtype=np.int64),
            advantages=np.array([transition.advantage for transition in transitions], dtype=np.float64),
            log_prob_behavior=np.array([transition.log_prob_behavior for transition in transitions], dtype=np.float64),
            value_targets=np.array([transition.target for transition in transitions], dtype=np.float64),
        )

    def subset(self, indices: np.ndarray) -> TransitionBatch:
        return TransitionBatch(
            self.states[indices],
            self.actions[indices],
            self.advantages[indices],
            self.log_prob_behavior[indices],
            self.value_targets[indices],
        )

    def with_advantages(self, advantages: np.ndarray) -> TransitionBatch:
        return replace(self, advantages=np.asarray(advantages, dtype=np.float64))
