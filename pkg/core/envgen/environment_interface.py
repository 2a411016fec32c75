from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from .env_family import EnvFamily
from .exceptions import EpisodeFinishedError, InvalidActionError
from .level_spec import LevelSpec


@dataclass(frozen=True)
class StepResult:
    observation: np.ndarray
    reward: float
    done: bool
    truncated: bool = False


class Environment(ABC):
    """A single procedurally generated level. Instances are deterministic functions of their LevelSpec."""

    def __init__(self, level: LevelSpec):
        self.level = level
        self.steps_taken = 0
        self.done = False

    @property
    def family(self) -> EnvFamily:
        return self.level.family

    @property
    def observation_dim(self) -> int:
        return self.family.observation_dim

    @property
    def num_actions(self) -> int:
        return self.family.num_actions

    @property
    def horizon(self) -> int:
        return self.family.horizon

    def observation_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return self.family.observation_bounds()

    def reset(self) -> np.ndarray:
        self.steps_taken = 0
        self.done = False
        self._reset_agent()
        return self._observe()

    def step(self, action: int) -> StepResult:
        if self.done:
            raise EpisodeFinishedError(f"Episode on level {self.level} is done; call reset() first")
        if not 0 <= int(action) < self.num_actions:
            raise InvalidActionError(f"Action {action} outside [0, {self.num_actions}) on level {self.level}")

        reached_goal = self._move(int(action))
        self.steps_taken += 1
        reward = -self.step_penalty() + (self.goal_reward() if reached_goal else 0.0)
        truncated = not reached_goal and self.steps_taken >= self.horizon
        self.done = reached_goal or truncated
        return StepResult(self._observe(), reward, self.done, truncated)

    @abstractmethod
    def _reset_agent(self) -> None:
        pass

    @abstractmethod
    def _move(self, action: int) -> bool:
        """Applies the action and reports whether the goal was reached."""
        pass

    @abstractmethod
    def _observe(self) -> np.ndarray:
        pass

    @abstractmethod
    def step_penalty(self) -> float:
        pass

    @abstractmethod
    def goal_reward(self) -> float:
        pass
