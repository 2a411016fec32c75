from config.exceptions import ConfigError
from core.exceptions import PreconditionError


class UnknownEnvFamilyError(ConfigError):
    """Raised when a level names an environment family that does not exist."""

    def __init__(self, family, available_families):
        self.family = family
        self.message = (
            f"Invalid environment family: '{family}'. Available families are: {', '.join(available_families)}"
        )
        super().__init__(self.message)


class InvalidSplitError(ConfigError):
    """Raised when the level count or the training fraction is outside its valid range."""

    pass


class InvalidLevelSpecError(ConfigError):
    """Raised when a level string cannot be parsed as 'family:seed'."""

    pass


class EpisodeFinishedError(PreconditionError):
    """Raised when step is called on an environment whose episode is already done."""

    pass


class InvalidActionError(PreconditionError):
    """Raised when an action index is outside the environment's action set."""

    pass
