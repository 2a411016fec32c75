import configparser


class ConfigError(Exception):
    """Base class for every error caused by an experiment configuration."""


class ConfigFileNotFoundError(ConfigError):
    def __init__(self, config_file: str):
        self.config_file = config_file
        super().__init__(f"Experiment configuration not found: {config_file}")


class ConfigValidationError(ConfigError):
    """Carries every rejected key of a configuration at once, grouped by why it was rejected."""

    def __init__(
        self,
        missing_fields: list[str] | None = None,
        invalid_fields: list[str] | None = None,
        unknown_fields: list[str] | None = None,
    ):
        self.missing_fields = list(missing_fields or [])
        self.invalid_fields = list(invalid_fields or [])
        self.unknown_fields = list(unknown_fields or [])
        groups = [
            ("missing", self.missing_fields),
            ("invalid", self.invalid_fields),
            ("unknown", self.unknown_fields),
        ]
        details = "; ".join(f"{label}: {', '.join(fields)}" for label, fields in groups if fields)
        super().__init__(f"Configuration rejected ({details})")


class ConfigParseError(ConfigError):
    def __init__(self, config_file: str, original_exception: configparser.Error, line_offset: int = 0):
        self.config_file = config_file
        self.original_exception = original_exception
        self.line = self._error_line(original_exception, line_offset)
        location = f"{config_file}:{self.line}" if self.line is not None else config_file
        super().__init__(f"Malformed configuration {location}: {original_exception.message}")

    @staticmethod
    def _error_line(error: configparser.Error, line_offset: int) -> int | None:
        if getattr(error, "lineno", None) is not None:
            return error.lineno - line_offset
        errors = getattr(error, "errors", None)
        if errors:
            return errors[0][0] - line_offset
        return None
