from config.exceptions import ConfigError


class ExperimentIOError(OSError):
    """Raised when run outputs cannot be written or expected run files are missing."""

    def __init__(self, path, reason):
        self.path = path
        self.message = f"I/O failure for {path}: {reason}"
        super().__init__(self.message)


class DegenerateBoundsError(ConfigError):
    """Raised when a family's normalization bounds do not satisfy r_max > r_min."""

    def __init__(self, family, r_min, r_max):
        self.family = family
        self.message = f"Degenerate normalization bounds for {family}: r_min={r_min}, r_max={r_max}"
        super().__init__(self.message)
