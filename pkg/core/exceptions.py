class PaadaError(Exception):
    """Base class for numerical and precondition failures raised by the core library."""

    pass


class ShapeError(PaadaError):
    """Raised when an array does not have the dimensions a network or environment expects."""

    def __init__(self, expected, actual, context="input"):
        self.expected = expected
        self.actual = actual
        self.message = f"Shape mismatch for {context}: expected {expected}, got {actual}"
        super().__init__(self.message)


class NumericError(PaadaError):
    """Raised when a computation produces or receives non-finite values."""

    def __init__(self, message, step=None, diagnostics=None):
        self.step = step
        self.diagnostics = diagnostics or {}
        details = message
        if step is not None:
            details = f"{details} (step {step})"
        if self.diagnostics:
            formatted = ", ".join(f"{key}={value}" for key, value in self.diagnostics.items())
            details = f"{details} [{formatted}]"
        self.message = details
        super().__init__(self.message)


class PreconditionError(PaadaError):
    """Raised when an operation is called with arguments it cannot act on (empty batch, length mismatch)."""

    pass
