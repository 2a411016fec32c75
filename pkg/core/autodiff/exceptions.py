class CheckpointFormatError(Exception):
    """Raised when a checkpoint file is truncated, has a bad magic header or an unsupported version."""

    def __init__(self, checkpoint_file, reason):
        self.checkpoint_file = checkpoint_file
        self.reason = reason
        self.message = f"Invalid checkpoint {checkpoint_file}: {reason}"
        super().__init__(self.message)
