import logging
from logging.handlers import RotatingFileHandler
import os

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DEFAULT_LOG_NAME = "paada"


def setup_logging(
    log_level: int,
    log_to_file: bool = False,
    run_name: str | None = None,
    log_dir: str = "logs",
    max_file_size: int = 5_000_000,
    backup_count: int = 5,
) -> None:
    """
    Sets up console logging and, optionally, a rotating log file per run.

    Python warnings (numpy overflow and invalid-value warnings raised during training) are routed through the
    ``py.warnings`` logger so they land in the run's log file next to the epoch that produced them.

    Args:
        log_level (int): The logging level (e.g., logging.INFO, logging.DEBUG).
        log_to_file (bool): Whether to also log to ``<log_dir>/<run_name>.log``.
        run_name (Optional[str]): Name of the experiment run, used for the log file name.
        log_dir (str): Directory holding the log files.
        max_file_size (int): Maximum size of a log file in bytes before rotation.
        backup_count (int): Number of rotated files to keep.
    """
    formatter = logging.Formatter(LOG_FORMAT)
    console_handler = logging.StreamHandler()
    console_handler.setFormatter(formatter)
    handlers: list[logging.Handler] = [console_handler]

    log_file_path = None
    if log_to_file:
        os.makedirs(log_dir, exist_ok=True)
        log_file_path = os.path.join(log_dir, f"{run_name or DEFAULT_LOG_NAME}.log")
        file_handler = RotatingFileHandler(log_file_path, maxBytes=max_file_size, backupCount=backup_count)
        file_handler.setFormatter(formatter)
        handlers.append(file_handler)

    # reconfigured per CLI command, so earlier handlers are replaced
    logging.basicConfig(level=log_level, handlers=handlers, force=True)
    logging.captureWarnings(True)
    logging.info(f"Logging initialized. Log level: {logging.getLevelName(log_level)}")

    if log_file_path:
        logging.info(f"File logging enabled. Logs are stored in: {log_file_path}")
