import argparse
import logging
import os
import traceback

from core.ppo.augmentation_mode import AugmentationMode

from .constants import DEFAULT_CONFIG_FILE


def _check_output_directory(file_path: str | None, option: str) -> None:
    if file_path:
        directory = os.path.dirname(file_path)
        if directory and not os.path.exists(directory):
            raise ValueError(f"The directory for {option} does not exist: {directory}")


def validate_args(args):
    """
    Validates parsed arguments.

    Args:
        args: Parsed arguments object.
    Raises:
        ValueError: If validation fails.
    """
    if getattr(args, "xi", None) is not None and not 0.0 < args.xi <= 1.0:
        raise ValueError(f"--xi must lie in (0, 1], got {args.xi}")

    if getattr(args, "episodes", None) is not None and args.episodes < 1:
        raise ValueError(f"--episodes must be at least 1, got {args.episodes}")

    if args.command == "report":
        if args.window is not None and args.window < 1:
            raise ValueError(f"--window must be at least 1, got {args.window}")
        _check_output_directory(args.csv, "--csv")
        _check_output_directory(args.plot, "--plot")


def _add_config_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--config",
        type=str,
        default=DEFAULT_CONFIG_FILE,
        metavar="CONFIG",
        help="Path to the key-value experiment configuration file.",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Policy-aware adversarial data augmentation for PPO: train, evaluate and report zero-shot "
        "generalization experiments on procedurally generated levels.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    train_parser = subparsers.add_parser("train", help="Run every configured (family, seed, mode) training run.")
    _add_config_argument(train_parser)
    train_parser.add_argument(
        "--mode",
        type=str,
        nargs="+",
        choices=[mode.value for mode in AugmentationMode] + ["mixreg"],
        help="Augmentation modes to train; overrides experiment.modes.",
    )
    train_parser.add_argument("--xi", type=float, help="Training fraction of the level pool; overrides experiment.xi.")
    train_parser.add_argument("--seed", type=int, nargs="+", help="Training seeds; overrides experiment.seeds.")
    train_parser.add_argument(
        "--out", type=str, metavar="DIR", help="Output directory; overrides experiment.output_dir."
    )

    eval_parser = subparsers.add_parser("eval", help="Zero-shot evaluation of a saved policy checkpoint.")
    eval_parser.add_argument("--checkpoint", type=str, required=True, metavar="FILE", help="Checkpoint to evaluate.")
    _add_config_argument(eval_parser)
    eval_parser.add_argument("--episodes", type=int, help="Episodes per test level.")

    report_parser = subparsers.add_parser("report", help="Aggregate the metrics of finished runs.")
    report_parser.add_argument("--runs", type=str, nargs="+", required=True, metavar="DIR", help="Run directories.")
    report_parser.add_argument("--window", type=int, default=100, help="Evaluation sweeps per run to pool.")
    report_parser.add_argument("--csv", type=str, metavar="FILE", help="Write the summary (and series) as CSV.")
    report_parser.add_argument("--plot", type=str, metavar="FILE", help="Write learning curves as an HTML figure.")

    subparsers.add_parser("selftest", help="Run gradient, environment and adversarial oracle checks.")
    return parser


def parse_and_validate_console_args(cli_args=None):
    """
    Parses and validates console arguments.

    Args:
        cli_args: Optional CLI arguments for testing.
    Returns:
        argparse.Namespace: Parsed and validated arguments.
    Raises:
        RuntimeError: If argument parsing or validation fails.
    """
    try:
        args = build_parser().parse_args(cli_args)
        validate_args(args)
        return args

    except SystemExit as e:
        if e.code == 0:  # --help
            raise
        logging.error(f"Argument parsing failed: {e}")
        raise RuntimeError("Failed to parse arguments. Please check your inputs.") from e

    except ValueError as e:
        logging.error(f"Validation failed: {e}")
        raise RuntimeError("Argument validation failed.") from e

    except Exception as e:
        logging.error(f"An unexpected error occurred while parsing arguments: {e}")
        logging.error(traceback.format_exc())
        raise RuntimeError("An unexpected error occurred during argument parsing.") from e
