import argparse
import logging
import os
import sys

from dotenv import load_dotenv

from config.config_manager import ConfigManager
from config.config_validator import ConfigValidator
from config.exceptions import ConfigError
from core.autodiff.exceptions import CheckpointFormatError
from core.exceptions import NumericError
from experiments.experiment_runner import evaluate_checkpoint, run_experiment
from experiments.plotter import Plotter
from experiments.run_reporter import report
from experiments.self_test import run_self_test
from utils.arg_parser import parse_and_validate_console_args
from utils.constants import (
    EXIT_CONFIG_ERROR,
    EXIT_IO_ERROR,
    EXIT_NUMERIC_ERROR,
    EXIT_SUCCESS,
    EXIT_UNEXPECTED_ERROR,
)
from utils.logging_config import setup_logging
from utils.run_name_generator import generate_run_name


def initialize_config(config_path: str, overrides: dict[str, str | None] | None = None) -> ConfigManager:
    config_manager = ConfigManager(config_path, ConfigValidator())
    if overrides:
        config_manager.apply_overrides(overrides)
    return config_manager


def train_command(args: argparse.Namespace) -> int:
    overrides = {
        "experiment.modes": ", ".join(args.mode) if args.mode else None,
        "experiment.xi": repr(args.xi) if args.xi is not None else None,
        "experiment.seeds": ", ".join(str(seed) for seed in args.seed) if args.seed else None,
        "experiment.output_dir": args.out,
    }
    config_manager = initialize_config(args.config, overrides)
    config = config_manager.get_experiment_config()
    run_name = generate_run_name(config)
    setup_logging(config_manager.get_logging_level(), config_manager.should_log_to_file(), run_name)

    run_dir = run_experiment(config, run_dir=os.path.join(config.output_dir, run_name))
    logging.info(f"Training finished. Run directory: {run_dir}")
    return EXIT_SUCCESS


def eval_command(args: argparse.Namespace) -> int:
    config_manager = initialize_config(args.config)
    setup_logging(config_manager.get_logging_level(), config_manager.should_log_to_file())
    evaluate_checkpoint(config_manager.get_experiment_config(), args.checkpoint, args.episodes)
    return EXIT_SUCCESS


def report_command(args: argparse.Namespace) -> int:
    result = report(args.runs, args.window)
    if args.csv:
        result.save_csv(args.csv)
    if args.plot:
        Plotter(result.series).save_html(args.plot)
    return EXIT_SUCCESS


def selftest_command(_args: argparse.Namespace) -> int:
    results = run_self_test()
    failed = [result.name for result in results if not result.passed]
    if failed:
        logging.error(f"Self-test failed: {', '.join(failed)}")
        return EXIT_NUMERIC_ERROR
    return EXIT_SUCCESS


COMMANDS = {
    "train": train_command,
    "eval": eval_command,
    "report": report_command,
    "selftest": selftest_command,
}


def main(cli_args: list[str] | None = None) -> int:
    load_dotenv()
    setup_logging(logging.INFO)

    try:
        args = parse_and_validate_console_args(cli_args)
    except RuntimeError as e:
        logging.error(f"{e}")
        return EXIT_CONFIG_ERROR

    try:
        return COMMANDS[args.command](args)

    except ConfigError as e:
        logging.error(f"Configuration error: {e}")
        return EXIT_CONFIG_ERROR

    except NumericError as e:
        logging.error(f"Numerical failure: {e}")
        return EXIT_NUMERIC_ERROR

    except (OSError, CheckpointFormatError) as e:
        logging.error(f"I/O failure: {e}")
        return EXIT_IO_ERROR

    except Exception as e:
        logging.error(f"An unexpected error occurred: {e}", exc_info=True)
        return EXIT_UNEXPECTED_ERROR


if __name__ == "__main__":
    sys.exit(main())
