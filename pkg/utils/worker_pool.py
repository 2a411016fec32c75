from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
import logging
import os
from typing import TypeVar

from dotenv import load_dotenv
import psutil

THREADS_ENV_VAR = "PAADA_THREADS"

ItemT = TypeVar("ItemT")
ResultT = TypeVar("ResultT")


def resolve_worker_count() -> int:
    """
    Worker parallelism for rollouts, augmentation and experiment runs.

    ``PAADA_THREADS`` (also read from a ``.env`` file) caps it; otherwise the physical core count is used.
    """
    load_dotenv()
    configured = os.getenv(THREADS_ENV_VAR)
    if configured:
        try:
            workers = int(configured)
            if workers >= 1:
                return workers
        except ValueError:
            pass
        logging.warning(f"Ignoring invalid {THREADS_ENV_VAR}='{configured}', falling back to the core count.")

    return psutil.cpu_count(logical=False) or 1


def ordered_map(
    function: Callable[[ItemT], ResultT],
    items: Iterable[ItemT],
    max_workers: int | None = None,
) -> list[ResultT]:
    """Applies ``function`` to every item on a thread pool and returns results in input order."""
    items = list(items)
    workers = min(max_workers or resolve_worker_count(), max(len(items), 1))
    if workers <= 1:
        return [function(item) for item in items]

    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(function, items))
