import threading
from unittest.mock import patch

import pytest

from utils.worker_pool import THREADS_ENV_VAR, ordered_map, resolve_worker_count


@pytest.fixture(autouse=True)
def no_dotenv():
    with patch("utils.worker_pool.load_dotenv"):
        yield


def test_worker_count_from_environment(monkeypatch):
    monkeypatch.setenv(THREADS_ENV_VAR, "3")
    assert resolve_worker_count() == 3


@pytest.mark.parametrize("configured", ["zero", "0", "-2"])
def test_invalid_worker_count_falls_back_to_cores(monkeypatch, caplog, configured):
    monkeypatch.setenv(THREADS_ENV_VAR, configured)
    with patch("utils.worker_pool.psutil.cpu_count", return_value=6):
        assert resolve_worker_count() == 6
    assert f"Ignoring invalid {THREADS_ENV_VAR}='{configured}'" in caplog.text


def test_worker_count_defaults_to_physical_cores(monkeypatch):
    monkeypatch.delenv(THREADS_ENV_VAR, raising=False)
    with patch("utils.worker_pool.psutil.cpu_count", return_value=None) as mock_cpu_count:
        assert resolve_worker_count() == 1
    mock_cpu_count.assert_called_once_with(logical=False)


def test_ordered_map_preserves_order():
    assert ordered_map(lambda value: value * value, range(20), max_workers=4) == [value * value for value in range(20)]


def test_ordered_map_single_worker_runs_inline():
    threads = ordered_map(lambda _: threading.get_ident(), range(3), max_workers=1)
    assert set(threads) == {threading.get_ident()}


def test_ordered_map_empty():
    assert ordered_map(lambda value: value, [], max_workers=4) == []
