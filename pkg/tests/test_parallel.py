# tests/test_parallel.py

import logging

from fractricomi.core.parallel import THREADS_ENV, parallel_map, worker_count


def test_worker_count_from_environment(monkeypatch):
    """Test the environment variable caps the worker count."""
    monkeypatch.setenv(THREADS_ENV, "3")
    assert worker_count() == 3
    monkeypatch.setenv(THREADS_ENV, "0")
    assert worker_count() == 1


def test_worker_count_ignores_garbage(monkeypatch, caplog):
    """Test a non-integer value falls back to the default with a warning."""
    monkeypatch.setenv(THREADS_ENV, "many")
    with caplog.at_level(logging.WARNING):
        assert worker_count() >= 1
    assert "many" in caplog.text


def test_parallel_map_preserves_order(monkeypatch):
    """Test results come back in input order with several workers."""
    monkeypatch.setenv(THREADS_ENV, "4")
    assert parallel_map(lambda v: v * v, range(50)) == [v * v for v in range(50)]


def test_parallel_map_inline(monkeypatch):
    """Test a single worker runs inline."""
    monkeypatch.setenv(THREADS_ENV, "1")
    assert parallel_map(str, [1, 2]) == ["1", "2"]
    assert parallel_map(str, []) == []
