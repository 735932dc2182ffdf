import os

import pytest

from pathhom.errors import UsageError
from pathhom.services.workers import map_ordered, resolve_threads


def test_resolve_threads():
    assert resolve_threads(3) == 3
    assert resolve_threads(0) == (os.cpu_count() or 1)
    # PATHHOM_THREADS=1 in the test environment
    assert resolve_threads(None) == 1
    with pytest.raises(UsageError):
        resolve_threads(-1)


def test_map_ordered_inline():
    assert list(map_ordered(abs, [-3, 1, -2], threads=1)) == [3, 1, 2]


def test_map_ordered_pool_keeps_job_order():
    jobs = list(range(-20, 0))
    assert list(map_ordered(abs, iter(jobs), threads=2)) == [abs(j) for j in jobs]
