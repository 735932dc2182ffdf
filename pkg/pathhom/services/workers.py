"""
Worker pool shared by the census, sampling and temporal pipelines.

Jobs are submitted in order and results come back in the same order, so the
output never depends on how many workers ran. With one worker everything
runs in the calling process.
"""
import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Iterator, Optional, TypeVar

from pathhom.config.settings import settings
from pathhom.errors import UsageError
from pathhom.utils.logger import logger

Job = TypeVar("Job")
Result = TypeVar("Result")


def resolve_threads(threads: Optional[int] = None) -> int:
    """
    Number of worker processes to use.

    None falls back to PATHHOM_THREADS; 0 means one per available core.
    """
    if threads is None:
        threads = settings.THREADS
    if threads < 0:
        raise UsageError(f"--threads must be >= 0, got {threads}", error_code="INVALID_THREADS")
    if threads == 0:
        return os.cpu_count() or 1
    return threads


def map_ordered(fn: Callable[[Job], Result], jobs: Iterable[Job], threads: Optional[int] = None) -> Iterator[Result]:
    """
    Apply ``fn`` to every job, yielding results in job order.

    At most two jobs per worker are in flight, so a long job stream (windows
    of a temporal network) is consumed lazily.

    Args:
        fn: Module-level function (it is pickled for the worker processes)
        jobs: Job arguments, one per call
        threads: Worker count (see resolve_threads)
    """
    workers = resolve_threads(threads)
    if workers == 1:
        for job in jobs:
            yield fn(job)
        return

    logger.debug(f"Starting worker pool with {workers} processes")
    with ProcessPoolExecutor(max_workers=workers) as executor:
        pending = deque()
        for job in jobs:
            pending.append(executor.submit(fn, job))
            if len(pending) >= 2 * workers:
                yield pending.popleft().result()
        while pending:
            yield pending.popleft().result()
