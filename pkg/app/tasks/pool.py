"""Worker pool for independent games, runs and trials."""

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, Hashable, Mapping, TypeVar

from app.logging_config import StructuredLogger

logger = StructuredLogger(__name__)

J = TypeVar("J")
R = TypeVar("R")


def run_jobs(fn: Callable[[J], R], jobs: Mapping[Hashable, J], workers: int = 1) -> Dict[Hashable, R]:
    """Run ``fn`` on every job; results come back keyed and sorted by job key.

    ``fn`` and the jobs must be picklable when ``workers > 1``.
    """
    keys = sorted(jobs)
    if workers <= 1 or len(keys) <= 1:
        return {key: fn(jobs[key]) for key in keys}

    logger.debug("Dispatching jobs", jobs=len(keys), workers=workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = {key: pool.submit(fn, jobs[key]) for key in keys}
        return {key: futures[key].result() for key in keys}
