"""Order-preserving worker pool used for Monte Carlo trials and multi-start solves."""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, TypeVar

T = TypeVar("T")
R = TypeVar("R")

logger = logging.getLogger(__name__)


def parallel_map(func: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """
    Apply ``func`` to every item, preserving input order in the result.

    With ``workers <= 1`` the work runs in-process, which keeps tests and
    debugging simple. Otherwise items are distributed over a process pool;
    ``func`` and the items must then be picklable.

    Args:
        func: Pure function of one work item
        items: Work items
        workers: Number of worker processes

    Returns:
        Results in the order of ``items``
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    logger.debug(f"Dispatching {len(items)} work items to {workers} workers")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
