# src/utils/parallel.py
# Ordered parallel map over independent work units.

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from src.utils.logger import logger

T = TypeVar("T")
R = TypeVar("R")


def resolve_workers(workers: Optional[int]) -> int:
    """Explicit worker count, else the configured ISOSCATTER_THREADS value."""
    if workers is None:
        from src.config import config
        workers = config.WORKER_COUNT
    return max(1, int(workers))


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> List[R]:
    """
    Applies ``fn`` to every item and returns the results in input order.

    With one worker the items run inline; otherwise on a thread pool (numpy
    releases the GIL inside its kernels). Results never depend on the worker count
    as long as ``fn`` is a pure function of its item.
    """
    items = list(items)
    count = resolve_workers(workers)
    if count == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    logger.debug(f"Dispatching {len(items)} work units to {count} worker threads.")
    with ThreadPoolExecutor(max_workers=count, thread_name_prefix="isoscatter") as pool:
        return list(pool.map(fn, items))
