"""
Worker pool helpers

Results always come back in input order, so reductions over them are
deterministic regardless of scheduling.
"""
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from oval.core.config import Settings, settings as default_settings

T = TypeVar("T")
R = TypeVar("R")


def worker_count(config: Optional[Settings] = None) -> int:
    """Number of workers allowed by OVAL_THREADS (0 = auto)"""
    config = config or default_settings
    if config.OVAL_THREADS > 0:
        return config.OVAL_THREADS
    return os.cpu_count() or 1


def parallel_map(
    fn: Callable[[T], R],
    items: Iterable[T],
    config: Optional[Settings] = None,
) -> List[R]:
    """Order-preserving map over a thread pool"""
    items = list(items)
    workers = min(worker_count(config), max(len(items), 1))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
