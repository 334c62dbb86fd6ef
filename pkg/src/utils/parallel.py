"""
Process-pool helpers with ordered results
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from tqdm import tqdm

logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')


def parallel_map(func: Callable[[T], R], items: Iterable[T], workers: int = 1,
                 desc: Optional[str] = None, progress: bool = False) -> List[R]:
    """
    Map ``func`` over ``items`` and return results in input order.

    With ``workers`` <= 1 the map runs in-process; otherwise in a process
    pool. ``func`` and the items must be picklable in that case. Result
    order never depends on the worker count.
    """
    items = list(items)
    if workers is None or workers <= 1 or len(items) <= 1:
        iterator = map(func, items)
        if progress:
            iterator = tqdm(iterator, total=len(items), desc=desc)
        return list(iterator)

    logger.debug("running %d jobs on %d workers", len(items), workers)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        iterator = executor.map(func, items)
        if progress:
            iterator = tqdm(iterator, total=len(items), desc=desc)
        return list(iterator)


def chunked(values: List[T], chunks: int) -> List[List[T]]:
    """Split a list into at most ``chunks`` contiguous, nearly equal parts"""
    chunks = max(1, min(chunks, len(values)))
    size, extra = divmod(len(values), chunks)
    parts, start = [], 0
    for k in range(chunks):
        stop = start + size + (1 if k < extra else 0)
        parts.append(values[start:stop])
        start = stop
    return [p for p in parts if p]
