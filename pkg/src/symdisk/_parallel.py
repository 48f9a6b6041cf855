"""Order-preserving map with the SYMDISK_THREADS parallelism cap."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

from .config import thread_count


def pmap(fn, items):
    """list(map(fn, items)), threaded when SYMDISK_THREADS > 1.

    Results keep input order either way, so callers stay deterministic.
    """
    items = list(items)
    n = thread_count()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))
