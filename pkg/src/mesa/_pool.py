"""Worker-pool helper for embarrassingly parallel experiment realizations.

``MESA_THREADS`` caps the worker count (default 1 = serial). Work items
are pure functions of their index, so results are identical regardless of
scheduling; output order is always by index.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("MESA_THREADS", "1")))
    except ValueError:
        return 1


def map_indexed(fn, n: int) -> list:
    """[fn(0), .., fn(n-1)], possibly computed by a thread pool."""
    workers = thread_count()
    if workers == 1 or n <= 1:
        return [fn(i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n)))
