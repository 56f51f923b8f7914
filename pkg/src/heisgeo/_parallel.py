"""Optional thread parallelism, capped by the HEISGEO_THREADS variable."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count() -> int:
    """Parallel workers to use; defaults to 1 (serial)."""
    try:
        return max(1, int(os.environ.get("HEISGEO_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn, items) -> list:
    """Order-preserving map, threaded when HEISGEO_THREADS > 1.

    Results are merged by position, so the output is identical to the serial
    one regardless of scheduling.
    """
    items = list(items)
    count = min(worker_count(), len(items)) or 1
    if count == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=count) as pool:
        return list(pool.map(fn, items))
