"""Small shared helpers: thread cap and ordered parallel map."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_cap() -> int:
    """Internal parallelism cap from SPENCER_LAB_THREADS (default 1)."""
    raw = os.environ.get("SPENCER_LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def ordered_map(fn, items):
    """Map preserving input order; threads only when the cap allows."""
    cap = thread_cap()
    items = list(items)
    if cap <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(cap, len(items))) as pool:
        return list(pool.map(fn, items))
