"""Shared helpers: canonical JSON and deterministic parallel mapping."""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    """Worker cap taken from GFL_THREADS (default 1).

    Results of every operation are independent of this value; it only
    bounds how many independent checks may run at once.
    """
    raw = os.environ.get("GFL_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        n = 1
    return max(1, n)


def parallel_map(fn, items):
    """Map `fn` over `items` preserving input order.

    Uses a thread pool when GFL_THREADS > 1; output is assembled in input
    order either way, so reports stay byte-identical across thread counts.
    """
    items = list(items)
    n = thread_count()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))


def canonical_json(obj) -> str:
    """Serialize with sorted keys and fixed separators (stable bytes)."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
