"""Order-preserving parallel map over independent work items."""

from __future__ import annotations

import os
import pickle
from concurrent.futures import ProcessPoolExecutor

WORKERS_ENV = "LATTICE_ENERGY_WORKERS"


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:
        return os.cpu_count() or 1


def pmap(func, items, workers: int | None = None) -> list:
    """map(func, items) as a list, in input order, optionally across processes."""
    items = list(items)
    n = workers if workers is not None else worker_count()
    if n <= 1 or len(items) < 4 * n:
        return [func(x) for x in items]
    try:
        pickle.dumps(func)
    except Exception:
        return [func(x) for x in items]
    chunk = max(1, len(items) // (8 * n))
    with ProcessPoolExecutor(max_workers=n) as ex:
        return list(ex.map(func, items, chunksize=chunk))
