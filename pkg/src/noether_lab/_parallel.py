import os
from concurrent.futures import ThreadPoolExecutor

ENV_THREADS = "NOETHER_LAB_THREADS"


def worker_count() -> int:
    """Worker cap from ``NOETHER_LAB_THREADS`` (unset or 0 means one per CPU)."""
    raw = os.environ.get(ENV_THREADS, "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return n


def pmap(fn, items, min_items=64):
    """Ordered map; results always come back in input order."""
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1 or len(items) < min_items:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
