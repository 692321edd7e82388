"""Worker-thread plumbing.

numba freezes its thread cap (NUMBA_NUM_THREADS) at first import, so the cap
must be raised before anything in this package touches numba.  Import this
module first; everything else imports numba only after it ran.
"""
from __future__ import annotations

import os

# Allow more workers than cores so thread-count determinism is testable even
# on a single-core box.
_MIN_THREAD_CAP = 8

if "NUMBA_NUM_THREADS" not in os.environ:
    os.environ["NUMBA_NUM_THREADS"] = str(max(os.cpu_count() or 1, _MIN_THREAD_CAP))

# workqueue is always available and deterministic to select; the TBB probe
# warns on older system TBBs otherwise.
os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")


def thread_cap() -> int:
    return int(os.environ["NUMBA_NUM_THREADS"])


def set_worker_count(threads: int | None) -> int:
    """Pin the numba worker count; None means 'all available'. Returns the
    count actually set (requests are clamped to [1, cap])."""
    import numba

    if threads is None:
        threads = os.cpu_count() or 1
    threads = max(1, min(int(threads), thread_cap()))
    numba.set_num_threads(threads)
    return threads
