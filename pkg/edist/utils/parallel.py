"""Fork-join runtime shared by every algorithm.

One process-wide thread pool. Work submitted from inside a pool worker
runs inline, so nested fork-join never waits on a saturated pool.
Results always come back in submission order.
"""
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, List, Optional, Sequence, TypeVar

from edist.utils.logging import get_logger

logger = get_logger(__name__)

T = TypeVar("T")

_lock = threading.Lock()
_pool: Optional[ThreadPoolExecutor] = None
_num_threads = 1
_local = threading.local()


def set_num_threads(n: int) -> None:
    """Resize the pool. The old pool finishes its queued work first."""
    global _pool, _num_threads
    if n < 1:
        raise ValueError(f"thread count must be positive, got {n}")
    with _lock:
        if n == _num_threads and (_pool is not None or n == 1):
            return
        old = _pool
        _num_threads = n
        _pool = ThreadPoolExecutor(max_workers=n, thread_name_prefix="edist",
                                   initializer=_mark_worker) if n > 1 else None
    if old is not None:
        old.shutdown(wait=True)
    logger.debug(f"fork-join pool sized to {n} threads")


def get_num_threads() -> int:
    return _num_threads


def _mark_worker() -> None:
    _local.in_worker = True


def _inline() -> bool:
    return _pool is None or getattr(_local, "in_worker", False)


def runs_inline() -> bool:
    """True when a fork_join issued from the calling thread would not fan out."""
    return _inline()


def fork_join(*thunks: Callable[[], Any]) -> List[Any]:
    """Run the thunks in parallel and return their results in argument order."""
    if len(thunks) <= 1 or _inline():
        return [thunk() for thunk in thunks]
    pool = _pool
    # The caller's own thunk runs here while the rest go to the pool.
    futures = [pool.submit(thunk) for thunk in thunks[1:]]
    first = thunks[0]()
    return [first] + [f.result() for f in futures]


def chunk_bounds(start: int, stop: int, grain: int, parts: Optional[int] = None) -> List[Sequence[int]]:
    """Split [start, stop) into contiguous chunks of at least ``grain`` indices."""
    total = stop - start
    if total <= 0:
        return []
    grain = max(1, grain)
    if parts is None:
        parts = get_num_threads()
    count = max(1, min(parts, total // grain))
    step, extra = divmod(total, count)
    bounds = []
    lo = start
    for i in range(count):
        hi = lo + step + (1 if i < extra else 0)
        bounds.append((lo, hi))
        lo = hi
    return bounds


def parallel_for(start: int, stop: int, body: Callable[[int, int], T], grain: int = 1) -> List[T]:
    """Call ``body(lo, hi)`` on each chunk of [start, stop); results in chunk order."""
    bounds = chunk_bounds(start, stop, grain)
    return fork_join(*[(lambda lo=lo, hi=hi: body(lo, hi)) for lo, hi in bounds])
