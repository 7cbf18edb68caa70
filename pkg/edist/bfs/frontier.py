"""Frontier BFS over the diagonals of the DP-DAG.

Round t holds, per diagonal i = x - y, the farthest row reachable with
exactly t edits. Each round takes the best of three predecessors and then
slides along the diagonal with one LCP query. The loop stops as soon as
diagonal n - m reaches row n.
"""
import threading
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from edist.config import Config
from edist.errors import DimensionError
from edist.harness.sequence import SequenceLike, as_codes
from edist.lcp.oracles import LcpOracle, SwappedLcp
from edist.utils.logging import get_logger
from edist.utils.parallel import parallel_for

logger = get_logger(__name__)

UNREACHED = -1


@dataclass(frozen=True)
class Frontier:
    """Round ``t``: rows[i - lo] = f_t[i] for diagonals lo..lo+len(rows)-1."""
    t: int
    lo: int
    rows: np.ndarray

    @property
    def hi(self) -> int:
        return self.lo + len(self.rows) - 1

    def get(self, i: int) -> int:
        if i < self.lo or i > self.hi:
            return UNREACHED
        return int(self.rows[i - self.lo])


@dataclass
class BfsStats:
    k: int = 0
    frontier_total: int = 0
    lcp_queries: int = 0
    lcp_sum: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def add_queries(self, count: int, total: int) -> None:
        with self._lock:
            self.lcp_queries += count
            self.lcp_sum += total


class _Buffer:
    """Diagonals -radius..radius, stored at offset i + radius."""

    def __init__(self, radius: int):
        self.radius = radius
        self.rows = np.full(2 * radius + 1, UNREACHED, dtype=np.int64)

    def grow(self, radius: int) -> None:
        if radius <= self.radius:
            return
        new_radius = self.radius
        while new_radius < radius:
            new_radius *= 2
        rows = np.full(2 * new_radius + 1, UNREACHED, dtype=np.int64)
        shift = new_radius - self.radius
        rows[shift:shift + len(self.rows)] = self.rows
        self.rows, self.radius = rows, new_radius

    def window(self, lo: int, hi: int) -> np.ndarray:
        return self.rows[lo + self.radius:hi + self.radius + 1]


class _Scratch:
    """Per-round work arrays, grown by doubling alongside the buffers."""

    def __init__(self, radius: int):
        self.radius = 0
        self.grow(radius)

    def grow(self, radius: int) -> None:
        if radius <= self.radius:
            return
        new_radius = max(1, self.radius)
        while new_radius < radius:
            new_radius *= 2
        size = 2 * new_radius + 3
        self.radius = new_radius
        self.iota = np.arange(size, dtype=np.int64)
        self.diag = np.empty(size, dtype=np.int64)
        self.inherited = np.empty(size, dtype=np.int64)
        self.cand = np.empty(size, dtype=np.int64)
        self.y = np.empty(size, dtype=np.int64)
        self.slide = np.empty(size, dtype=np.int64)
        self.ok = np.empty(size, dtype=bool)
        self.flag = np.empty(size, dtype=bool)


def _candidate(src: np.ndarray, diag: np.ndarray, step: int, n: int, m: int,
               out: np.ndarray, y: np.ndarray, ok: np.ndarray, flag: np.ndarray) -> np.ndarray:
    """Rows reached from a predecessor diagonal, UNREACHED where off the grid."""
    np.add(src, step, out=out)
    np.subtract(out, diag, out=y)
    np.not_equal(src, UNREACHED, out=ok)
    np.less_equal(out, n, out=flag)
    np.logical_and(ok, flag, out=ok)
    np.greater_equal(y, 0, out=flag)
    np.logical_and(ok, flag, out=ok)
    np.less_equal(y, m, out=flag)
    np.logical_and(ok, flag, out=ok)
    np.logical_not(ok, out=flag)
    np.copyto(out, UNREACHED, where=flag)
    return out


def edit_distance_bfs(A: SequenceLike, B: SequenceLike, lcp: LcpOracle,
                      grain: Optional[int] = None,
                      on_round: Optional[Callable[[Frontier], None]] = None) -> Tuple[int, BfsStats]:
    """Edit distance of A and B by frontier BFS, plus the work counters.

    ``lcp`` answers queries for (A, B) in that order; the shorter input is
    moved to B internally. ``on_round`` sees a copy of every frontier.
    Rounds run in two rotating buffers plus scratch, all grown by doubling.
    """
    n, m = len(as_codes(A)), len(as_codes(B))
    if (lcp.n, lcp.m) != (n, m):
        raise DimensionError(f"LCP oracle built for ({lcp.n}, {lcp.m}), inputs are ({n}, {m})")
    if grain is None:
        grain = Config.GRAIN
    if n < m:
        n, m = m, n
        lcp = SwappedLcp(lcp)

    stats = BfsStats()
    if m == 0:
        stats.k = n
        return n, stats

    target = n - m
    f0 = lcp.lcp(1, 1)
    stats.add_queries(1, f0)
    stats.frontier_total = 1
    prev, cur = _Buffer(16), _Buffer(16)
    scratch = _Scratch(16)
    prev.window(0, 0)[:] = f0
    if on_round is not None:
        on_round(Frontier(0, 0, np.array([f0], dtype=np.int64)))
    if target == 0 and f0 == n:
        return 0, stats

    t = 0
    while True:
        t += 1
        prev.grow(t + 1)
        cur.grow(t + 1)
        scratch.grow(t + 1)
        lo, hi = max(-t, -m), min(t, n)
        width = hi - lo + 1
        diag = scratch.diag[:width]
        inherited = scratch.inherited[:width]
        cand, y = scratch.cand[:width], scratch.y[:width]
        ok, flag = scratch.ok[:width], scratch.flag[:width]
        np.add(scratch.iota[:width], lo, out=diag)

        cur.rows.fill(UNREACHED)
        best = cur.window(lo, hi)
        np.abs(diag, out=y)
        np.less_equal(y, t - 1, out=ok)
        np.copyto(best, prev.window(lo, hi), where=ok)
        inherited[:] = best
        for src, step in ((prev.window(lo, hi), 1), (prev.window(lo - 1, hi - 1), 1),
                          (prev.window(lo + 1, hi + 1), 0)):
            np.maximum(best, _candidate(src, diag, step, n, m, cand, y, ok, flag), out=best)

        # diagonals that improved and can still slide
        np.greater(best, inherited, out=ok)
        np.less(best, n, out=flag)
        np.logical_and(ok, flag, out=ok)
        np.subtract(best, diag, out=y)
        np.less(y, m, out=flag)
        np.logical_and(ok, flag, out=ok)
        count = int(np.count_nonzero(ok))
        slide = scratch.slide[:count]
        np.compress(ok, scratch.iota[:width], out=slide)

        def extend(a: int, b: int) -> None:
            total = 0
            for s in slide[a:b].tolist():
                x = int(best[s])
                step = lcp.lcp(x + 1, x - (lo + s) + 1)
                best[s] = x + step
                total += step
            stats.add_queries(b - a, total)

        if width > grain:
            parallel_for(0, count, extend, grain=grain)
        else:
            extend(0, count)

        stats.frontier_total += width
        if on_round is not None:
            on_round(Frontier(t, lo, best.copy()))
        logger.debug(f"round {t}: diagonals [{lo}, {hi}], {count} slides")

        if lo <= target <= hi and best[target - lo] == n:
            stats.k = t
            return t, stats
        prev, cur = cur, prev
