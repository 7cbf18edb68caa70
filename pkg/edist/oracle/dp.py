"""Reference implementations used as test oracles and as the baseline.

These stay deliberately plain: one code path each, no shortcuts.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence as Seq, Tuple

import numpy as np

from edist.config import Config
from edist.dac.grid import INF
from edist.errors import DimensionError, ResourceCapError
from edist.harness.sequence import SequenceLike, joint_codes
from edist.utils.logging import get_logger
from edist.utils.parallel import chunk_bounds, fork_join

logger = get_logger(__name__)


@dataclass
class DPTable:
    """Full (n+1) x (m+1) table, D[i][j] = distance between A[1..i] and B[1..j]."""
    cells: np.ndarray

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        return int(self.cells[ij])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.cells.shape


def _enforce_cap(n: int, m: int, cap: Optional[int]) -> None:
    if cap is None:
        cap = Config.ORACLE_CAP
    if n * m > cap:
        raise ResourceCapError(n * m, cap)


def dp_edit_distance(A: SequenceLike, B: SequenceLike, cap: Optional[int] = None,
                     keep_table: bool = False) -> Tuple[int, Optional[DPTable]]:
    a, b = (c.tolist() for c in joint_codes(A, B))
    n, m = len(a), len(b)
    _enforce_cap(n, m, cap)

    rows: List[List[int]] = []
    prev = list(range(m + 1))
    if keep_table:
        rows.append(prev)
    for i in range(1, n + 1):
        cur = [i] + [0] * m
        ai = a[i - 1]
        for j in range(1, m + 1):
            if ai == b[j - 1]:
                cur[j] = prev[j - 1]
            else:
                cur[j] = 1 + min(prev[j], prev[j - 1], cur[j - 1])
        if keep_table:
            rows.append(cur)
        prev = cur

    table = DPTable(np.array(rows, dtype=np.int64)) if keep_table else None
    return prev[m], table


def antidiagonal_edit_distance(A: SequenceLike, B: SequenceLike, cap: Optional[int] = None,
                               grain: Optional[int] = None) -> int:
    """Wavefront DP over i + j = d, keeping three waves indexed by i."""
    a, b = joint_codes(A, B)
    n, m = len(a), len(b)
    _enforce_cap(n, m, cap)
    if grain is None:
        grain = Config.GRAIN

    prev2 = np.zeros(n + 1, dtype=np.int64)
    prev1 = np.zeros(n + 1, dtype=np.int64)
    cur = np.zeros(n + 1, dtype=np.int64)

    def wave(d: int, lo: int, hi: int) -> None:
        ii = np.arange(lo, hi, dtype=np.int64)
        sub = prev2[ii - 1] + (a[ii - 1] != b[d - ii - 1])
        dele = prev1[ii - 1] + 1
        ins = prev1[ii] + 1
        cur[lo:hi] = np.minimum(np.minimum(sub, dele), ins)

    for d in range(n + m + 1):
        lo, hi = max(1, d - m), min(n, d - 1) + 1
        if hi > lo:
            if hi - lo > grain:
                bounds = chunk_bounds(lo, hi, grain)
                fork_join(*[(lambda l=l, h=h, d=d: wave(d, l, h)) for l, h in bounds])
            else:
                wave(d, lo, hi)
        if d <= m:
            cur[0] = d
        if d <= n:
            cur[d] = d
        prev2, prev1, cur = prev1, cur, prev2

    # after the last rotation the final wave lives in prev1
    return int(prev1[n])


def banded_dp(A: SequenceLike, B: SequenceLike, t: int) -> int:
    """Edit distance over paths that stay inside |i - j| <= t; INF if none exists."""
    a, b = (c.tolist() for c in joint_codes(A, B))
    n, m = len(a), len(b)
    if t < 0:
        raise ValueError(f"band width must be non-negative, got {t}")

    prev = {j: j for j in range(0, min(m, t) + 1)}
    for i in range(1, n + 1):
        cur = {}
        for j in range(max(0, i - t), min(m, i + t) + 1):
            best = INF
            if j == 0:
                best = i
            else:
                diag = prev.get(j - 1, INF)
                if diag < INF:
                    best = min(best, diag + (a[i - 1] != b[j - 1]))
                left = cur.get(j - 1, INF)
                if left < INF:
                    best = min(best, left + 1)
            up = prev.get(j, INF)
            if up < INF:
                best = min(best, up + 1)
            cur[j] = best
        prev = cur
    return min(prev.get(m, INF), INF)


def lcp_naive(A: SequenceLike, B: SequenceLike, x: int, y: int) -> int:
    """Character scan from 1-based positions x in A and y in B."""
    a, b = joint_codes(A, B)
    length = 0
    i, j = x - 1, y - 1
    while i + length < len(a) and j + length < len(b) and a[i + length] == b[j + length]:
        length += 1
    return length


def minplus_boundary(D1: np.ndarray, D2: np.ndarray,
                     W: Optional[Tuple[Seq[int], Seq[int]]] = None,
                     with_argmin: bool = False):
    """Brute-force min-plus product through the shared boundary W.

    W pairs D1 column indices with D2 row indices; without it the whole
    column/row ranges are used. INF is absorbing. With ``with_argmin`` the
    leftmost minimising boundary index is returned too (-1 where INF).
    """
    D1 = np.asarray(D1, dtype=np.int64)
    D2 = np.asarray(D2, dtype=np.int64)
    if W is None:
        if D1.shape[1] != D2.shape[0]:
            raise DimensionError(f"cannot multiply {D1.shape} by {D2.shape}")
        w1 = list(range(D1.shape[1]))
        w2 = list(range(D2.shape[0]))
    else:
        w1, w2 = list(W[0]), list(W[1])
        if len(w1) != len(w2):
            raise DimensionError(f"shared boundary sides differ: {len(w1)} vs {len(w2)}")

    P, Q = D1.shape[0], D2.shape[1]
    out = np.full((P, Q), INF, dtype=np.int64)
    arg = np.full((P, Q), -1, dtype=np.int64)
    for i in range(P):
        for j in range(Q):
            best, where = INF, -1
            for l in range(len(w1)):
                left, right = int(D1[i, w1[l]]), int(D2[w2[l], j])
                if left >= INF or right >= INF:
                    continue
                if left + right < best:
                    best, where = left + right, l
            out[i, j] = best
            arg[i, j] = where
    if with_argmin:
        return out, arg
    return out


def region_distances(A: SequenceLike, B: SequenceLike,
                     sources: Seq[Tuple[int, int]], targets: Seq[Tuple[int, int]],
                     row: int, col: int, rows: int, cols: int,
                     lo: Optional[int] = None, hi: Optional[int] = None) -> np.ndarray:
    """Shortest distances between vertices of one grid region, by per-source DP.

    Vertices (x, y) with row <= x <= row+rows and col <= y <= col+cols, and,
    when given, lo <= x - y <= hi. Diagonal edges into (x, y) cost 0 iff
    A[x] == B[y]; all other edges cost 1.
    """
    a, b = (c.tolist() for c in joint_codes(A, B))

    def inside(x: int, y: int) -> bool:
        if lo is not None and x - y < lo:
            return False
        if hi is not None and x - y > hi:
            return False
        return True

    out = np.full((len(sources), len(targets)), INF, dtype=np.int64)
    for s, (sx, sy) in enumerate(sources):
        dist = {}
        for x in range(sx, row + rows + 1):
            for y in range(sy, col + cols + 1):
                if not inside(x, y):
                    continue
                if (x, y) == (sx, sy):
                    dist[(x, y)] = 0
                    continue
                best = INF
                if (x - 1, y) in dist:
                    best = min(best, dist[(x - 1, y)] + 1)
                if (x, y - 1) in dist:
                    best = min(best, dist[(x, y - 1)] + 1)
                if (x - 1, y - 1) in dist:
                    best = min(best, dist[(x - 1, y - 1)] + (a[x - 1] != b[y - 1]))
                if best < INF:
                    dist[(x, y)] = best
        for t, target in enumerate(targets):
            out[s, t] = dist.get(tuple(target), INF)
    return out
