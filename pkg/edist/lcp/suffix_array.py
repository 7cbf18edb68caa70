"""Suffix array over A . 0 . B, its LCP array and a sparse-table RMQ.

Any LCP between A[x..] and B[y..] is then one range minimum between the
ranks of the two suffixes in the concatenation.
"""
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from edist.errors import AlphabetError
from edist.harness.sequence import SequenceLike, as_codes, joint_codes
from edist.utils.logging import get_logger
from edist.utils.parallel import chunk_bounds, fork_join

logger = get_logger(__name__)

# below this many symbols a plain comparison sort is faster than recursing
NAIVE_CUTOFF = 8
# sample suffixes per independently merged chunk
MERGE_GRAIN = 4096


def _naive_sa(s: np.ndarray) -> np.ndarray:
    values = s.tolist()
    return np.array(sorted(range(len(values)), key=lambda i: values[i:]), dtype=np.int64)


def _dc3(s: np.ndarray) -> np.ndarray:
    """Skew algorithm. ``s`` holds values >= 1; 0 is used for padding."""
    n = len(s)
    if n <= NAIVE_CUTOFF:
        return _naive_sa(s)

    n0, n1, n2 = (n + 2) // 3, (n + 1) // 3, n // 3
    n02 = n0 + n2
    t = np.concatenate([s, np.zeros(3, dtype=np.int64)])

    # sample positions i % 3 != 0, plus a dummy at n when n % 3 == 1
    pos = np.arange(n + n0 - n1, dtype=np.int64)
    s12 = pos[pos % 3 != 0]
    order = np.lexsort((t[s12 + 2], t[s12 + 1], t[s12]))
    sa12 = s12[order]

    a, b, c = t[sa12], t[sa12 + 1], t[sa12 + 2]
    new = np.ones(n02, dtype=bool)
    new[1:] = (a[1:] != a[:-1]) | (b[1:] != b[:-1]) | (c[1:] != c[:-1])
    names = np.cumsum(new)

    def reduced(p: np.ndarray) -> np.ndarray:
        return np.where(p % 3 == 1, p // 3, p // 3 + n0)

    if names[-1] < n02:
        s12r = np.empty(n02, dtype=np.int64)
        s12r[reduced(sa12)] = names
        sa12r = _dc3(s12r)
        sa12 = np.where(sa12r < n0, 3 * sa12r + 1, 3 * (sa12r - n0) + 2)

    rank = np.zeros(n + 3, dtype=np.int64)
    rank[sa12] = np.arange(1, n02 + 1)

    # the dummy sorts first; it is not a real suffix
    if n0 > n1:
        sa12 = sa12[1:]

    sa0 = np.arange(0, n, 3, dtype=np.int64)
    sa0 = sa0[np.lexsort((rank[sa0 + 1], t[sa0]))]
    return np.array(_merge(t.tolist(), rank.tolist(), sa12.tolist(), sa0.tolist()), dtype=np.int64)


def _merge(tl: List[int], rl: List[int], s12: List[int], s0: List[int]) -> List[int]:
    """Merge sorted sample and non-sample suffixes.

    The sample list is cut into chunks; each cut finds its place in ``s0``
    by binary search, and the chunk pairs merge independently.
    """
    def sample_first(i: int, j: int) -> bool:
        if i % 3 == 1:
            return (tl[i], rl[i + 1]) < (tl[j], rl[j + 1])
        return (tl[i], tl[i + 1], rl[i + 2]) < (tl[j], tl[j + 1], rl[j + 2])

    def merge_range(q: int, q_end: int, p: int, p_end: int) -> List[int]:
        out: List[int] = []
        while p < p_end and q < q_end:
            if sample_first(s12[q], s0[p]):
                out.append(s12[q])
                q += 1
            else:
                out.append(s0[p])
                p += 1
        out.extend(s12[q:q_end])
        out.extend(s0[p:p_end])
        return out

    def place(q: int) -> int:
        # number of s0 suffixes sorting before s12[q]
        lo, hi = 0, len(s0)
        while lo < hi:
            mid = (lo + hi) // 2
            if sample_first(s12[q], s0[mid]):
                hi = mid
            else:
                lo = mid + 1
        return lo

    bounds = chunk_bounds(0, len(s12), MERGE_GRAIN)
    if len(bounds) <= 1:
        return merge_range(0, len(s12), 0, len(s0))
    cuts = [0] + [place(q) for q, _ in bounds[1:]] + [len(s0)]
    pieces = fork_join(*[
        (lambda k=k, q=q, q_end=q_end: merge_range(q, q_end, cuts[k], cuts[k + 1]))
        for k, (q, q_end) in enumerate(bounds)
    ])
    return [i for piece in pieces for i in piece]


def build_suffix_array(C: SequenceLike, sentinel: Optional[int] = None) -> np.ndarray:
    """0-based suffix array of C.

    Code 0 is only accepted at index ``sentinel``, where it must sort as
    the unique minimum.
    """
    codes = as_codes(C)
    if codes.size and codes.min() < 0:
        raise AlphabetError("negative symbol codes are not allowed")
    zeros = np.flatnonzero(codes == 0)
    if zeros.size and (sentinel is None or zeros.size > 1 or int(zeros[0]) != sentinel):
        raise AlphabetError(f"code 0 found at positions {zeros[:8].tolist()}; only the sentinel may use it")
    if codes.size == 0:
        return np.zeros(0, dtype=np.int64)
    return _dc3(codes + 1)


def inverse_permutation(sa: np.ndarray) -> np.ndarray:
    rank = np.empty_like(sa)
    rank[sa] = np.arange(len(sa), dtype=sa.dtype)
    return rank


def build_lcp_array(C: SequenceLike, sa: np.ndarray, rank: Optional[np.ndarray] = None) -> np.ndarray:
    """Kasai: lcp[i] = LCP(C[sa[i-1]..], C[sa[i]..]), lcp[0] = 0."""
    c = as_codes(C).tolist()
    n = len(c)
    if rank is None:
        rank = inverse_permutation(sa)
    sa_l = sa.tolist()
    rank_l = rank.tolist()
    lcp = [0] * n
    h = 0
    for i in range(n):
        r = rank_l[i]
        if r == 0:
            h = 0
            continue
        j = sa_l[r - 1]
        while i + h < n and j + h < n and c[i + h] == c[j + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return np.array(lcp, dtype=np.int64)


class SparseTable:
    """Range minimum over an integer array, O(1) per query.

    levels[l][i] = min(values[i .. i + 2^l)).
    """

    def __init__(self, values: np.ndarray):
        self.values = np.asarray(values, dtype=np.int64)
        n = len(self.values)
        self.levels: List[np.ndarray] = [self.values]
        width = 1
        while 2 * width <= n:
            prev = self.levels[-1]
            self.levels.append(np.minimum(prev[:-width], prev[width:]))
            width *= 2

    def range_min(self, lo: int, hi: int) -> int:
        """min(values[lo..hi]) inclusive."""
        level = (hi - lo + 1).bit_length() - 1
        row = self.levels[level]
        return int(min(row[lo], row[hi - (1 << level) + 1]))

    def query(self, i: int, j: int) -> int:
        """min(lcp[i+1..j]) for ranks i < j (order of the arguments does not matter)."""
        if i > j:
            i, j = j, i
        if i == j:
            raise ValueError(f"rank range ({i}, {j}) is empty")
        return self.range_min(i + 1, j)

    @property
    def words(self) -> int:
        return sum(len(level) for level in self.levels)


def build_rmq(lcp: np.ndarray) -> SparseTable:
    return SparseTable(lcp)


@dataclass
class SuffixArrayIndex:
    concat: np.ndarray
    n: int
    m: int
    sa: np.ndarray
    rank: np.ndarray
    lcp: np.ndarray
    rmq: SparseTable
    fast_path: int = 8
    symbols: List[int] = field(default_factory=list, repr=False)

    @classmethod
    def build(cls, A: SequenceLike, B: SequenceLike, fast_path: int = 8) -> "SuffixArrayIndex":
        a, b = joint_codes(A, B)
        if (a.size and a.min() <= 0) or (b.size and b.min() <= 0):
            raise AlphabetError("inputs must use codes >= 1; 0 is the separator")
        concat = np.concatenate([a, np.zeros(1, dtype=np.int64), b])
        sa = build_suffix_array(concat, sentinel=len(a))
        rank = inverse_permutation(sa)
        lcp = build_lcp_array(concat, sa, rank)
        rmq = build_rmq(lcp)
        logger.debug(f"suffix array built: |C|={len(concat)} rmq levels={len(rmq.levels)}")
        return cls(concat=concat, n=len(a), m=len(b), sa=sa, rank=rank, lcp=lcp, rmq=rmq,
                   fast_path=fast_path, symbols=concat.tolist())

    @property
    def words(self) -> int:
        return len(self.sa) + len(self.rank) + len(self.lcp) + self.rmq.words


def lcp_sa(idx: SuffixArrayIndex, x: int, y: int) -> int:
    """LCP of A[x..n] and B[y..m], 1-based; one past the end gives 0."""
    n, m = idx.n, idx.m
    if x > n or y > m:
        return 0
    limit = min(n - x + 1, m - y + 1)
    i = x - 1
    j = n + y  # B[y] sits after A and the separator
    c = idx.symbols
    fast = min(idx.fast_path, limit)
    for k in range(fast):
        if c[i + k] != c[j + k]:
            return k
    if fast == limit:
        return limit
    return min(idx.rmq.query(int(idx.rank[i]), int(idx.rank[j])), limit)
