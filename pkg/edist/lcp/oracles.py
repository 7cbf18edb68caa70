"""The LCP-oracle interface the frontier search is written against.

All positions are 1-based; a position one past the end yields 0.
Oracles are immutable after construction and safe to query from any
number of threads.
"""
from typing import Optional, Protocol

from edist.errors import ConfigError
from edist.harness.sequence import SequenceLike, joint_codes
from edist.lcp.rolling_hash import (
    DEFAULT_GRAIN,
    HashParams,
    HashTable,
    range_value,
    dual_binary_search,
    params_for,
    table_for,
)
from edist.lcp.suffix_array import SuffixArrayIndex, lcp_sa
from edist.oracle.dp import lcp_naive


class LcpOracle(Protocol):
    n: int
    m: int

    def lcp(self, x: int, y: int) -> int:
        ...

    @property
    def words(self) -> int:
        ...


def _leading_match(a: list, b: list, i: int, j: int, count: int) -> int:
    for k in range(count):
        if a[i + k] != b[j + k]:
            return k
    return count


class NaiveLcp:
    """Character scan; the reference every other oracle is checked against."""

    def __init__(self, A: SequenceLike, B: SequenceLike):
        self.a, self.b = joint_codes(A, B)
        self.n, self.m = len(self.a), len(self.b)

    def lcp(self, x: int, y: int) -> int:
        return lcp_naive(self.a, self.b, x, y)

    @property
    def words(self) -> int:
        return 0


class HashLcp:
    """Fingerprint LCP over full (b == 1) or blocked prefix tables.

    The first ``fast_path`` characters are compared directly; only longer
    matches fall through to the exponential-then-binary search. A second
    parameter set, when given, must agree too.
    """

    def __init__(self, A: SequenceLike, B: SequenceLike, params: Optional[HashParams] = None,
                 b: int = 1, fast_path: int = 8, second: Optional[HashParams] = None,
                 seed: int = 0x5EED, grain: int = DEFAULT_GRAIN):
        if b < 1:
            raise ConfigError(f"block size must be at least 1, got {b}")
        self.a, self.b_codes = joint_codes(A, B)
        self.n, self.m = len(self.a), len(self.b_codes)
        self.block_size = b
        self.fast_path = fast_path
        self.params = params or params_for(self.a, self.b_codes, seed=seed)
        self.ta = table_for(self.a, self.params, b, grain)
        self.tb = table_for(self.b_codes, self.params, b, grain)
        self.second = second
        self.ta2: Optional[HashTable] = None
        self.tb2: Optional[HashTable] = None
        if second is not None:
            self.ta2 = table_for(self.a, second, b, grain)
            self.tb2 = table_for(self.b_codes, second, b, grain)
        self._a_list = self.a.tolist()
        self._b_list = self.b_codes.tolist()

    @classmethod
    def double(cls, A: SequenceLike, B: SequenceLike, b: int = 1, fast_path: int = 8,
               seed: int = 0x5EED, grain: int = DEFAULT_GRAIN) -> "HashLcp":
        a, bc = joint_codes(A, B)
        params = params_for(a, bc, seed=seed)
        sigma = max(int(a.max()) if len(a) else 1, int(bc.max()) if len(bc) else 1)
        return cls(a, bc, params, b, fast_path, params.second(seed, sigma), seed, grain)

    def _equal(self, x: int, y: int, l: int) -> bool:
        if range_value(self.a, self.ta, x, l) != range_value(self.b_codes, self.tb, y, l):
            return False
        if self.second is None:
            return True
        return range_value(self.a, self.ta2, x, l) == range_value(self.b_codes, self.tb2, y, l)

    def lcp(self, x: int, y: int) -> int:
        limit = min(self.n - x + 1, self.m - y + 1)
        if limit <= 0:
            return 0
        head = _leading_match(self._a_list, self._b_list, x - 1, y - 1, min(self.fast_path, limit))
        if head < self.fast_path or head == limit:
            return head
        x, y = x + head, y + head
        rest, _ = dual_binary_search(lambda l: self._equal(x, y, l), limit - head)
        return head + rest

    @property
    def words(self) -> int:
        extra = 0 if self.ta2 is None else self.ta2.words + self.tb2.words
        return self.ta.words + self.tb.words + extra


class SuffixArrayLcp:
    def __init__(self, A: SequenceLike, B: SequenceLike, fast_path: int = 8):
        a, b = joint_codes(A, B)
        self.index = SuffixArrayIndex.build(a, b, fast_path)
        self.n, self.m = self.index.n, self.index.m

    def lcp(self, x: int, y: int) -> int:
        return lcp_sa(self.index, x, y)

    @property
    def words(self) -> int:
        return self.index.words


class SwappedLcp:
    """The same oracle with the roles of A and B exchanged."""

    def __init__(self, inner: LcpOracle):
        self.inner = inner
        self.n, self.m = inner.m, inner.n

    def lcp(self, x: int, y: int) -> int:
        return self.inner.lcp(y, x)

    @property
    def words(self) -> int:
        return self.inner.words
