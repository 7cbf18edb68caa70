"""Polynomial rolling hash, prefix tables and the fingerprint LCP query.

h(S) = sum S[i] * p^(|S|-i) mod q, so two consecutive pieces combine as

    h(S1 S2) = h(S1) * p^|S2| + h(S2)          (concat)
    h(S2)    = h(S1 S2) - h(S1) * p^|S2|        (remove_prefix)

The empty string hashes to 0, which makes concat a monoid.
Table words are stored as uint64; arithmetic happens on Python ints so
that 61-bit products never overflow.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np

from edist.errors import AlphabetError, ConfigError
from edist.harness.sequence import SequenceLike, as_codes
from edist.utils.logging import get_logger
from edist.utils.parallel import chunk_bounds, fork_join

logger = get_logger(__name__)

MERSENNE_61 = (1 << 61) - 1
MERSENNE_31 = (1 << 31) - 1

DEFAULT_GRAIN = 1 << 14


@dataclass(frozen=True)
class HashValue:
    value: int
    length: int


EMPTY = HashValue(0, 0)


@dataclass(frozen=True)
class HashParams:
    """Base ``p``, modulus ``q`` and the power table p^0..p^P mod q."""
    p: int
    q: int
    powers: List[int] = field(repr=False, compare=False)

    @classmethod
    def create(cls, p: int, max_len: int = 0, q: int = MERSENNE_61) -> "HashParams":
        if not 1 < p < q:
            raise ConfigError(f"hash base must satisfy 1 < p < q, got p={p}, q={q}")
        powers = [1] * (max_len + 1)
        for i in range(1, max_len + 1):
            powers[i] = powers[i - 1] * p % q
        return cls(p=p, q=q, powers=powers)

    @classmethod
    def random(cls, seed: int, alphabet_size: int, max_len: int, q: int = MERSENNE_61) -> "HashParams":
        """Draw p uniformly from [alphabet_size + 1, q)."""
        rng = np.random.default_rng(seed)
        p = int(rng.integers(alphabet_size + 1, q))
        logger.debug(f"hash base drawn: p={p} q={q} seed={seed}")
        return cls.create(p, max_len, q)

    def second(self, seed: int, alphabet_size: int) -> "HashParams":
        """An independent (p', q') pair for double hashing."""
        return HashParams.random(seed ^ 0x9E3779B9, alphabet_size, len(self.powers) - 1, MERSENNE_31)

    def power(self, e: int) -> int:
        if e < len(self.powers):
            return self.powers[e]
        return pow(self.p, e, self.q)


@dataclass(frozen=True)
class PrefixHashTable:
    """entries[x] = h(A[1..x]), entries[0] = 0."""
    entries: np.ndarray
    params: HashParams

    @property
    def n(self) -> int:
        return len(self.entries) - 1

    @property
    def words(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class BlockedHashTable:
    """entries[j] = h(A[1..j*b]); the trailing partial block is not stored."""
    b: int
    n: int
    entries: np.ndarray
    params: HashParams

    @property
    def words(self) -> int:
        return len(self.entries)

    def extension(self, x: int) -> int:
        """Characters get_hash has to fold in on top of the stored block for prefix x."""
        return x - (x // self.b) * self.b


HashTable = Union[PrefixHashTable, BlockedHashTable]


def hash_char(c: int, params: HashParams) -> HashValue:
    if c <= 0:
        raise AlphabetError(f"code {c} is reserved for the sentinel and is never hashed")
    return HashValue(c % params.q, 1)


def hash_concat(h1: HashValue, h2: HashValue, params: HashParams) -> HashValue:
    value = (h1.value * params.power(h2.length) + h2.value) % params.q
    return HashValue(value, h1.length + h2.length)


def hash_remove_prefix(h12: HashValue, h1: HashValue, params: HashParams) -> HashValue:
    rest = h12.length - h1.length
    if rest < 0:
        raise ValueError(f"prefix of length {h1.length} is longer than the whole ({h12.length})")
    value = (h12.value - h1.value * params.power(rest)) % params.q
    return HashValue(value, rest)


def _scan(items: List[int], item_len: int, params: HashParams, grain: int) -> List[int]:
    """Inclusive prefix fold of equal-length fingerprints under concat.

    Two passes: every chunk folds locally from 0, then each chunk's carry
    (the fold of all chunks before it) is shifted in. Output is identical
    to a sequential fold whatever the chunking.
    """
    q = params.q
    shift = params.power(item_len)
    out = [0] * (len(items) + 1)
    bounds = chunk_bounds(0, len(items), grain)

    def local(lo: int, hi: int) -> int:
        h = 0
        for i in range(lo, hi):
            h = (h * shift + items[i]) % q
            out[i + 1] = h
        return h

    totals = fork_join(*[(lambda lo=lo, hi=hi: local(lo, hi)) for lo, hi in bounds])

    carries = []
    carry = 0
    for (lo, hi), total in zip(bounds, totals):
        carries.append(carry)
        carry = (carry * params.power(item_len * (hi - lo)) + total) % q

    def shift_in(lo: int, hi: int, c: int) -> None:
        if c == 0:
            return
        for i in range(lo, hi):
            out[i + 1] = (c * params.power(item_len * (i + 1 - lo)) + out[i + 1]) % q

    fork_join(*[(lambda lo=lo, hi=hi, c=c: shift_in(lo, hi, c)) for (lo, hi), c in zip(bounds, carries)])
    return out


def _check_codes(codes: np.ndarray) -> None:
    if codes.size and codes.min() <= 0:
        raise AlphabetError("sequence contains code 0, which is reserved for the sentinel")


def build_prefix_table(A: SequenceLike, params: HashParams, grain: int = DEFAULT_GRAIN) -> PrefixHashTable:
    codes = as_codes(A)
    _check_codes(codes)
    entries = _scan(codes.tolist(), 1, params, grain)
    return PrefixHashTable(entries=np.array(entries, dtype=np.uint64), params=params)


def build_blocked_table(A: SequenceLike, b: int, params: HashParams, grain: int = DEFAULT_GRAIN) -> BlockedHashTable:
    if b < 1:
        raise ConfigError(f"block size must be at least 1, got {b}")
    codes = as_codes(A)
    _check_codes(codes)
    n = len(codes)
    blocks = n // b
    values = codes.tolist()
    q, p = params.q, params.p
    block_hashes = [0] * blocks

    def hash_blocks(lo: int, hi: int) -> None:
        for j in range(lo, hi):
            h = 0
            for c in values[j * b:(j + 1) * b]:
                h = (h * p + c) % q
            block_hashes[j] = h

    bounds = chunk_bounds(0, blocks, max(1, grain // b))
    fork_join(*[(lambda lo=lo, hi=hi: hash_blocks(lo, hi)) for lo, hi in bounds])
    entries = _scan(block_hashes, b, params, max(1, grain // b))
    return BlockedHashTable(b=b, n=n, entries=np.array(entries, dtype=np.uint64), params=params)


def _prefix_value(codes: np.ndarray, T: HashTable, x: int) -> int:
    if isinstance(T, PrefixHashTable):
        return int(T.entries[x])
    j = x // T.b
    h = int(T.entries[j])
    q, p = T.params.q, T.params.p
    for i in range(j * T.b, x):
        h = (h * p + int(codes[i])) % q
    return h


def get_hash(A: SequenceLike, T: HashTable, x: int) -> HashValue:
    """h(A[1..x]) from the nearest stored block plus at most b-1 characters."""
    if x == 0:
        return EMPTY
    codes = as_codes(A)
    if not 0 <= x <= len(codes):
        raise IndexError(f"prefix length {x} outside 0..{len(codes)}")
    return HashValue(_prefix_value(codes, T, x), x)


def range_hash(A: SequenceLike, T: HashTable, x: int, l: int) -> HashValue:
    """Fingerprint of the length-l substring starting at 1-based position x."""
    if l == 0:
        return EMPTY
    whole = get_hash(A, T, x - 1 + l)
    head = get_hash(A, T, x - 1)
    return hash_remove_prefix(whole, head, T.params)


def range_value(codes: np.ndarray, T: HashTable, x: int, l: int) -> int:
    hi = _prefix_value(codes, T, x - 1 + l)
    lo = _prefix_value(codes, T, x - 1)
    return (hi - lo * T.params.power(l)) % T.params.q


def dual_binary_search(equal, limit: int) -> Tuple[int, int]:
    """Largest L <= limit with equal(L), given equal is monotone (true then false).

    Lengths 1, 2, 4, ... are probed until one fails, then a binary search
    runs between the last success and the first failure.
    Returns (L, number of probes).
    """
    if limit <= 0:
        return 0, 0
    probes = 0
    lo = 0
    hi = limit + 1
    l = 1
    while l <= limit:
        probes += 1
        if equal(l):
            lo = l
            l *= 2
        else:
            hi = l
            break
    while hi - lo > 1:
        mid = (lo + hi) // 2
        probes += 1
        if equal(mid):
            lo = mid
        else:
            hi = mid
    return lo, probes


def lcp_hash_with_count(A: SequenceLike, B: SequenceLike, TA: HashTable, TB: HashTable,
                        x: int, y: int) -> Tuple[int, int]:
    """LCP of A[x..] and B[y..] by fingerprints, plus the number of compares issued."""
    if TA.params.p != TB.params.p or TA.params.q != TB.params.q:
        raise ConfigError("both tables must be built with the same hash parameters")
    a = as_codes(A)
    b = as_codes(B)
    limit = min(len(a) - x + 1, len(b) - y + 1)

    def equal(l: int) -> bool:
        return range_value(a, TA, x, l) == range_value(b, TB, y, l)

    return dual_binary_search(equal, limit)


def lcp_hash(A: SequenceLike, B: SequenceLike, TA: HashTable, TB: HashTable,
             x: int, y: int) -> int:
    return lcp_hash_with_count(A, B, TA, TB, x, y)[0]


def table_for(A: SequenceLike, params: HashParams, b: int = 1,
              grain: int = DEFAULT_GRAIN) -> HashTable:
    """Full prefix table for b == 1, blocked table otherwise."""
    if b == 1:
        return build_prefix_table(A, params, grain)
    return build_blocked_table(A, b, params, grain)


def max_code(*seqs: SequenceLike) -> int:
    return max((int(as_codes(s).max()) for s in seqs if len(as_codes(s))), default=1)


def params_for(*seqs: SequenceLike, seed: int, q: int = MERSENNE_61,
               max_len: Optional[int] = None) -> HashParams:
    """Seeded parameters valid for every code appearing in ``seqs``."""
    if max_len is None:
        max_len = max((len(as_codes(s)) for s in seqs), default=0)
    return HashParams.random(seed, max_code(*seqs), max_len, q)
