"""
Every LCP oracle agrees with the character scan, on the same queries.
"""
import pytest

from edist.errors import ConfigError
from edist.harness.sequence import Sequence
from edist.lcp.oracles import HashLcp, NaiveLcp, SuffixArrayLcp, SwappedLcp

from tests.helpers import mutate, random_codes

BACKENDS = {
    "sa": lambda A, B: SuffixArrayLcp(A, B),
    "sa-nofast": lambda A, B: SuffixArrayLcp(A, B, fast_path=0),
    "hash": lambda A, B: HashLcp(A, B),
    "hash-nofast": lambda A, B: HashLcp(A, B, fast_path=0),
    "blocked": lambda A, B: HashLcp(A, B, b=4),
    "blocked-32": lambda A, B: HashLcp(A, B, b=32),
    "double": lambda A, B: HashLcp.double(A, B, b=2),
}


@pytest.mark.parametrize("backend", list(BACKENDS))
@pytest.mark.parametrize("sigma", [2, 4, 256])
def test_three_way_agreement(rng, backend, sigma):
    A = random_codes(rng, 800, sigma)
    B = mutate(rng, A, 12, sigma)
    naive = NaiveLcp(A, B)
    oracle = BACKENDS[backend](A, B)
    assert (oracle.n, oracle.m) == (len(A), len(B))
    for _ in range(600):
        x = int(rng.integers(1, len(A) + 2))
        y = int(rng.integers(1, len(B) + 2))
        assert oracle.lcp(x, y) == naive.lcp(x, y)
    for x in range(1, len(A) + 1, 11):
        y = min(x, len(B))
        assert oracle.lcp(x, y) == naive.lcp(x, y)


def test_sequences_with_different_alphabets_are_recoded():
    A = Sequence.from_bytes(b"banana")
    B = Sequence.from_bytes(b"bandana")
    for oracle in (NaiveLcp(A, B), HashLcp(A, B), SuffixArrayLcp(A, B)):
        assert oracle.lcp(1, 1) == 3
        assert oracle.lcp(4, 5) == 3


def test_swapped_oracle():
    inner = NaiveLcp("xabc", "abcd")
    swapped = SwappedLcp(inner)
    assert (swapped.n, swapped.m) == (4, 4)
    assert swapped.lcp(1, 2) == inner.lcp(2, 1) == 3


def test_words():
    A, B = list(range(1, 101)), list(range(1, 51))
    assert HashLcp(A, B).words == (len(A) + 1) + (len(B) + 1)
    assert HashLcp(A, B, b=8).words == (len(A) // 8 + 1) + (len(B) // 8 + 1)
    assert HashLcp.double(A, B, b=8).words == 2 * ((len(A) // 8 + 1) + (len(B) // 8 + 1))
    assert SuffixArrayLcp(A, B).words > 0
    assert NaiveLcp(A, B).words == 0


def test_block_size_must_be_positive():
    with pytest.raises(ConfigError):
        HashLcp("abc", "abd", b=0)
