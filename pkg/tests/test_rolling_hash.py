"""
Rolling-hash algebra, prefix and blocked tables, and the fingerprint LCP.

Checks the worked values for p = 31, the concat/remove_prefix round trip,
blocked-vs-full table agreement and the compare-count bound of lcp_hash.
"""
import math

import numpy as np
import pytest

from edist.errors import AlphabetError, ConfigError
from edist.lcp.rolling_hash import (
    EMPTY,
    MERSENNE_61,
    HashParams,
    HashValue,
    build_blocked_table,
    build_prefix_table,
    dual_binary_search,
    get_hash,
    hash_char,
    hash_concat,
    hash_remove_prefix,
    lcp_hash,
    lcp_hash_with_count,
    params_for,
    range_hash,
)
from edist.oracle.dp import lcp_naive
from edist.utils.parallel import set_num_threads

from tests.helpers import mutate, random_codes

P31 = HashParams.create(31, max_len=64)


def test_hash_char():
    assert hash_char(97, P31) == HashValue(97, 1)
    assert hash_char(98, P31) == HashValue(98, 1)
    with pytest.raises(AlphabetError):
        hash_char(0, P31)


def test_concat_and_remove_prefix():
    ab = hash_concat(hash_char(97, P31), hash_char(98, P31), P31)
    assert ab == HashValue(3105, 2)
    assert hash_remove_prefix(ab, hash_char(97, P31), P31) == HashValue(98, 1)
    assert hash_remove_prefix(ab, ab, P31) == EMPTY
    assert hash_remove_prefix(ab, EMPTY, P31) == ab
    assert hash_concat(ab, EMPTY, P31) == ab
    assert hash_concat(EMPTY, ab, P31) == ab


def test_remove_prefix_rejects_longer_prefix():
    with pytest.raises(ValueError):
        hash_remove_prefix(HashValue(97, 1), HashValue(3105, 2), P31)


def test_params_validation():
    with pytest.raises(ConfigError):
        HashParams.create(1)
    with pytest.raises(ConfigError):
        HashParams.create(MERSENNE_61)
    p = HashParams.random(seed=7, alphabet_size=256, max_len=10)
    assert 256 < p.p < MERSENNE_61
    assert p.powers[0] == 1
    assert all(p.powers[i] == p.powers[i - 1] * p.p % p.q for i in range(1, 11))
    assert p.power(40) == pow(p.p, 40, p.q)


def test_prefix_table_examples():
    assert build_prefix_table("aba", P31).entries.tolist() == [0, 97, 3105, 96352]
    assert build_prefix_table("", P31).entries.tolist() == [0]
    assert build_prefix_table("aaaa", P31).entries[2] == 97 * 31 + 97


def test_blocked_table_examples():
    T = build_blocked_table("abab", 2, P31)
    assert T.entries.tolist() == [0, 3105, 2987010]
    assert T.words == 3
    assert build_blocked_table("aba", 2, P31).entries.tolist() == [0, 3105]
    assert build_blocked_table("abcab", 1, P31).entries.tolist() == build_prefix_table("abcab", P31).entries.tolist()


def test_get_hash_and_range_hash():
    T = build_blocked_table("abab", 2, P31)
    assert get_hash("abab", T, 3) == HashValue(96352, 3)
    assert get_hash("abab", T, 0) == EMPTY
    assert get_hash("abab", T, 4).value == 2987010
    assert T.extension(4) == 0 and T.extension(3) == 1
    assert range_hash("abab", T, 2, 2) == HashValue(3135, 2)
    assert range_hash("abab", T, 3, 0) == EMPTY
    assert range_hash("abab", T, 1, 4) == get_hash("abab", T, 4)


def test_concat_round_trip_on_random_strings(rng):
    params = HashParams.random(seed=3, alphabet_size=4, max_len=200)
    for _ in range(300):
        s1 = random_codes(rng, int(rng.integers(0, 40)), 4)
        s2 = random_codes(rng, int(rng.integers(0, 40)), 4)
        h1 = HashValue(int(build_prefix_table(s1, params).entries[-1]), len(s1))
        h2 = HashValue(int(build_prefix_table(s2, params).entries[-1]), len(s2))
        h12 = hash_concat(h1, h2, params)
        assert h12.value == int(build_prefix_table(np.concatenate([s1, s2]), params).entries[-1])
        assert hash_remove_prefix(h12, h1, params) == h2


@pytest.mark.parametrize("b", [1, 2, 4, 32])
def test_blocked_matches_prefix_table(rng, b):
    A = random_codes(rng, 500, 4)
    params = params_for(A, seed=11)
    full = build_prefix_table(A, params)
    blocked = build_blocked_table(A, b, params)
    assert blocked.words == len(A) // b + 1
    for x in rng.integers(0, len(A) + 1, 200).tolist():
        assert get_hash(A, blocked, x).value == int(full.entries[x])


def test_builds_identical_across_grains_and_threads(rng):
    A = random_codes(rng, 3000, 256)
    params = params_for(A, seed=5)
    reference = build_prefix_table(A, params, grain=1 << 20).entries
    blocked_ref = build_blocked_table(A, 8, params, grain=1 << 20).entries
    set_num_threads(4)
    for grain in (7, 64, 1000):
        assert np.array_equal(build_prefix_table(A, params, grain=grain).entries, reference)
        assert np.array_equal(build_blocked_table(A, 8, params, grain=grain).entries, blocked_ref)


def test_dual_binary_search():
    for L in range(0, 70):
        for limit in (L, L + 1, 100):
            found, probes = dual_binary_search(lambda l: l <= L, limit)
            assert found == L
            assert probes <= 2 * math.ceil(math.log2(L + 2)) + 2
    assert dual_binary_search(lambda l: True, 0) == (0, 0)


def test_lcp_hash_banana():
    params = params_for("banana", "bandana", seed=1)
    TA, TB = build_prefix_table("banana", params), build_prefix_table("bandana", params)
    assert lcp_hash("banana", "bandana", TA, TB, 1, 1) == 3
    assert lcp_hash("banana", "bandana", TA, TB, 2, 1) == 0
    assert lcp_hash("banana", "bandana", TA, TB, 7, 1) == 0
    TC = build_prefix_table("banana", params)
    assert lcp_hash("banana", "banana", TA, TC, 1, 1) == 6


def test_lcp_hash_rejects_mismatched_params():
    TA = build_prefix_table("abc", HashParams.create(31, 3))
    TB = build_prefix_table("abc", HashParams.create(37, 3))
    with pytest.raises(ConfigError):
        lcp_hash("abc", "abc", TA, TB, 1, 1)


@pytest.mark.parametrize("b", [1, 4])
def test_lcp_hash_matches_naive_with_bounded_compares(rng, b):
    A = random_codes(rng, 400, 2)
    B = mutate(rng, A, 6, 2)
    params = params_for(A, B, seed=9)
    TA, TB = build_blocked_table(A, b, params), build_blocked_table(B, b, params)
    for _ in range(500):
        x = int(rng.integers(1, len(A) + 2))
        y = int(rng.integers(1, len(B) + 2))
        L, compares = lcp_hash_with_count(A, B, TA, TB, x, y)
        assert L == lcp_naive(A, B, x, y)
        assert compares <= 2 * math.ceil(math.log2(L + 2)) + 2
