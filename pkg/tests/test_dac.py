"""
Grid regions, boundary distance matrices, the Monge combine and the
stripe-doubling driver.
"""
import math
import threading
import tracemalloc

import numpy as np
import pytest

from edist.dac.aalm import aalm_sp, base_sp, empty_matrix
from edist.dac.combine import (
    DENSE_LIMIT,
    CombineWorkspace,
    WorkspacePool,
    combine,
    minplus_monge,
    shared_boundary,
)
from edist.dac.dacmm import DacStats, check, edit_distance_dacmm
from edist.dac.grid import INF, EdgeRule, GridRegion
from edist.errors import DimensionError
from edist.oracle.dp import banded_dp, dp_edit_distance, minplus_boundary, region_distances
from edist.utils.parallel import set_num_threads

from tests.helpers import mutate, random_codes


def reference(A, B, region):
    return region_distances(A, B, region.inputs().tolist(), region.outputs().tolist(),
                            region.row, region.col, region.rows, region.cols,
                            region.lo, region.hi)


def test_boundary_order_and_corners():
    g = GridRegion(0, 0, 2, 3)
    assert g.inputs().tolist() == [[2, 0], [1, 0], [0, 0], [0, 1], [0, 2], [0, 3]]
    assert g.outputs().tolist() == [[2, 0], [2, 1], [2, 2], [2, 3], [1, 3], [0, 3]]


def test_quadrants_split_at_ceil():
    g1, g2, g3, g4 = GridRegion(1, 2, 5, 4).quadrants()
    assert (g1.row, g1.col, g1.rows, g1.cols) == (1, 2, 3, 2)
    assert (g2.row, g2.col, g2.rows, g2.cols) == (1, 4, 3, 2)
    assert (g3.row, g3.col, g3.rows, g3.cols) == (4, 2, 2, 2)
    assert (g4.row, g4.col, g4.rows, g4.cols) == (4, 4, 2, 2)


def test_stripe_is_inherited_and_can_empty_a_region():
    whole = GridRegion.whole(8, 8, 1)
    assert (whole.lo, whole.hi) == (-1, 1)
    g1, g2, g3, g4 = whole.quadrants()
    assert (g2.lo, g2.hi) == (-1, 1) and not g2.is_empty()
    far = GridRegion(0, 6, 2, 2).with_stripe(-1, 1)
    assert far.is_empty()
    assert len(far.inputs()) == 0
    assert aalm_sp(far, EdgeRule.of("a" * 8, "a" * 8)).shape == (0, 0)
    assert empty_matrix().shape == (0, 0)


def test_base_sp_matches_region_dp(rng):
    A = random_codes(rng, 12, 2)
    B = random_codes(rng, 14, 2)
    rule = EdgeRule.of(A, B)
    for region in (GridRegion(0, 0, 12, 14),
                   GridRegion(2, 3, 5, 6),
                   GridRegion(2, 3, 5, 6).with_stripe(-3, 1),
                   GridRegion.whole(12, 14, 3)):
        got = base_sp(region, rule)
        assert np.array_equal(got.dist, reference(A, B, region))


def test_corner_distance_is_edit_distance():
    rule = EdgeRule.of("kitten", "sitting")
    matrix = base_sp(GridRegion.whole(6, 7), rule)
    assert matrix.distance((0, 0), (6, 7)) == 3
    with pytest.raises(KeyError):
        matrix.input_index(3, 3)


@pytest.mark.parametrize("cutoff", [1, 2, 4])
def test_aalm_matches_base_solver(rng, cutoff):
    A = random_codes(rng, 20, 4)
    B = mutate(rng, A, 5, 4)
    rule = EdgeRule.of(A, B)
    n, m = len(A), len(B)
    for region in (GridRegion.whole(n, m), GridRegion.whole(n, m, 4), GridRegion(3, 2, 9, 11)):
        stats = DacStats()
        got = aalm_sp(region, rule, cutoff, stats)
        want = base_sp(region, rule)
        assert np.array_equal(got.inputs, want.inputs)
        assert np.array_equal(got.outputs, want.outputs)
        assert np.array_equal(got.dist, want.dist)
        assert stats.base_solves >= 1


def test_aalm_rejects_bad_cutoff():
    with pytest.raises(ValueError):
        aalm_sp(GridRegion.whole(2, 2), EdgeRule.of("ab", "ab"), cutoff=0)


@pytest.mark.parametrize("stripe", [None, (-2, 3)])
def test_combine_halves_equals_whole(rng, stripe):
    A = random_codes(rng, 10, 2)
    B = random_codes(rng, 9, 2)
    rule = EdgeRule.of(A, B)
    whole = GridRegion(0, 0, 10, 9)
    if stripe is not None:
        whole = whole.with_stripe(*stripe)
    want = base_sp(whole, rule)

    top, bottom = whole.sub(0, 0, 4, 9), whole.sub(4, 0, 6, 9)
    vertical = combine(base_sp(top, rule), base_sp(bottom, rule))
    left, right = whole.sub(0, 0, 10, 3), whole.sub(0, 3, 10, 6)
    horizontal = combine(base_sp(left, rule), base_sp(right, rule))

    for got in (vertical, horizontal):
        assert np.array_equal(got.inputs, want.inputs)
        assert np.array_equal(got.outputs, want.outputs)
        assert np.array_equal(got.dist, want.dist)


def test_combine_identity():
    m = base_sp(GridRegion.whole(2, 2), EdgeRule.of("ab", "ba"))
    assert combine(None, m) is m
    assert combine(m, None) is m
    assert combine(None, None) is None


def test_minplus_worked_example():
    dist, theta = minplus_monge(np.array([[0, 1], [2, 0]]), np.array([[0, 3], [1, 0]]))
    assert dist.tolist() == [[0, 1], [1, 0]]
    assert theta.tolist() == [[0, 1], [1, 1]]


def crossing_blocks(rng, size):
    A = random_codes(rng, size, 4)
    B = mutate(rng, A, size // 4, 4)
    rule = EdgeRule.of(A, B)
    r = len(A) // 2
    d1 = base_sp(GridRegion(0, 0, r, len(B)), rule)
    d2 = base_sp(GridRegion(r, 0, len(A) - r, len(B)), rule)
    w1, w2 = shared_boundary(d1, d2)
    return d1.dist[:, w1], d2.dist[w2, :]


def assert_monotone(theta):
    for row in theta:
        finite = row[row >= 0]
        assert (np.diff(finite) >= 0).all()
    for col in theta.T:
        finite = col[col >= 0]
        assert (np.diff(finite) >= 0).all()


@pytest.mark.parametrize("dense_limit", [0, DENSE_LIMIT])
def test_minplus_monge_matches_brute_force(rng, dense_limit):
    X, Y = crossing_blocks(rng, 24)
    dist, theta = minplus_monge(X, Y, dense_limit=dense_limit)
    want, arg = minplus_boundary(X, Y, with_argmin=True)
    assert np.array_equal(dist, want)
    assert np.array_equal(theta, arg)


@pytest.mark.parametrize("dense_limit", [0, DENSE_LIMIT])
def test_theta_is_monotone(rng, dense_limit):
    X, Y = crossing_blocks(rng, 30)
    dist, theta = minplus_monge(X, Y, dense_limit=dense_limit)
    assert_monotone(theta)
    assert ((dist < INF) == (theta >= 0)).all()


@pytest.mark.parametrize("dense_limit", [0, DENSE_LIMIT])
def test_minplus_identity(rng, dense_limit):
    X, _ = crossing_blocks(rng, 12)
    W = X.shape[1]
    identity = np.full((W, W), INF, dtype=np.int64)
    np.fill_diagonal(identity, 0)
    dist, theta = minplus_monge(X, identity, dense_limit=dense_limit)
    assert np.array_equal(dist, X)
    columns = np.tile(np.arange(W), (X.shape[0], 1))
    assert np.array_equal(theta, np.where(X < INF, columns, -1))
    assert np.array_equal(minplus_boundary(X, identity), X)


@pytest.mark.parametrize("size,dense_limit", [(12, DENSE_LIMIT), (60, 0)])
def test_reserved_product_does_not_allocate(rng, size, dense_limit):
    X, Y = crossing_blocks(rng, size)
    workspace = CombineWorkspace.reserve(X.shape[0], Y.shape[1], X.shape[1])
    # first call settles numpy's own lazy setup
    minplus_monge(X, Y, workspace, dense_limit)
    tracemalloc.start()
    try:
        dist, theta = minplus_monge(X, Y, workspace, dense_limit)
        _, peak = tracemalloc.get_traced_memory()
    finally:
        tracemalloc.stop()
    assert workspace.late_allocations == 0
    assert peak < 64 * 1024 < workspace.nbytes
    want, arg = minplus_boundary(X, Y, with_argmin=True)
    assert np.array_equal(dist, want)
    assert np.array_equal(theta, arg)


def test_undersized_workspace_scans_in_chunks(rng):
    X, Y = crossing_blocks(rng, 20)
    small = CombineWorkspace(1)
    dist, theta = minplus_monge(X, Y, small, dense_limit=0)
    assert small.late_allocations == 1
    want, arg = minplus_boundary(X, Y, with_argmin=True)
    assert np.array_equal(dist, want)
    assert np.array_equal(theta, arg)


def test_parallel_combine_matches_serial(rng):
    X, Y = crossing_blocks(rng, 80)
    serial = minplus_monge(X, Y)
    set_num_threads(4)
    workspace = CombineWorkspace.reserve(X.shape[0], Y.shape[1], X.shape[1])
    assert workspace.parts == 4
    parallel = minplus_monge(X, Y, workspace)
    assert np.array_equal(parallel[0], serial[0])
    assert np.array_equal(parallel[1], serial[1])


def test_combine_with_explicit_shared_mapping(rng):
    A = random_codes(rng, 9, 3)
    B = random_codes(rng, 11, 3)
    rule = EdgeRule.of(A, B)
    whole = GridRegion.whole(9, 11, 3)
    d1 = base_sp(whole.sub(0, 0, 9, 5), rule)
    d2 = base_sp(whole.sub(0, 5, 9, 6), rule)
    w1, w2 = shared_boundary(d1, d2)
    got = combine(d1, d2, shared=(w1, w2))
    want = combine(d1, d2)
    assert np.array_equal(got.dist, want.dist)
    assert np.array_equal(got.theta, want.theta)
    assert np.array_equal(got.dist, base_sp(whole, rule).dist)
    with pytest.raises(DimensionError):
        combine(d1, d2, shared=(w1, w2[:-1]))


def split_pair(rng, clipped):
    """A random region of at most 8 x 8, split once along a straight edge."""
    rows, cols = int(rng.integers(2, 9)), int(rng.integers(2, 9))
    whole = GridRegion(0, 0, rows, cols)
    if clipped:
        whole = whole.with_stripe(-int(rng.integers(0, 4)), int(rng.integers(0, 4)))
    if rng.integers(0, 2):
        r = int(rng.integers(1, rows))
        parts = whole.sub(0, 0, r, cols), whole.sub(r, 0, rows - r, cols)
    else:
        c = int(rng.integers(1, cols))
        parts = whole.sub(0, 0, rows, c), whole.sub(0, c, rows, cols - c)
    return whole, parts


@pytest.mark.parametrize("clipped", [False, True])
def test_combine_on_random_grid_splits(rng, clipped):
    done = 0
    while done < 100:
        whole, (first, second) = split_pair(rng, clipped)
        if first.is_empty() or second.is_empty():
            continue
        A = random_codes(rng, whole.rows, 3)
        B = random_codes(rng, whole.cols, 3)
        rule = EdgeRule.of(A, B)
        d1, d2 = base_sp(first, rule), base_sp(second, rule)
        w1, w2 = shared_boundary(d1, d2)

        dist, theta = minplus_monge(d1.dist[:, w1], d2.dist[w2, :], dense_limit=0)
        want, arg = minplus_boundary(d1.dist, d2.dist, W=(w1, w2), with_argmin=True)
        assert np.array_equal(dist, want)
        assert np.array_equal(theta, arg)
        assert_monotone(theta)

        merged = combine(d1, d2)
        reference_matrix = base_sp(whole, rule)
        assert np.array_equal(merged.outputs, reference_matrix.outputs)
        assert np.array_equal(merged.dist, reference_matrix.dist)
        done += 1


def test_workspace_pool_is_per_thread():
    pool = WorkspacePool.for_region(GridRegion.whole(40, 40, 3))
    assert pool.side == 14
    mine = pool.get()
    assert pool.get() is mine
    theirs = []
    worker = threading.Thread(target=lambda: theirs.append(pool.get()))
    worker.start()
    worker.join()
    assert theirs[0] is not mine
    assert len(pool.workspaces) == 2
    assert mine.side == 14 and mine.parts == 1


def test_quadrant_boundaries_fit_the_pool():
    region = GridRegion.whole(64, 64, 5)
    bound = region.boundary_bound()
    pending = [region]
    while pending:
        q = pending.pop()
        if q.is_empty() or min(q.rows, q.cols) < 2:
            continue
        assert len(q.inputs()) <= bound
        assert len(q.outputs()) <= bound
        pending.extend(q.quadrants())


def test_check_matches_banded_dp(rng):
    for _ in range(10):
        A = random_codes(rng, 30, 2)
        B = mutate(rng, A, 6, 2)
        k, _ = dp_edit_distance(A, B)
        rule = EdgeRule.of(A, B)
        for t in range(max(1, abs(len(A) - len(B))), max(len(A), len(B)) + 1, 3):
            sigma, _ = check(t, rule)
            assert sigma == banded_dp(A, B, t)
            if t >= k:
                assert sigma == k
            else:
                assert sigma > t


def test_check_sigma_shrinks_and_settles(rng):
    for _ in range(5):
        A = random_codes(rng, 24, 3)
        B = mutate(rng, A, 7, 3)
        k, _ = dp_edit_distance(A, B)
        rule = EdgeRule.of(A, B)
        widths = range(max(1, abs(len(A) - len(B))), max(len(A), len(B)) + 1)
        sigmas = [check(t, rule)[0] for t in widths]
        assert all(a >= b for a, b in zip(sigmas, sigmas[1:]))
        assert all(sigma == k for t, sigma in zip(widths, sigmas) if t >= k)


def test_check_shares_one_workspace(rng):
    A = random_codes(rng, 120, 4)
    B = mutate(rng, A, 15, 4)
    k, stats = edit_distance_dacmm(A, B)
    assert k == dp_edit_distance(A, B)[0]
    assert stats.late_allocations == 0


def test_check_rejects_unreachable_stripe():
    rule = EdgeRule.of("abcdef", "ab")
    with pytest.raises(ValueError):
        check(3, rule)
    with pytest.raises(ValueError):
        check(0, EdgeRule.of("ab", "ab"))


def test_kitten_sitting_doubles_the_stripe():
    k, stats = edit_distance_dacmm("kitten", "sitting")
    assert k == 3
    assert stats.widths == [1, 2, 4]
    assert stats.sigmas[-1] == 3
    assert stats.checks == 3


def test_edge_cases():
    assert edit_distance_dacmm("", "")[0] == 0
    assert edit_distance_dacmm("abc", "")[0] == 3
    assert edit_distance_dacmm("", "ab")[0] == 2
    assert edit_distance_dacmm("same", "same")[0] == 0


@pytest.mark.parametrize("cutoff", [1, 4])
def test_matches_dp_on_random_pairs(rng, cutoff):
    for _ in range(15):
        n = int(rng.integers(1, 50))
        A = random_codes(rng, n, 4)
        B = mutate(rng, A, int(rng.integers(0, 12)), 4)
        expected, _ = dp_edit_distance(A, B)
        k, stats = edit_distance_dacmm(A, B, cutoff=cutoff)
        assert k == expected
        assert stats.checks <= math.ceil(math.log2(max(k, 1))) + 2


def test_check_count_is_exact_for_equal_lengths(rng):
    checked = 0
    while checked < 15:
        A = random_codes(rng, 50, 4)
        B = mutate(rng, A, int(rng.integers(1, 12)), 4)
        if len(B) != len(A) or np.array_equal(A, B):
            continue
        k, stats = edit_distance_dacmm(A, B)
        if k == 0:
            continue
        assert stats.checks == math.ceil(math.log2(k)) + 1
        checked += 1


def test_parallel_driver_matches_serial(rng):
    A = random_codes(rng, 90, 4)
    B = mutate(rng, A, 10, 4)
    serial = edit_distance_dacmm(A, B)[0]
    set_num_threads(4)
    assert edit_distance_dacmm(A, B)[0] == serial
