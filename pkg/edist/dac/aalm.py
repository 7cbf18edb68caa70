"""Boundary distance matrices by recursive 2x2 splitting.

Small regions are solved directly with one DP per input vertex, all
sources advanced together row by row.
"""
from typing import Optional

import numpy as np

from edist.dac.combine import WorkspacePool, combine
from edist.dac.grid import INF, EdgeRule, GridRegion, SPMatrix
from edist.utils.logging import get_logger
from edist.utils.parallel import fork_join

logger = get_logger(__name__)

DEFAULT_CUTOFF = 4


def empty_matrix() -> SPMatrix:
    return SPMatrix(inputs=np.zeros((0, 2), dtype=np.int64), outputs=np.zeros((0, 2), dtype=np.int64),
                    dist=np.zeros((0, 0), dtype=np.int64))


def base_sp(region: GridRegion, rule: EdgeRule) -> SPMatrix:
    """Per-source DP over the region, masked to its stripe."""
    inputs = region.inputs()
    outputs = region.outputs()
    x0, y0, r, c = region.row, region.col, region.rows, region.cols
    ys = np.arange(y0, y0 + c + 1, dtype=np.int64)
    k = np.arange(c + 1, dtype=np.int64)
    src_row = inputs[:, 0] - x0
    src_col = inputs[:, 1] - y0

    S = len(inputs)
    right = np.full((S, r + 1), INF, dtype=np.int64)
    cur = np.full((S, c + 1), INF, dtype=np.int64)
    for dx in range(r + 1):
        x = x0 + dx
        if dx:
            nxt = cur + 1
            if c:
                w = rule.mismatch_row(x, y0 + 1, y0 + c + 1)
                np.minimum(nxt[:, 1:], cur[:, :-1] + w, out=nxt[:, 1:])
            cur = nxt
        hit = np.flatnonzero(src_row == dx)
        cur[hit, src_col[hit]] = 0
        outside = ~region.in_band(np.full(c + 1, x), ys)
        cur[:, outside] = INF
        cur = np.minimum.accumulate(cur - k, axis=1) + k
        cur[:, outside] = INF
        np.minimum(cur, INF, out=cur)
        right[:, dx] = cur[:, c]

    dist = np.empty((S, len(outputs)), dtype=np.int64)
    on_bottom = outputs[:, 0] == x0 + r
    dist[:, on_bottom] = cur[:, outputs[on_bottom, 1] - y0]
    dist[:, ~on_bottom] = right[:, outputs[~on_bottom, 0] - x0]
    return SPMatrix(inputs=inputs, outputs=outputs, dist=dist)


def merge_quadrants(g1: Optional[SPMatrix], g2: Optional[SPMatrix],
                    g3: Optional[SPMatrix], g4: Optional[SPMatrix],
                    pool: Optional[WorkspacePool] = None) -> Optional[SPMatrix]:
    """Three combines; a dropped quadrant changes the order so every combine shares one straight edge."""
    workspace = None if pool is None else pool.get()
    if g3 is None:
        return combine(g1, combine(g2, g4, workspace=workspace), workspace=workspace)
    if g2 is None:
        return combine(g1, combine(g3, g4, workspace=workspace), workspace=workspace)
    top = combine(g1, g2, workspace=workspace)
    bottom = combine(g3, g4, workspace=workspace)
    return combine(top, bottom, workspace=workspace)


def aalm_sp(region: GridRegion, rule: EdgeRule, cutoff: int = DEFAULT_CUTOFF,
            stats=None, pool: Optional[WorkspacePool] = None) -> SPMatrix:
    """All boundary-pair distances of ``region`` (stripe-clipped regions allowed).

    Every combine below this call draws its buffers from ``pool``, reserved
    for ``region`` when not given.
    """
    if cutoff < 1:
        raise ValueError(f"base-case cutoff must be at least 1, got {cutoff}")
    if region.is_empty():
        return empty_matrix()
    if min(region.rows, region.cols) <= cutoff:
        if stats is not None:
            stats.bump("base_solves")
        return base_sp(region, rule)
    if pool is None:
        pool = WorkspacePool.for_region(region)

    def solve(q: GridRegion) -> Optional[SPMatrix]:
        return None if q.is_empty() else aalm_sp(q, rule, cutoff, stats, pool)

    parts = fork_join(*[(lambda q=q: solve(q)) for q in region.quadrants()])
    if stats is not None:
        stats.bump("merges")
    return merge_quadrants(*parts, pool=pool)
