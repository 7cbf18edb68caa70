"""Combining two boundary distance matrices through their shared boundary.

For grid distances the leftmost optimal shared vertex theta(i, j) is
non-decreasing in i and in j wherever the distance is finite. The
min-plus product is filled in rounds of halving stride: each new entry
only scans the boundary range bracketed by the theta of its already
computed neighbours, three parity phases per round. Small products are
evaluated densely in one pass.

Every array a product touches (gathered operands, cell indices, search
bounds, candidate scans and the result itself) lives in a
``CombineWorkspace`` reserved up front. Phases whose cells or candidates
do not fit are processed in blocks instead of growing the buffers.
"""
import threading
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from edist.dac.grid import INF, GridRegion, SPMatrix, ccw_order
from edist.errors import DimensionError
from edist.utils.logging import get_logger
from edist.utils.parallel import chunk_bounds, fork_join, get_num_threads, runs_inline

logger = get_logger(__name__)

# cells per phase below which a phase is not split across workers
PHASE_GRAIN = 256
# products with at most this many terms are evaluated densely
DENSE_LIMIT = 1 << 14
_NO_ARG = np.iinfo(np.int64).max


class _Scan(NamedTuple):
    """One worker's candidate buffers."""
    owner: np.ndarray
    idx: np.ndarray
    kk: np.ndarray
    vals: np.ndarray
    vals2: np.ndarray
    mask: np.ndarray
    starts: np.ndarray
    mins: np.ndarray
    args: np.ndarray


class _Cells(NamedTuple):
    """Per-cell state of one block of a phase."""
    ci: np.ndarray
    cj: np.ndarray
    at: np.ndarray
    lo: np.ndarray
    lens: np.ndarray
    ends: np.ndarray
    nb: np.ndarray
    got: np.ndarray
    dead: np.ndarray
    cut: np.ndarray


class CombineWorkspace:
    """Scratch and result buffers for min-plus products up to ``side`` x ``side``.

    Candidate buffers are partitioned among ``parts`` workers.
    ``late_allocations`` counts every growth after the initial
    reservation; a correctly reserved workspace keeps it at zero.
    """

    MAX_RESERVE = 1 << 16
    MAX_CELLS = 1 << 16

    def __init__(self, capacity: int, parts: int = 1, side: int = 1):
        self.parts = max(1, parts)
        self.late_allocations = 0
        self._allocate(max(1, capacity), max(1, side))

    @classmethod
    def reserve(cls, P: int, Q: int, W: int, parts: Optional[int] = None) -> "CombineWorkspace":
        if parts is None:
            parts = get_num_threads()
        parts = max(1, parts)
        per_part = max(W, min((P * Q + (P + Q) * W) // parts + W, cls.MAX_RESERVE))
        return cls(per_part * parts, parts, max(P, Q, W))

    def _allocate(self, capacity: int, side: int) -> None:
        self.capacity = capacity
        self.side = side
        per = capacity // self.parts
        self.cells = max(side, min(side * side, self.MAX_CELLS))

        self._iota = np.arange(max(per, self.cells), dtype=np.int64)
        self._dist = np.empty(side * side, dtype=np.int64)
        self._theta = np.empty(side * side, dtype=np.int64)
        self._left = np.empty(side * side, dtype=np.int64)
        self._right = np.empty(side * side, dtype=np.int64)
        self._cube = np.empty(DENSE_LIMIT, dtype=np.int64)

        ints = [np.empty(self.cells, dtype=np.int64) for _ in range(8)]
        flags = [np.empty(self.cells, dtype=bool) for _ in range(2)]
        self._cells = _Cells(*ints, *flags)

        whole = _Scan(*(np.empty(capacity, dtype=bool if name == "mask" else np.int64)
                        for name in _Scan._fields))
        self._scans: List[_Scan] = [
            _Scan(*(a[p * per:(p + 1) * per] for a in whole)) for p in range(self.parts)
        ]

    def ensure(self, P: int, Q: int, W: int) -> None:
        """Grow to fit a P x W by W x Q product."""
        side = max(P, Q, W)
        if side <= self.side and self.capacity // self.parts >= W:
            return
        self.late_allocations += 1
        logger.debug(f"combine workspace grown: side {self.side} -> {max(self.side, side)}, "
                     f"capacity {self.capacity} -> {max(self.capacity, W * self.parts)}")
        self._allocate(max(self.capacity, W * self.parts), max(self.side, side))

    def scans(self) -> List[_Scan]:
        return self._scans

    def operands(self, P: int, W: int, Q: int) -> Tuple[np.ndarray, np.ndarray]:
        return self._left[:P * W].reshape(P, W), self._right[:W * Q].reshape(W, Q)

    def result(self, P: int, Q: int) -> Tuple[np.ndarray, np.ndarray]:
        return self._dist[:P * Q].reshape(P, Q), self._theta[:P * Q].reshape(P, Q)

    def block(self, count: int) -> _Cells:
        return _Cells(*(a[:count] for a in self._cells))

    @property
    def nbytes(self) -> int:
        arrays = [self._iota, self._dist, self._theta, self._left, self._right, self._cube, *self._cells]
        for scan in self._scans:
            arrays.extend(scan)
        return sum(a.nbytes for a in arrays)


class WorkspacePool:
    """One workspace per thread, all reserved for the same bound.

    Threads that would run fork_join inline get a single-part workspace.
    """

    def __init__(self, side: int):
        self.side = max(1, side)
        self._local = threading.local()
        self._lock = threading.Lock()
        self.workspaces: List[CombineWorkspace] = []

    @classmethod
    def for_region(cls, region: GridRegion) -> "WorkspacePool":
        return cls(region.boundary_bound())

    def get(self) -> CombineWorkspace:
        workspace = getattr(self._local, "workspace", None)
        if workspace is None:
            parts = 1 if runs_inline() else get_num_threads()
            workspace = CombineWorkspace.reserve(self.side, self.side, self.side, parts)
            self._local.workspace = workspace
            with self._lock:
                self.workspaces.append(workspace)
        return workspace

    @property
    def late_allocations(self) -> int:
        return sum(w.late_allocations for w in self.workspaces)


class _Product(NamedTuple):
    Xf: np.ndarray
    Yf: np.ndarray
    dist: np.ndarray
    theta: np.ndarray
    iota: np.ndarray
    P: int
    Q: int
    W: int


def _scan(pr: _Product, c: _Cells, first: int, stop: int, buf: _Scan) -> None:
    """Leftmost argmin of X[i, k] + Y[k, j] over k in [lo, lo + len) for cells [first, stop).

    Every length is at least 1.
    """
    cap = len(buf.owner)
    while first < stop:
        base = int(c.ends[first - 1]) if first else 0
        last = first + int(np.searchsorted(c.ends[first:stop], base + cap, side="right"))
        last = max(last, first + 1)
        count = last - first
        total = int(c.ends[last - 1]) - base

        starts = buf.starts[:count]
        np.subtract(c.ends[first:last], c.lens[first:last], out=starts)
        np.subtract(starts, base, out=starts)

        owner = buf.owner[:total]
        idx = buf.idx[:total]
        kk = buf.kk[:total]
        vals = buf.vals[:total]
        vals2 = buf.vals2[:total]
        mask = buf.mask[:total]

        kk.fill(0)
        kk[starts[1:]] = 1
        np.cumsum(kk, out=owner)

        np.take(starts, owner, out=idx, mode="clip")
        np.subtract(pr.iota[:total], idx, out=kk)
        np.take(c.lo[first:last], owner, out=idx, mode="clip")
        np.add(kk, idx, out=kk)

        np.take(c.ci[first:last], owner, out=idx, mode="clip")
        np.multiply(idx, pr.W, out=idx)
        np.add(idx, kk, out=idx)
        np.take(pr.Xf, idx, out=vals, mode="clip")

        np.take(c.cj[first:last], owner, out=idx, mode="clip")
        np.multiply(kk, pr.Q, out=vals2)
        np.add(idx, vals2, out=idx)
        np.take(pr.Yf, idx, out=vals2, mode="clip")
        np.add(vals, vals2, out=vals)

        mins = buf.mins[:count]
        np.minimum.reduceat(vals, starts, out=mins)
        np.take(mins, owner, out=idx, mode="clip")
        np.equal(vals, idx, out=mask)
        vals2.fill(_NO_ARG)
        np.copyto(vals2, kk, where=mask)
        args = buf.args[:count]
        np.minimum.reduceat(vals2, starts, out=args)

        # unreachable cells and cells with an empty range
        flag = buf.mask[:count]
        np.greater_equal(mins, INF, out=flag)
        np.logical_or(flag, c.dead[first:last], out=flag)
        np.copyto(mins, INF, where=flag)
        np.copyto(args, -1, where=flag)
        np.put(pr.dist, c.at[first:last], mins)
        np.put(pr.theta, c.at[first:last], args)
        first = last


def _raise_lower(pr: _Product, c: _Cells, offset: int) -> None:
    # a missing neighbour (-1) gives no bound
    np.add(c.at, offset, out=c.nb)
    np.take(pr.theta, c.nb, out=c.got, mode="clip")
    np.maximum(c.lo, c.got, out=c.lo)


def _cap_upper(pr: _Product, c: _Cells, offset: int, coord: np.ndarray, step: int, limit: int) -> None:
    np.add(c.at, offset, out=c.nb)
    np.take(pr.theta, c.nb, out=c.got, mode="clip")
    # past the edge, or unreachable: no bound
    np.add(coord, step, out=c.nb)
    np.greater_equal(c.nb, limit, out=c.dead)
    np.less(c.got, 0, out=c.cut)
    np.logical_or(c.dead, c.cut, out=c.cut)
    np.copyto(c.got, pr.W - 1, where=c.cut)
    np.minimum(c.lens, c.got, out=c.lens)


def _phase_block(pr: _Product, workspace: CombineWorkspace, r_first: int, rstep: int, rows: int,
                 c0: int, cstep: int, ncols: int, s: int, by_rows: bool, by_cols: bool) -> None:
    count = rows * ncols
    c = workspace.block(count)
    iota = pr.iota[:count]
    np.floor_divide(iota, ncols, out=c.ci)
    np.multiply(c.ci, rstep, out=c.ci)
    np.add(c.ci, r_first, out=c.ci)
    np.remainder(iota, ncols, out=c.cj)
    np.multiply(c.cj, cstep, out=c.cj)
    np.add(c.cj, c0, out=c.cj)
    np.multiply(c.ci, pr.Q, out=c.at)
    np.add(c.at, c.cj, out=c.at)

    c.lo.fill(0)
    c.lens.fill(pr.W - 1)
    if by_cols:
        _raise_lower(pr, c, -s)
        _cap_upper(pr, c, s, c.cj, s, pr.Q)
    if by_rows:
        _raise_lower(pr, c, -s * pr.Q)
        _cap_upper(pr, c, s * pr.Q, c.ci, s, pr.P)

    # lens holds the upper bound until here
    np.subtract(c.lens, c.lo, out=c.lens)
    np.add(c.lens, 1, out=c.lens)
    np.less_equal(c.lens, 0, out=c.dead)
    np.copyto(c.lens, 1, where=c.dead)
    np.cumsum(c.lens, out=c.ends)

    scans = workspace.scans()
    if len(scans) == 1 or count <= PHASE_GRAIN:
        _scan(pr, c, 0, count, scans[0])
        return
    bounds = chunk_bounds(0, count, PHASE_GRAIN, parts=len(scans))
    fork_join(*[(lambda a=a, b=b, buf=buf: _scan(pr, c, a, b, buf)) for (a, b), buf in zip(bounds, scans)])


def _phase(pr: _Product, workspace: CombineWorkspace, r0: int, rstep: int, c0: int, cstep: int,
           s: int, by_rows: bool, by_cols: bool) -> None:
    nrows = len(range(r0, pr.P, rstep))
    ncols = len(range(c0, pr.Q, cstep))
    if nrows == 0 or ncols == 0:
        return
    per_block = max(1, workspace.cells // ncols)
    for a in range(0, nrows, per_block):
        _phase_block(pr, workspace, r0 + a * rstep, rstep, min(per_block, nrows - a),
                     c0, cstep, ncols, s, by_rows, by_cols)


def _dense(X: np.ndarray, Y: np.ndarray, dist: np.ndarray, theta: np.ndarray,
           workspace: CombineWorkspace) -> None:
    P, W = X.shape
    Q = Y.shape[1]
    # (P, Q, W) so the reduced axis is the contiguous one
    cube = workspace._cube[:P * Q * W].reshape(P, Q, W)
    np.add(X[:, None, :], Y.T[None, :, :], out=cube)
    np.min(cube, axis=2, out=dist)
    np.argmin(cube, axis=2, out=theta)
    flag = workspace.block(P * Q).dead.reshape(P, Q)
    np.greater_equal(dist, INF, out=flag)
    np.copyto(dist, INF, where=flag)
    np.copyto(theta, -1, where=flag)


def minplus_monge(X: np.ndarray, Y: np.ndarray, workspace: Optional[CombineWorkspace] = None,
                  dense_limit: int = DENSE_LIMIT) -> Tuple[np.ndarray, np.ndarray]:
    """Min-plus product of two grid distance blocks and its leftmost argmin.

    The returned arrays live in ``workspace`` and are overwritten by its
    next product.
    """
    X = np.ascontiguousarray(X, dtype=np.int64)
    Y = np.ascontiguousarray(Y, dtype=np.int64)
    if X.shape[1] != Y.shape[0]:
        raise DimensionError(f"shared boundary sizes differ: {X.shape[1]} vs {Y.shape[0]}")
    P, W = X.shape
    Q = Y.shape[1]
    if workspace is None:
        workspace = CombineWorkspace.reserve(P, Q, W)
    workspace.ensure(P, Q, W)
    dist, theta = workspace.result(P, Q)
    dist.fill(INF)
    theta.fill(-1)
    if P == 0 or Q == 0 or W == 0:
        return dist, theta

    if P * Q * W <= min(dense_limit, DENSE_LIMIT):
        _dense(X, Y, dist, theta, workspace)
        return dist, theta

    pr = _Product(X.ravel(), Y.ravel(), dist.ravel(), theta.ravel(), workspace._iota, P, Q, W)
    _phase(pr, workspace, 0, P, 0, Q, 0, False, False)

    s = 1 << max(0, (max(P, Q) - 1).bit_length())
    s //= 2
    while s >= 1:
        # (even, odd): bracketed by the left and right neighbours in the row
        _phase(pr, workspace, 0, 2 * s, s, 2 * s, s, False, True)
        # (odd, even): bracketed by the neighbours above and below
        _phase(pr, workspace, s, 2 * s, 0, 2 * s, s, True, False)
        # (odd, odd): all four neighbours are known now
        _phase(pr, workspace, s, 2 * s, s, 2 * s, s, True, True)
        s //= 2

    return dist, theta


def _point_keys(points: np.ndarray) -> np.ndarray:
    return points[:, 0].astype(np.int64) * (1 << 32) + points[:, 1].astype(np.int64)


def shared_boundary(d1: SPMatrix, d2: SPMatrix) -> Tuple[np.ndarray, np.ndarray]:
    """Index translation for W = outputs(d1) & inputs(d2), in boundary order.

    Returns (columns of d1, rows of d2) naming the same vertices.
    """
    k1 = _point_keys(d1.outputs)
    k2 = _point_keys(d2.inputs)
    _, w1, w2 = np.intersect1d(k1, k2, assume_unique=True, return_indices=True)
    order = ccw_order(d1.outputs[w1])
    return w1[order].astype(np.int64), w2[order].astype(np.int64)


def combine(d1: Optional[SPMatrix], d2: Optional[SPMatrix],
            shared: Optional[Tuple[np.ndarray, np.ndarray]] = None,
            workspace: Optional[CombineWorkspace] = None) -> Optional[SPMatrix]:
    """Distance matrix of the union of two regions; d2 lies below or right of d1.

    A missing side (None) is the identity.
    """
    if d1 is None:
        return d2
    if d2 is None:
        return d1

    w1, w2 = shared if shared is not None else shared_boundary(d1, d2)
    w1 = np.asarray(w1, dtype=np.int64)
    w2 = np.asarray(w2, dtype=np.int64)
    if len(w1) != len(w2):
        raise DimensionError(f"shared boundary sides differ: {len(w1)} vs {len(w2)}")

    P, W, Q = len(d1.inputs), len(w1), len(d2.outputs)
    if workspace is None:
        workspace = CombineWorkspace.reserve(P, Q, W)
    workspace.ensure(P, Q, W)
    X, Y = workspace.operands(P, W, Q)
    np.take(d1.dist, w1, axis=1, out=X, mode="clip")
    np.take(d2.dist, w2, axis=0, out=Y, mode="clip")
    crossing, arg = minplus_monge(X, Y, workspace)

    keep_out1 = np.ones(len(d1.outputs), dtype=bool)
    keep_out1[w1] = False
    keep_in2 = np.ones(len(d2.inputs), dtype=bool)
    keep_in2[w2] = False

    inputs = np.concatenate([d1.inputs, d2.inputs[keep_in2]])
    outputs = np.concatenate([d1.outputs[keep_out1], d2.outputs])
    p1, q1 = len(d1.inputs), int(keep_out1.sum())

    dist = np.full((len(inputs), len(outputs)), INF, dtype=np.int64)
    dist[:p1, :q1] = d1.dist[:, keep_out1]
    dist[:p1, q1:] = crossing
    dist[p1:, q1:] = d2.dist[keep_in2, :]

    theta = np.full(dist.shape, -1, dtype=np.int64)
    theta[:p1, q1:] = arg

    rows = ccw_order(inputs)
    cols = ccw_order(outputs)
    return SPMatrix(inputs=inputs[rows], outputs=outputs[cols],
                    dist=dist[np.ix_(rows, cols)], theta=theta[np.ix_(rows, cols)])
