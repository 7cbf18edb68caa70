"""Grid regions of the DP-DAG and their boundary distance matrices.

Vertices are (x, y) with 0 <= x <= n, 0 <= y <= m. A region covers the
vertex rectangle [row, row+rows] x [col, col+cols], optionally clipped to
a diagonal stripe: (x-row) - (y-col) must lie in [-t2, t1].

Boundary order is counter-clockwise, with key (y, -x):
  inputs   left edge bottom-to-top, then top edge left-to-right
  outputs  bottom edge left-to-right, then right edge bottom-to-top
Each corner appears once.
"""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from edist.harness.sequence import SequenceLike, joint_codes

# saturating "unreachable"; INF + INF still fits in int64
INF = int(np.iinfo(np.int64).max // 4)


def ccw_order(points: np.ndarray) -> np.ndarray:
    """Indices that sort (k, 2) vertex coordinates into boundary order."""
    if len(points) == 0:
        return np.zeros(0, dtype=np.int64)
    return np.lexsort((-points[:, 0], points[:, 1]))


@dataclass(frozen=True)
class GridRegion:
    row: int
    col: int
    rows: int
    cols: int
    t1: Optional[int] = None
    t2: Optional[int] = None

    @classmethod
    def whole(cls, n: int, m: int, t: Optional[int] = None) -> "GridRegion":
        return cls(0, 0, n, m, t, t)

    @property
    def lo(self) -> Optional[int]:
        """Smallest absolute diagonal x - y kept, None if unclipped."""
        return None if self.t2 is None else (self.row - self.col) - self.t2

    @property
    def hi(self) -> Optional[int]:
        return None if self.t1 is None else (self.row - self.col) + self.t1

    @property
    def clipped(self) -> bool:
        return self.t1 is not None or self.t2 is not None

    def with_stripe(self, lo: Optional[int], hi: Optional[int]) -> "GridRegion":
        """Same rectangle restricted to absolute diagonals [lo, hi]."""
        base = self.row - self.col
        return GridRegion(self.row, self.col, self.rows, self.cols,
                          None if hi is None else hi - base,
                          None if lo is None else base - lo)

    def sub(self, row: int, col: int, rows: int, cols: int) -> "GridRegion":
        """A sub-rectangle inheriting this region's stripe."""
        return GridRegion(row, col, rows, cols).with_stripe(self.lo, self.hi)

    def is_empty(self) -> bool:
        """True when no vertex of the closed rectangle lies in the stripe."""
        d_min = self.row - (self.col + self.cols)
        d_max = self.row + self.rows - self.col
        if self.lo is not None and d_max < self.lo:
            return True
        if self.hi is not None and d_min > self.hi:
            return True
        return self.lo is not None and self.hi is not None and self.lo > self.hi

    def in_band(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        d = np.asarray(x) - np.asarray(y)
        keep = np.ones(np.shape(d), dtype=bool)
        if self.lo is not None:
            keep &= d >= self.lo
        if self.hi is not None:
            keep &= d <= self.hi
        return keep

    def quadrants(self) -> Tuple["GridRegion", "GridRegion", "GridRegion", "GridRegion"]:
        """G1 top-left, G2 top-right, G3 bottom-left, G4 bottom-right; split at ceil(r/2), ceil(c/2)."""
        r1 = (self.rows + 1) // 2
        c1 = (self.cols + 1) // 2
        r, c = self.row, self.col
        return (self.sub(r, c, r1, c1),
                self.sub(r, c + c1, r1, self.cols - c1),
                self.sub(r + r1, c, self.rows - r1, c1),
                self.sub(r + r1, c + c1, self.rows - r1, self.cols - c1))

    def boundary_bound(self) -> int:
        """Most inputs (or outputs) this region or any sub-region can have."""
        bound = self.rows + self.cols + 1
        if self.lo is not None and self.hi is not None:
            # each straight edge crosses at most hi - lo + 1 diagonals
            bound = min(bound, 2 * max(0, self.hi - self.lo + 1))
        return max(1, bound)

    def inputs(self) -> np.ndarray:
        x0, y0 = self.row, self.col
        left_x = np.arange(x0 + self.rows, x0, -1, dtype=np.int64)
        top_y = np.arange(y0, y0 + self.cols + 1, dtype=np.int64)
        xs = np.concatenate([left_x, np.full(len(top_y), x0, dtype=np.int64)])
        ys = np.concatenate([np.full(len(left_x), y0, dtype=np.int64), top_y])
        keep = self.in_band(xs, ys)
        return np.stack([xs[keep], ys[keep]], axis=1)

    def outputs(self) -> np.ndarray:
        x1, y1 = self.row + self.rows, self.col + self.cols
        bottom_y = np.arange(self.col, y1 + 1, dtype=np.int64)
        right_x = np.arange(x1 - 1, self.row - 1, -1, dtype=np.int64)
        xs = np.concatenate([np.full(len(bottom_y), x1, dtype=np.int64), right_x])
        ys = np.concatenate([bottom_y, np.full(len(right_x), y1, dtype=np.int64)])
        keep = self.in_band(xs, ys)
        return np.stack([xs[keep], ys[keep]], axis=1)


@dataclass(frozen=True)
class EdgeRule:
    """Edge weights of the DP-DAG: diagonal into (x, y) is free iff A[x] == B[y]."""
    a: np.ndarray
    b: np.ndarray

    @classmethod
    def of(cls, A: SequenceLike, B: SequenceLike) -> "EdgeRule":
        return cls(*joint_codes(A, B))

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def m(self) -> int:
        return len(self.b)

    def weight(self, x: int, y: int) -> int:
        """Weight of the diagonal edge (x-1, y-1) -> (x, y)."""
        return 0 if self.a[x - 1] == self.b[y - 1] else 1

    def mismatch_row(self, x: int, y_from: int, y_to: int) -> np.ndarray:
        """Diagonal weights into (x, y) for y in [y_from, y_to)."""
        return (self.b[y_from - 1:y_to - 1] != self.a[x - 1]).astype(np.int64)


@dataclass
class SPMatrix:
    """Boundary-to-boundary shortest distances of one region.

    ``theta`` holds, for entries produced by the last combine, the index of
    the leftmost optimal vertex on the shared boundary; -1 elsewhere.
    """
    inputs: np.ndarray
    outputs: np.ndarray
    dist: np.ndarray
    theta: Optional[np.ndarray] = None

    @property
    def shape(self) -> Tuple[int, int]:
        return self.dist.shape

    def input_index(self, x: int, y: int) -> int:
        hit = np.flatnonzero((self.inputs[:, 0] == x) & (self.inputs[:, 1] == y))
        if hit.size == 0:
            raise KeyError(f"({x}, {y}) is not an input vertex")
        return int(hit[0])

    def output_index(self, x: int, y: int) -> int:
        hit = np.flatnonzero((self.outputs[:, 0] == x) & (self.outputs[:, 1] == y))
        if hit.size == 0:
            raise KeyError(f"({x}, {y}) is not an output vertex")
        return int(hit[0])

    def distance(self, src: Tuple[int, int], dst: Tuple[int, int]) -> int:
        """Named corner lookup, e.g. distance((0, 0), (n, m))."""
        return int(self.dist[self.input_index(*src), self.output_index(*dst)])
