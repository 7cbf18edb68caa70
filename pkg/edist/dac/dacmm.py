"""Output-sensitive divide and conquer on the diagonal stripe.

check(t) solves the stripe |x - y| <= t: the two diagonal quadrants
recurse, the two off-diagonal ones only hold a corner of the stripe and
go straight to the base solver. The driver doubles t until the answer
certifies itself (sigma <= t).
"""
import threading
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from edist.dac.aalm import DEFAULT_CUTOFF, aalm_sp, merge_quadrants
from edist.dac.combine import WorkspacePool
from edist.dac.grid import EdgeRule, GridRegion, SPMatrix
from edist.harness.sequence import SequenceLike, joint_codes
from edist.utils.logging import get_logger
from edist.utils.parallel import fork_join

logger = get_logger(__name__)


@dataclass
class DacStats:
    checks: int = 0
    widths: List[int] = field(default_factory=list)
    sigmas: List[int] = field(default_factory=list)
    base_solves: int = 0
    merges: int = 0
    late_allocations: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def bump(self, name: str, by: int = 1) -> None:
        with self._lock:
            setattr(self, name, getattr(self, name) + by)


def dacmm_rec(region: GridRegion, t: int, rule: EdgeRule, cutoff: int = DEFAULT_CUTOFF,
              stats: Optional[DacStats] = None, pool: Optional[WorkspacePool] = None) -> SPMatrix:
    if t < 1:
        raise ValueError(f"stripe width must be at least 1, got {t}")
    if pool is None:
        pool = WorkspacePool.for_region(region)
    if region.rows < 2 * t or region.cols < 2 * t or min(region.rows, region.cols) <= cutoff:
        return aalm_sp(region, rule, cutoff, stats, pool)

    g1, g2, g3, g4 = region.quadrants()

    def diagonal(q: GridRegion) -> Optional[SPMatrix]:
        return None if q.is_empty() else dacmm_rec(q, t, rule, cutoff, stats, pool)

    def corner(q: GridRegion) -> Optional[SPMatrix]:
        return None if q.is_empty() else aalm_sp(q, rule, cutoff, stats, pool)

    parts = fork_join(lambda: diagonal(g1), lambda: corner(g2), lambda: corner(g3), lambda: diagonal(g4))
    if stats is not None:
        stats.bump("merges")
    return merge_quadrants(*parts, pool=pool)


def check(t: int, rule: EdgeRule, cutoff: int = DEFAULT_CUTOFF,
          stats: Optional[DacStats] = None) -> Tuple[int, SPMatrix]:
    """Shortest (0, 0) -> (n, m) distance over paths inside |x - y| <= t.

    All combines of one check share a workspace per thread, reserved for
    the whole stripe.
    """
    n, m = rule.n, rule.m
    if t < max(1, abs(n - m)):
        raise ValueError(f"stripe width {t} cannot reach (n, m) = ({n}, {m})")
    region = GridRegion.whole(n, m, t)
    pool = WorkspacePool.for_region(region)
    matrix = dacmm_rec(region, t, rule, cutoff, stats, pool)
    sigma = matrix.distance((0, 0), (n, m))
    if stats is not None:
        stats.checks += 1
        stats.widths.append(t)
        stats.sigmas.append(sigma)
        stats.late_allocations += pool.late_allocations
    logger.debug(f"check(t={t}) -> sigma={sigma}, {len(pool.workspaces)} workspaces "
                 f"of side {pool.side}, {pool.late_allocations} late allocations")
    return sigma, matrix


def edit_distance_dacmm(A: SequenceLike, B: SequenceLike,
                        cutoff: int = DEFAULT_CUTOFF) -> Tuple[int, DacStats]:
    a, b = joint_codes(A, B)
    stats = DacStats()
    n, m = len(a), len(b)
    if n == 0 or m == 0:
        return max(n, m), stats

    rule = EdgeRule(a, b)
    top = max(n, m)
    t = max(1, abs(n - m))
    while True:
        sigma, _ = check(t, rule, cutoff, stats)
        if sigma <= t or t >= top:
            return sigma, stats
        t = min(2 * t, top)
