"""Algorithm dispatch and timing for the harness.

Every algorithm is split into a build phase (index construction) and a
query phase (the distance computation itself). A run repeats both and
keeps the repetition with the median total time.
"""
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError

from edist.bfs.frontier import edit_distance_bfs
from edist.config import Config
from edist.dac.dacmm import edit_distance_dacmm
from edist.errors import ConfigError, ResourceCapError, UnknownAlgorithmError, VerificationError
from edist.harness.sequence import SequenceLike, as_codes, joint_codes
from edist.lcp.oracles import HashLcp, LcpOracle, SuffixArrayLcp
from edist.lcp.rolling_hash import build_blocked_table, params_for
from edist.oracle.dp import antidiagonal_edit_distance, dp_edit_distance
from edist.utils.logging import get_logger
from edist.utils.parallel import set_num_threads

logger = get_logger(__name__)


class RunOptions(BaseModel):
    block_size: int = Field(default=32, ge=1)
    threads: Optional[int] = Field(default=None, ge=1)
    reps: int = Field(default=3, ge=1)
    verify: bool = False
    oracle_cap: int = Field(default=100_000_000, ge=0)
    grain: int = Field(default=512, ge=1)
    fast_path: int = Field(default=8, ge=0)
    double_hash: bool = False
    hash_seed: int = 0x5EED
    aalm_cutoff: int = Field(default=4, ge=1)

    @classmethod
    def from_config(cls, **overrides) -> "RunOptions":
        """Config defaults, then any non-None override."""
        values = Config.get_run_defaults()
        values.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return cls(**values)
        except ValidationError as e:
            err = e.errors()[0]
            raise ConfigError(f"invalid option {'.'.join(map(str, err['loc']))}: {err['msg']}")


@dataclass
class RunReport:
    algo: str
    n: int
    m: int
    k: int
    b: Optional[int] = None
    build_s: float = 0.0
    query_s: float = 0.0
    total_s: float = 0.0
    lcp_queries: Optional[int] = None
    frontier_total: Optional[int] = None
    checks: Optional[int] = None
    reps: int = 1
    median: bool = field(default=True, compare=False)


@dataclass
class _Trial:
    k: int
    build_s: float
    query_s: float
    total_s: float
    counters: Dict[str, Optional[int]]


Algorithm = Callable[[SequenceLike, SequenceLike, RunOptions], _Trial]


def _timed_bfs(build: Callable[[], LcpOracle]) -> Algorithm:
    def run(A: SequenceLike, B: SequenceLike, options: RunOptions) -> _Trial:
        start = time.perf_counter()
        oracle = build()
        built = time.perf_counter()
        k, stats = edit_distance_bfs(A, B, oracle, grain=options.grain)
        done = time.perf_counter()
        return _Trial(k, built - start, done - built, done - start,
                      {"lcp_queries": stats.lcp_queries, "frontier_total": stats.frontier_total})
    return run


def _bfs_sa(A, B, options: RunOptions) -> _Trial:
    return _timed_bfs(lambda: SuffixArrayLcp(A, B, options.fast_path))(A, B, options)


def _hash_oracle(A, B, options: RunOptions, b: int) -> HashLcp:
    if options.double_hash:
        return HashLcp.double(A, B, b=b, fast_path=options.fast_path, seed=options.hash_seed)
    return HashLcp(A, B, b=b, fast_path=options.fast_path, seed=options.hash_seed)


def _bfs_h(A, B, options: RunOptions) -> _Trial:
    return _timed_bfs(lambda: _hash_oracle(A, B, options, 1))(A, B, options)


def _bfs_bh(A, B, options: RunOptions) -> _Trial:
    return _timed_bfs(lambda: _hash_oracle(A, B, options, options.block_size))(A, B, options)


def _dac_mm(A, B, options: RunOptions) -> _Trial:
    start = time.perf_counter()
    k, stats = edit_distance_dacmm(A, B, cutoff=options.aalm_cutoff)
    total = time.perf_counter() - start
    return _Trial(k, 0.0, total, total, {"checks": stats.checks})


def _dp(A, B, options: RunOptions) -> _Trial:
    start = time.perf_counter()
    k, _ = dp_edit_distance(A, B, cap=options.oracle_cap)
    total = time.perf_counter() - start
    return _Trial(k, 0.0, total, total, {})


def _antidiag(A, B, options: RunOptions) -> _Trial:
    start = time.perf_counter()
    k = antidiagonal_edit_distance(A, B, cap=options.oracle_cap, grain=options.grain)
    total = time.perf_counter() - start
    return _Trial(k, 0.0, total, total, {})


ALGORITHMS: Dict[str, Algorithm] = {
    "bfs-sa": _bfs_sa,
    "bfs-h": _bfs_h,
    "bfs-bh": _bfs_bh,
    "dac-mm": _dac_mm,
    "dp": _dp,
    "antidiag": _antidiag,
}

BLOCKED = {"bfs-bh"}
HASHED = {"bfs-h", "bfs-bh"}


def _median_trial(trials: List[_Trial]) -> _Trial:
    ordered = sorted(trials, key=lambda t: t.total_s)
    return ordered[(len(ordered) - 1) // 2]


def verify_against_dp(algo: str, k: int, A: SequenceLike, B: SequenceLike, cap: int) -> None:
    """Cross-check one computed distance; raises when the oracle disagrees."""
    a, b = joint_codes(A, B)
    if len(a) * len(b) > cap:
        raise ResourceCapError(len(a) * len(b), cap)
    expected, _ = dp_edit_distance(a, b, cap=cap)
    if expected != k:
        raise VerificationError(f"{algo} reported k={k}, dp oracle says {expected}")
    logger.debug(f"{algo}: k={k} verified against dp")


def run_algorithm(algo: str, A: SequenceLike, B: SequenceLike,
                  options: Optional[RunOptions] = None) -> RunReport:
    if options is None:
        options = RunOptions.from_config()
    try:
        runner = ALGORITHMS[algo]
    except KeyError:
        raise UnknownAlgorithmError(f"unknown algorithm {algo!r}; choose from {', '.join(ALGORITHMS)}")

    set_num_threads(Config.resolve_threads(options.threads))
    a, b = joint_codes(A, B)
    trials = []
    for rep in range(options.reps):
        trial = runner(a, b, options)
        logger.debug(f"{algo} rep {rep + 1}/{options.reps}: k={trial.k} total={trial.total_s:.6f}s")
        trials.append(trial)

    ks = {t.k for t in trials}
    if len(ks) > 1:
        raise VerificationError(f"{algo} returned different distances across repetitions: {sorted(ks)}")

    best = _median_trial(trials)
    if options.verify:
        verify_against_dp(algo, best.k, a, b, options.oracle_cap)

    logger.info(f"{algo}: n={len(a)} m={len(b)} k={best.k} "
                f"build={best.build_s:.6f}s query={best.query_s:.6f}s")
    return RunReport(
        algo=algo,
        n=len(a),
        m=len(b),
        k=best.k,
        b=(options.block_size if algo in BLOCKED else 1) if algo in HASHED else None,
        build_s=best.build_s,
        query_s=best.query_s,
        total_s=best.total_s,
        lcp_queries=best.counters.get("lcp_queries"),
        frontier_total=best.counters.get("frontier_total"),
        checks=best.counters.get("checks"),
        reps=options.reps,
        median=options.reps > 1,
    )


def space_study(A: SequenceLike, blocks: Tuple[int, ...] = (1, 2, 4, 8, 16, 32, 64),
                seed: int = 0x5EED) -> List[Tuple[int, int, float]]:
    """(b, stored words, words relative to b=1) for each block size."""
    codes = as_codes(A)
    params = params_for(codes, seed=seed)
    rows = []
    for b in blocks:
        words = build_blocked_table(codes, b, params).words
        rows.append((b, words))
    base = rows[0][1] if rows else 1
    return [(b, words, words / base) for b, words in rows]
