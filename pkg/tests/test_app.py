"""
Command-line surface: gen, run and bench, and their exit codes.
"""
import json

import pytest
from click.testing import CliRunner

from edist.app import EXIT_MISMATCH, EXIT_RESOURCE, EXIT_USAGE, cli
from edist.config import Config
from edist.harness.report import COLUMNS
from edist.harness.runner import ALGORITHMS, _Trial


@pytest.fixture
def runner(monkeypatch):
    monkeypatch.delenv("ED_NUM_THREADS", raising=False)
    return CliRunner()


@pytest.fixture
def pair(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    a.write_bytes(b"kitten")
    b.write_bytes(b"sitting")
    return str(a), str(b)


def test_gen_writes_pair_and_metadata(runner, tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    result = runner.invoke(cli, ["gen", "--n", "200", "--k", "10", "--seed", "5",
                                 "--out-a", str(a), "--out-b", str(b)])
    assert result.exit_code == 0, result.output
    assert len(a.read_bytes()) == 200
    meta = json.loads((tmp_path / "a.txt.meta.json").read_text())
    assert meta["k"] == 10 and meta["m"] == len(b.read_bytes())


def test_gen_rejects_too_many_edits(runner, tmp_path):
    result = runner.invoke(cli, ["gen", "--n", "5", "--k", "9",
                                 "--out-a", str(tmp_path / "a"), "--out-b", str(tmp_path / "b")])
    assert result.exit_code == EXIT_USAGE


def test_run_writes_csv(runner, pair, tmp_path):
    out = tmp_path / "run.csv"
    result = runner.invoke(cli, ["run", "--algo", "bfs-bh", "--a", pair[0], "--b", pair[1],
                                 "--threads", "1", "--reps", "1", "--block-size", "4",
                                 "--verify", "--csv", str(out)])
    assert result.exit_code == 0, result.output
    header, row = out.read_text().splitlines()
    assert header == ",".join(COLUMNS)
    cells = dict(zip(COLUMNS, row.split(",")))
    assert (cells["algo"], cells["k"], cells["b"]) == ("bfs-bh", "3", "4")


@pytest.mark.parametrize("args", [
    ["run", "--algo", "nope", "--a", "x", "--b", "y"],
    ["run", "--algo", "dp"],
    ["bench", "--n-list", "10", "--k-list", "1"],
    ["bench", "--n-list", "a,b", "--k-list", "1", "--csv", "out.csv"],
    ["frobnicate"],
])
def test_usage_errors_exit_one(runner, args):
    assert runner.invoke(cli, args).exit_code == EXIT_USAGE


def test_bad_thread_environment_exits_one(runner, pair):
    result = runner.invoke(cli, ["run", "--algo", "dp", "--a", pair[0], "--b", pair[1], "--reps", "1"],
                           env={"ED_NUM_THREADS": "0"})
    assert result.exit_code == EXIT_USAGE


def test_bad_integer_setting_exits_one(runner, pair):
    result = runner.invoke(cli, ["run", "--algo", "bfs-bh", "--a", pair[0], "--b", pair[1],
                                 "--threads", "1", "--reps", "1"],
                           env={"EDIST_BLOCK_SIZE": "zz"})
    assert result.exit_code == EXIT_USAGE
    assert "EDIST_BLOCK_SIZE" in result.output


def test_verify_over_the_cap_exits_three(runner, pair, monkeypatch):
    monkeypatch.setattr(Config, "ORACLE_CAP", 10)
    result = runner.invoke(cli, ["run", "--algo", "bfs-sa", "--a", pair[0], "--b", pair[1],
                                 "--threads", "1", "--reps", "1", "--verify"])
    assert result.exit_code == EXIT_RESOURCE


def test_wrong_distance_exits_two(runner, pair, monkeypatch):
    monkeypatch.setitem(ALGORITHMS, "bfs-sa", lambda A, B, o: _Trial(1, 0.0, 0.0, 0.0, {}))
    result = runner.invoke(cli, ["run", "--algo", "bfs-sa", "--a", pair[0], "--b", pair[1],
                                 "--threads", "1", "--reps", "1", "--verify"])
    assert result.exit_code == EXIT_MISMATCH


def test_small_bench(runner, tmp_path):
    out = tmp_path / "bench.csv"
    result = runner.invoke(cli, ["bench", "--n-list", "60,90", "--k-list", "4,500",
                                 "--threads", "1", "--reps", "1", "--verify", "--csv", str(out)])
    assert result.exit_code == 0, result.output
    lines = out.read_text().splitlines()
    # k=500 exceeds both n and is skipped; five default algorithms per pair
    assert len(lines) == 1 + 2 * 5
    algos = [line.split(",")[0] for line in lines[1:]]
    assert algos[:5] == ["bfs-sa", "bfs-h", "bfs-bh", "dac-mm", "antidiag"]


def test_bench_rejects_unknown_algorithm(runner, tmp_path):
    result = runner.invoke(cli, ["bench", "--n-list", "20", "--k-list", "2", "--algos", "bfs-sa,zzz",
                                 "--csv", str(tmp_path / "x.csv")])
    assert result.exit_code == EXIT_USAGE
