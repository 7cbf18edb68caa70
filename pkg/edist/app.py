"""
edist - parallel output-sensitive edit distance benchmarks
"""
import click
from rich.console import Console
from rich.markup import escape

from edist.config import Config
from edist.errors import (
    ConfigError,
    EdistError,
    ResourceCapError,
    UnknownAlgorithmError,
    VerificationError,
)
from edist.harness.generator import GenSpec, generate_edits, save_instance
from edist.harness.panels import show_reports, show_space_table
from edist.harness.report import emit_csv
from edist.harness.runner import ALGORITHMS, RunOptions, run_algorithm, space_study
from edist.harness.sequence import load_sequence
from edist.utils.logging import get_logger, setup_logging

console = Console()
err_console = Console(stderr=True)
logger = get_logger(__name__)

EXIT_USAGE = 1
EXIT_MISMATCH = 2
EXIT_RESOURCE = 3

SPACE_BLOCKS = (1, 2, 4, 8, 16, 32, 64)


def exit_code_for(error: EdistError) -> int:
    if isinstance(error, VerificationError):
        return EXIT_MISMATCH
    if isinstance(error, ResourceCapError):
        return EXIT_RESOURCE
    return EXIT_USAGE


class EdistGroup(click.Group):
    """Maps usage errors and edist errors onto the documented exit codes."""

    def make_context(self, *args, **kwargs):
        try:
            return super().make_context(*args, **kwargs)
        except click.UsageError as e:
            e.exit_code = EXIT_USAGE
            raise

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            e.exit_code = EXIT_USAGE
            raise
        except EdistError as e:
            err_console.print(f"[red]{type(e).__name__}: {escape(str(e))}[/red]")
            ctx.exit(exit_code_for(e))


def _int_list(ctx, param, value: str):
    try:
        items = [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}")
    if not items or min(items) < 0:
        raise click.BadParameter("expected at least one non-negative integer")
    return items


@click.group(cls=EdistGroup)
@click.option('--log-level', default=None, help='Console log level (default EDIST_LOG_LEVEL)')
@click.option('--debug-session', is_flag=True, default=None, help='Also write a debug log file')
def cli(log_level, debug_session):
    """Parallel output-sensitive edit distance: generate, run, bench."""
    setup_logging(log_level, debug_session or None)


@cli.command()
@click.option('--n', 'n', type=int, required=True, help='Length of A')
@click.option('--k', 'k', type=int, required=True, help='Number of random edits applied to A')
@click.option('--sigma', type=int, default=4, show_default=True, help='Alphabet size')
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--out-a', type=click.Path(dir_okay=False), required=True)
@click.option('--out-b', type=click.Path(dir_okay=False), required=True)
def gen(n, k, sigma, seed, out_a, out_b):
    """Write a random pair A, B about k edits apart."""
    spec = GenSpec.build(n=n, k=k, sigma=sigma, seed=seed)
    A, B = generate_edits(spec)
    meta = save_instance(A, B, spec, out_a, out_b)
    console.print(f"[green]wrote A ({A.n}) and B ({B.n}); metadata in {meta}[/green]")


@cli.command()
@click.option('--algo', type=click.Choice(list(ALGORITHMS)), required=True)
@click.option('--a', 'path_a', type=click.Path(exists=True, dir_okay=False), required=True)
@click.option('--b', 'path_b', type=click.Path(exists=True, dir_okay=False), required=True)
@click.option('--block-size', type=int, default=None, help='Block size for bfs-bh (default 32)')
@click.option('--threads', type=int, default=None, help='Worker threads (overrides ED_NUM_THREADS)')
@click.option('--reps', type=int, default=3, show_default=True)
@click.option('--verify', is_flag=True, help='Cross-check k against the dp oracle')
@click.option('--csv', 'csv_path', type=click.Path(dir_okay=False), default=None)
def run(algo, path_a, path_b, block_size, threads, reps, verify, csv_path):
    """Compute the edit distance of two files with one algorithm."""
    options = RunOptions.from_config(block_size=block_size, threads=threads, reps=reps, verify=verify)
    A, B = load_sequence(path_a), load_sequence(path_b)
    report = run_algorithm(algo, A, B, options)
    if csv_path:
        emit_csv([report], csv_path)
    show_reports([report], console)


@cli.command()
@click.option('--suite', type=click.Choice(['synthetic']), default='synthetic', show_default=True)
@click.option('--n-list', callback=_int_list, default='1000,10000', show_default=True)
@click.option('--k-list', callback=_int_list, default='10,100', show_default=True)
@click.option('--sigma', type=int, default=4, show_default=True)
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--algos', default='bfs-sa,bfs-h,bfs-bh,dac-mm,antidiag', show_default=True,
              help='Comma-separated algorithm ids')
@click.option('--block-size', type=int, default=None)
@click.option('--threads', type=int, default=None)
@click.option('--reps', type=int, default=3, show_default=True)
@click.option('--verify', is_flag=True)
@click.option('--csv', 'csv_path', type=click.Path(dir_okay=False), required=True)
def bench(suite, n_list, k_list, sigma, seed, algos, block_size, threads, reps, verify, csv_path):
    """Run the synthetic grid n x k and write one CSV row per run."""
    algo_ids = [a.strip() for a in algos.split(',') if a.strip()]
    unknown = [a for a in algo_ids if a not in ALGORITHMS]
    if unknown:
        raise UnknownAlgorithmError(f"unknown algorithm(s) {', '.join(unknown)}")
    options = RunOptions.from_config(block_size=block_size, threads=threads, reps=reps, verify=verify)

    reports = []
    for n in n_list:
        for k in k_list:
            if k > n:
                logger.warning(f"skipping n={n}, k={k}: more edits than characters")
                continue
            A, B = generate_edits(GenSpec.build(n=n, k=k, sigma=sigma, seed=seed))
            batch = {algo: run_algorithm(algo, A, B, options) for algo in algo_ids}
            reports.extend(batch.values())
            if "bfs-h" in batch and "antidiag" in batch and batch["bfs-h"].total_s >= batch["antidiag"].total_s:
                logger.warning(f"n={n} k={k}: bfs-h ({batch['bfs-h'].total_s:.6f}s) is not faster "
                               f"than antidiag ({batch['antidiag'].total_s:.6f}s)")

    if not reports:
        raise ConfigError("no (n, k) pair in the grid has k <= n")
    emit_csv(reports, csv_path)
    show_reports(reports, console, title=f"{suite} suite")

    largest = max(n_list)
    A, _ = generate_edits(GenSpec.build(n=largest, k=0, sigma=sigma, seed=seed))
    show_space_table(largest, space_study(A, SPACE_BLOCKS, Config.HASH_SEED), console)


def main():
    cli(prog_name="edist")


if __name__ == '__main__':
    main()
