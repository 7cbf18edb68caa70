from typing import Iterable, List, Optional, Tuple

from rich.console import Console
from rich.table import Table

from edist.harness.runner import RunReport
from edist.utils.logging import console as default_console


def _num(value: Optional[int]) -> str:
    return "-" if value is None else f"{value:,}"


def show_reports(reports: Iterable[RunReport], console: Optional[Console] = None, title: str = "Runs"):
    """Summary table of run reports."""
    console = console or default_console
    table = Table(
        title=title,
        show_header=True,
        header_style="bold blue",
        border_style="blue"
    )
    table.add_column("Algo", style="cyan")
    table.add_column("n", justify="right")
    table.add_column("m", justify="right")
    table.add_column("k", justify="right", style="green")
    table.add_column("Build (s)", justify="right")
    table.add_column("Query (s)", justify="right")
    table.add_column("Total (s)", justify="right", style="bold")
    table.add_column("LCP queries", justify="right", style="dim")
    table.add_column("Frontier", justify="right", style="dim")
    table.add_column("Checks", justify="right", style="dim")

    for r in reports:
        table.add_row(
            r.algo if r.b is None else f"{r.algo} (b={r.b})",
            _num(r.n), _num(r.m), _num(r.k),
            f"{r.build_s:.6f}", f"{r.query_s:.6f}", f"{r.total_s:.6f}",
            _num(r.lcp_queries), _num(r.frontier_total), _num(r.checks),
        )

    console.print(table)


def show_space_table(n: int, rows: List[Tuple[int, int, float]], console: Optional[Console] = None):
    """Blocked hash table size per block size."""
    console = console or default_console
    table = Table(title=f"Hash table words, n = {n:,}", border_style="blue")
    table.add_column("b", justify="right", style="cyan")
    table.add_column("Words", justify="right")
    table.add_column("vs b=1", justify="right", style="green")
    for b, words, ratio in rows:
        table.add_row(str(b), f"{words:,}", f"{ratio:.4f}")
    console.print(table)
