"""CSV output of run reports, and reading it back."""
import csv
from dataclasses import fields
from pathlib import Path
from typing import Iterable, List, Optional, Union

from edist.errors import ConfigError
from edist.harness.runner import RunReport
from edist.utils.logging import get_logger

logger = get_logger(__name__)

COLUMNS = ["algo", "n", "m", "k", "b", "build_s", "query_s", "total_s",
           "lcp_queries", "frontier_total", "checks", "reps"]

_SECONDS = {"build_s", "query_s", "total_s"}
_OPTIONAL = {"b", "lcp_queries", "frontier_total", "checks"}


def _cell(name: str, value) -> str:
    if value is None:
        return ""
    if name in _SECONDS:
        return f"{value:.6f}"
    return str(value)


def format_row(report: RunReport) -> List[str]:
    return [_cell(name, getattr(report, name)) for name in COLUMNS]


def emit_csv(reports: Iterable[RunReport], path: Union[str, Path]) -> None:
    reports = list(reports)
    if not reports:
        raise ConfigError("no reports to write")
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(COLUMNS)
            writer.writerows(format_row(r) for r in reports)
    except OSError as e:
        logger.error(f"Failed to write {path}: {e}")
        raise ConfigError(f"cannot write CSV {path}: {e.strerror or e}")
    logger.info(f"wrote {len(reports)} report(s) to {path}")


def _parse(name: str, raw: str) -> Optional[Union[int, float, str]]:
    if name == "algo":
        return raw
    if raw == "" and name in _OPTIONAL:
        return None
    if name in _SECONDS:
        return float(raw)
    return int(raw)


def read_csv(path: Union[str, Path]) -> List[RunReport]:
    """Parse a CSV written by ``emit_csv``; empty cells come back as None."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != COLUMNS:
            raise ConfigError(f"{path} does not have the expected columns {','.join(COLUMNS)}")
        known = {f.name for f in fields(RunReport)}
        return [RunReport(**{name: _parse(name, row[name]) for name in COLUMNS if name in known})
                for row in reader]
