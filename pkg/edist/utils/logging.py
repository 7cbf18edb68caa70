"""Logging configuration for edist.

Terminal output goes through rich; a debug session additionally dumps
everything at DEBUG level to a timestamped file in the log directory.
"""
import logging
from typing import Optional, List
from rich.logging import RichHandler
from rich.console import Console
from datetime import datetime
from edist.config import Config

console = Console(stderr=True)

MAX_FILE_MESSAGE = 500


class CompactFormatter(logging.Formatter):
    """Formatter that truncates long messages in the debug file."""

    def format(self, record: logging.LogRecord) -> str:
        message = super().format(record)
        if len(message) > MAX_FILE_MESSAGE:
            return message[:MAX_FILE_MESSAGE] + f"... [truncated {len(message) - MAX_FILE_MESSAGE} chars]"
        return message


def setup_logging(level: Optional[str] = None, debug_session: Optional[bool] = None) -> None:
    """Configure logging with minimal format."""
    if level is None:
        level = Config.LOG_LEVEL
    level = level.upper()

    if debug_session is None:
        debug_session = Config.DEBUG_SESSION

    handlers: List[logging.Handler] = []

    rich_handler = RichHandler(
        console=console,
        show_path=True,
        enable_link_path=True,
        markup=False,
        rich_tracebacks=False,
        show_time=False,
        show_level=True
    )
    rich_handler.setLevel(level)
    rich_handler.setFormatter(logging.Formatter('%(filename)s:%(lineno)d - %(message)s'))
    handlers.append(rich_handler)

    if debug_session:
        session_file = Config.get_log_dir() / f'edist_debug_{datetime.now().strftime("%Y%m%d_%H%M%S")}.log'
        file_handler = logging.FileHandler(session_file)
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(CompactFormatter(
            '%(asctime)s - %(filename)s:%(lineno)d - %(levelname)s - %(message)s'
        ))
        handlers.append(file_handler)
        console.print(f"debug log for this session: {session_file}")

    root_logger = logging.getLogger()
    root_logger.setLevel(logging.DEBUG if debug_session else level)
    root_logger.handlers = []
    for handler in handlers:
        root_logger.addHandler(handler)

    # numpy and friends are quiet already; keep the pool threads quiet too
    logging.getLogger('concurrent.futures').setLevel(logging.WARNING)


def get_logger(name: str) -> logging.Logger:
    """Get a logger with the proper format."""
    return logging.getLogger(name)
