"""Configuration management for edist."""
from typing import Optional, Dict, Any
import os
from pathlib import Path
from dotenv import load_dotenv

from edist.errors import ConfigError

# Load .env file from project root
project_root = Path(__file__).parent.parent
load_dotenv(project_root / ".env")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name, "")
    if raw == "":
        return default
    try:
        return int(raw, 0)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}")


def _env_flag(name: str) -> bool:
    return os.getenv(name, "").strip().lower() in ("1", "true", "yes", "on")


class _EnvInt:
    """Integer setting parsed from the environment on every access."""

    def __init__(self, name: str, default: int):
        self.name = name
        self.default = default

    def __get__(self, obj, owner) -> int:
        return _env_int(self.name, self.default)


class Config:
    # Logging
    LOG_LEVEL: str = os.getenv("EDIST_LOG_LEVEL", "INFO").upper()
    DEBUG_SESSION: bool = _env_flag("EDIST_DEBUG_SESSION")
    LOG_DIR: Path = Path(os.getenv("EDIST_LOG_DIR", "logs"))

    # Rolling hash
    HASH_SEED = _EnvInt("EDIST_HASH_SEED", 0x5EED)
    DOUBLE_HASH: bool = _env_flag("EDIST_DOUBLE_HASH")
    BLOCK_SIZE = _EnvInt("EDIST_BLOCK_SIZE", 32)

    # LCP / BFS / DaC tuning
    FAST_PATH = _EnvInt("EDIST_FAST_PATH", 8)
    GRAIN = _EnvInt("EDIST_GRAIN", 512)
    AALM_CUTOFF = _EnvInt("EDIST_AALM_CUTOFF", 4)

    # Oracles refuse tables larger than this many cells
    ORACLE_CAP = _EnvInt("EDIST_ORACLE_CAP", 100_000_000)

    @classmethod
    def resolve_threads(cls, cli_value: Optional[int] = None) -> int:
        """Thread count: CLI flag, then ED_NUM_THREADS, then the hardware."""
        if cli_value is not None:
            if cli_value < 1:
                raise ConfigError(f"--threads must be a positive integer, got {cli_value}")
            return cli_value

        raw = os.getenv("ED_NUM_THREADS", "").strip()
        if raw:
            try:
                value = int(raw)
            except ValueError:
                raise ConfigError(f"ED_NUM_THREADS must be a positive integer, got {raw!r}")
            if value < 1:
                raise ConfigError(f"ED_NUM_THREADS must be a positive integer, got {value}")
            return value

        return os.cpu_count() or 1

    @classmethod
    def get_run_defaults(cls) -> Dict[str, Any]:
        """Get the defaults a harness run starts from"""
        return {
            "block_size": cls.BLOCK_SIZE,
            "grain": cls.GRAIN,
            "fast_path": cls.FAST_PATH,
            "double_hash": cls.DOUBLE_HASH,
            "hash_seed": cls.HASH_SEED,
            "aalm_cutoff": cls.AALM_CUTOFF,
            "oracle_cap": cls.ORACLE_CAP,
        }

    @classmethod
    def get_log_dir(cls) -> Path:
        """Get the debug log directory, creating it if needed"""
        cls.LOG_DIR.mkdir(parents=True, exist_ok=True)
        return cls.LOG_DIR

