"""Exception hierarchy for edist.

The CLI maps these onto exit codes, see ``edist.app``.
"""


class EdistError(Exception):
    """Base class for everything edist raises on purpose."""


class ConfigError(EdistError, ValueError):
    """Invalid configuration value or command option."""


class AlphabetError(EdistError, ValueError):
    """Alphabet too large, or the reserved code 0 used where it may not be."""


class DimensionError(EdistError, ValueError):
    """Matrices or boundaries whose shapes do not line up."""


class ResourceCapError(EdistError):
    """A brute-force oracle was asked for more cells than the configured cap."""

    def __init__(self, cells: int, cap: int):
        self.cells = cells
        self.cap = cap
        super().__init__(f"oracle refused {cells} cells: cap is {cap} (EDIST_ORACLE_CAP)")


class VerificationError(EdistError):
    """An algorithm disagreed with the dp oracle or with itself across repetitions."""


class UnknownAlgorithmError(EdistError, KeyError):
    """Algorithm id missing from the registry."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown algorithm"
