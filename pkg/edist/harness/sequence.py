"""Input sequences: raw bytes plus a rank-compressed code array.

Codes run 1..sigma so that 0 stays free for the suffix-array sentinel.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from edist.errors import AlphabetError, ConfigError
from edist.utils.logging import get_logger

logger = get_logger(__name__)

MAX_ALPHABET = 256

SequenceLike = Union["Sequence", bytes, bytearray, str, np.ndarray, list, tuple]


@dataclass(frozen=True)
class Sequence:
    data: bytes
    alphabet: bytes
    codes: np.ndarray = field(repr=False, compare=False)

    @classmethod
    def from_bytes(cls, data: Union[bytes, bytearray, str], alphabet: Optional[bytes] = None) -> "Sequence":
        """Rank-compress ``data`` against ``alphabet`` (default: its own symbols)."""
        if isinstance(data, str):
            data = data.encode("latin-1")
        data = bytes(data)
        if alphabet is None:
            alphabet = bytes(sorted(set(data)))
        if len(alphabet) > MAX_ALPHABET:
            raise AlphabetError(f"alphabet has {len(alphabet)} symbols, at most {MAX_ALPHABET} allowed")

        lookup = np.zeros(MAX_ALPHABET, dtype=np.int64)
        lookup[np.frombuffer(alphabet, dtype=np.uint8)] = np.arange(1, len(alphabet) + 1)
        raw = np.frombuffer(data, dtype=np.uint8)
        codes = lookup[raw]
        if codes.size and codes.min() == 0:
            missing = sorted(set(data) - set(alphabet))
            raise AlphabetError(f"symbols {missing[:8]} are not in the given alphabet")
        codes.setflags(write=False)
        return cls(data=data, alphabet=bytes(alphabet), codes=codes)

    @property
    def n(self) -> int:
        return len(self.data)

    @property
    def sigma(self) -> int:
        return len(self.alphabet)

    def decode(self, codes: Optional[np.ndarray] = None) -> bytes:
        """Map codes back to the original byte values."""
        if codes is None:
            return self.data
        table = np.frombuffer(b"\x00" + self.alphabet, dtype=np.uint8)
        return table[np.asarray(codes, dtype=np.int64)].tobytes()

    def __len__(self) -> int:
        return len(self.data)


def recode_pair(a: Union[Sequence, bytes, str], b: Union[Sequence, bytes, str]) -> Tuple[Sequence, Sequence]:
    """Re-code two sequences over the union of their symbols."""
    raw_a = a.data if isinstance(a, Sequence) else (a.encode("latin-1") if isinstance(a, str) else bytes(a))
    raw_b = b.data if isinstance(b, Sequence) else (b.encode("latin-1") if isinstance(b, str) else bytes(b))
    alphabet = bytes(sorted(set(raw_a) | set(raw_b)))
    return Sequence.from_bytes(raw_a, alphabet), Sequence.from_bytes(raw_b, alphabet)


def load_sequence(path: Union[str, Path], alphabet_hint: Optional[int] = None) -> Sequence:
    """Read a file verbatim as a sequence.

    No format parsing happens here: strip FASTA headers beforehand, e.g.
    ``grep -v '>' in.fa | tr -d '\\n' > in.txt``.
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        logger.error(f"Failed to read sequence {path}: {e}")
        raise ConfigError(f"cannot read sequence file {path}: {e.strerror or e}")

    seq = Sequence.from_bytes(data)
    if alphabet_hint is not None and seq.sigma > alphabet_hint:
        raise AlphabetError(f"{path} uses {seq.sigma} symbols, more than the hinted {alphabet_hint}")
    logger.debug(f"Loaded {path}: n={seq.n}, sigma={seq.sigma}")
    return seq


def as_codes(seq: SequenceLike) -> np.ndarray:
    """Integer symbol codes for any accepted sequence form.

    ``Sequence`` yields its compressed codes; raw ``bytes``/``str`` yield
    their byte or code-point values unchanged.
    """
    if isinstance(seq, Sequence):
        return seq.codes
    if isinstance(seq, (bytes, bytearray)):
        return np.frombuffer(bytes(seq), dtype=np.uint8).astype(np.int64)
    if isinstance(seq, str):
        return np.fromiter((ord(c) for c in seq), dtype=np.int64, count=len(seq))
    return np.asarray(seq, dtype=np.int64)


def _symbol_values(seq: Union[Sequence, bytes, bytearray, str]) -> np.ndarray:
    if isinstance(seq, Sequence):
        seq = seq.data
    if isinstance(seq, str):
        return np.fromiter((ord(c) for c in seq), dtype=np.int64, count=len(seq))
    return np.frombuffer(bytes(seq), dtype=np.uint8).astype(np.int64)


def joint_codes(A: SequenceLike, B: SequenceLike) -> Tuple[np.ndarray, np.ndarray]:
    """Codes for a pair over one shared alphabet.

    Symbolic inputs (``Sequence``, bytes, str) are rank-compressed together
    to 1..sigma, so a NUL byte becomes an ordinary symbol. Two Sequences
    that already share an alphabet keep their codes; code arrays pass
    through unchanged.
    """
    symbolic = (Sequence, bytes, bytearray, str)
    if not (isinstance(A, symbolic) and isinstance(B, symbolic)):
        return as_codes(A), as_codes(B)
    if isinstance(A, Sequence) and isinstance(B, Sequence) and A.alphabet == B.alphabet:
        return A.codes, B.codes
    a, b = _symbol_values(A), _symbol_values(B)
    _, ranks = np.unique(np.concatenate([a, b]), return_inverse=True)
    ranks = ranks.reshape(-1).astype(np.int64) + 1
    return ranks[:len(a)], ranks[len(a):]
