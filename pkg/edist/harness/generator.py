"""Synthetic instances: a uniform random A and a B that is k random edits away."""
import json
import string
from pathlib import Path
from typing import Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError, model_validator

from edist.errors import ConfigError
from edist.harness.sequence import Sequence
from edist.utils.logging import get_logger

logger = get_logger(__name__)

DNA = b"ACGT"
PRINTABLE = (string.digits + string.ascii_letters).encode()


class GenSpec(BaseModel):
    n: int = Field(ge=0)
    k: int = Field(ge=0)
    sigma: int = Field(default=4, ge=2, le=256)
    seed: int = 0

    @model_validator(mode="after")
    def _edits_fit(self) -> "GenSpec":
        if self.k > self.n:
            raise ValueError(f"k={self.k} edits cannot be placed in n={self.n} characters")
        return self

    @classmethod
    def build(cls, **values) -> "GenSpec":
        """Validate, reporting failures as ConfigError."""
        try:
            return cls(**values)
        except ValidationError as e:
            raise ConfigError(f"invalid generation parameters: {e.errors()[0]['msg']}")


def symbols_for(sigma: int) -> bytes:
    if sigma == 4:
        return DNA
    if sigma <= len(PRINTABLE):
        return PRINTABLE[:sigma]
    return bytes(range(sigma))


def generate_edits(spec: GenSpec) -> Tuple[Sequence, Sequence]:
    """Draw A uniformly, then apply ``spec.k`` uniform edits at distinct positions.

    Edits go right to left so an insertion or deletion never shifts a
    position that is still to be edited. Edits may cancel; the true
    distance is at most k.
    """
    rng = np.random.default_rng(spec.seed)
    symbols = np.frombuffer(symbols_for(spec.sigma), dtype=np.uint8)
    a = symbols[rng.integers(0, spec.sigma, spec.n)]

    positions = np.sort(rng.choice(spec.n, size=spec.k, replace=False))[::-1] if spec.k else []
    ops = rng.integers(0, 3, spec.k)
    draws = rng.integers(1, spec.sigma, spec.k)
    inserts = rng.integers(0, spec.sigma, spec.k)
    b = a.tolist()
    for pos, op, draw, ins in zip(positions, ops, draws, inserts):
        pos = int(pos)
        if op == 0:
            # substitute with a different symbol
            current = int(np.flatnonzero(symbols == b[pos])[0])
            b[pos] = int(symbols[(current + int(draw)) % spec.sigma])
        elif op == 1:
            del b[pos]
        else:
            b.insert(pos, int(symbols[ins]))

    alphabet = symbols.tobytes()
    A = Sequence.from_bytes(a.tobytes(), alphabet)
    B = Sequence.from_bytes(bytes(b), alphabet)
    logger.debug(f"generated n={A.n} m={B.n} requested k={spec.k} sigma={spec.sigma} seed={spec.seed}")
    return A, B


def save_instance(A: Sequence, B: Sequence, spec: GenSpec,
                  out_a: Union[str, Path], out_b: Union[str, Path]) -> Path:
    """Write both sequences verbatim plus ``<out_a>.meta.json``; returns the sidecar path."""
    out_a, out_b = Path(out_a), Path(out_b)
    try:
        out_a.write_bytes(A.data)
        out_b.write_bytes(B.data)
        meta = out_a.with_name(out_a.name + ".meta.json")
        meta.write_text(json.dumps({**spec.model_dump(), "m": B.n}, indent=2))
    except OSError as e:
        logger.error(f"Failed to write instance: {e}")
        raise ConfigError(f"cannot write generated sequences: {e.strerror or e}")
    return meta
