"""Shared builders for random test instances."""
import numpy as np


def random_codes(rng, n, sigma):
    return rng.integers(1, sigma + 1, n).astype(np.int64)


def mutate(rng, codes, edits, sigma):
    """Apply ``edits`` random single-character edits; used to build close pairs."""
    out = codes.tolist()
    for _ in range(edits):
        op = rng.integers(0, 3)
        pos = int(rng.integers(0, len(out) + 1))
        sym = int(rng.integers(1, sigma + 1))
        if op == 0 and pos < len(out):
            out[pos] = sym
        elif op == 1 and pos < len(out):
            del out[pos]
        else:
            out.insert(pos, sym)
    return np.array(out, dtype=np.int64)
