"""Reproducible random streams.

Every stream is a PCG64 generator keyed by ``(master_seed, role, *index)``
through :class:`numpy.random.SeedSequence` spawn keys, so a candidate's or a
shift's randomness does not depend on evaluation order or thread count.
"""
import zlib

import numpy as np

DEFAULT_SEED = 20151113


def _sequence(master, role, index):
    key = (zlib.crc32(role.encode()),) + tuple(int(i) for i in index)
    return np.random.SeedSequence(entropy=int(master), spawn_key=key)


def derive_seed(master, role, *index):
    """A 64-bit sub-seed for ``role`` and ``index`` under ``master``."""
    return int(_sequence(master, role, index).generate_state(1, np.uint64)[0])


def make_rng(master, role, *index):
    return np.random.Generator(np.random.PCG64(_sequence(master, role, index)))


def random_rows(rng, count, s, n):
    """``(count, s)`` uint64 array of uniform ``n``-bit rows."""
    return rng.integers(0, (1 << n) - 1, size=(count, s), dtype=np.uint64, endpoint=True)
