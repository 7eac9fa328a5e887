"""Strict t-value of a digital net.

Two independent routes:

* :func:`strict_t_rank` searches compositions ``n_1 + ... + n_s = q`` for the
  smallest ``q`` whose generating-matrix row prefixes are linearly dependent;
  then ``t = m + 1 - q``.
* :func:`strict_t_dual` takes the minimum NRT weight over ``P^perp \\ {0}``.

For ``P = V`` the perpendicular space is ``{0}`` and the minimum is empty;
the dual route returns ``t = 0`` by convention.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .f2net import BitMatrix, DigitalNet, GuardError, dual, generator_rows, gray_points
from .wafom import MAX_DUAL_DIM, WeightSpec, _weights_array, dick_weight_alpha


@dataclass(frozen=True)
class TValueReport:
    m: int
    t: int
    witness: tuple[int, ...] | None = None
    digit_depth_limited: bool = False

    def __str__(self):
        flag = " (digit-depth limited)" if self.digit_depth_limited else ""
        return f"t={self.t} m={self.m}{flag}"


def nrt_weight(a: BitMatrix) -> int:
    """Niederreiter-Rosenbloom-Tsfasman weight: depth of the deepest nonzero digit, summed over rows."""
    return dick_weight_alpha(a, 1)


def strict_t_rank(net: DigitalNet) -> TValueReport:
    """Strict t-value from the rank criterion on the generating matrices.

    Row prefixes deeper than ``n`` are zero rows.  When ``d > n`` such
    compositions decide the result and the report is flagged
    ``digit_depth_limited``.
    """
    net.require_linear()
    m = net.d
    if m == 0:
        return TValueReport(0, 0)
    if m > 64:
        raise ValueError("m > 64 not supported by the rank kernel")
    depth = min(net.n, m)
    rows = generator_rows(net, depth)
    q, witness = _backend.kernels.min_dependent(rows, m)
    limited = net.d > net.n
    if limited and net.n + 1 < q:
        # a prefix of n + 1 rows in one coordinate contains a zero row
        q = net.n + 1
        witness = np.zeros(net.s, dtype=np.int64)
        witness[0] = net.n + 1
    t = m + 1 - q
    wit = tuple(int(x) for x in witness) if t > 0 else None
    return TValueReport(m, t, wit, limited)


def min_nrt_weight(net: DigitalNet, max_dual_dim: int = MAX_DUAL_DIM) -> int | None:
    """Minimum NRT weight over ``P^perp \\ {0}``; ``None`` when ``P = V``."""
    dim = net.s * net.n - net.d
    if dim > max_dual_dim:
        raise GuardError(f"perpendicular space has dimension {dim} > {max_dual_dim}")
    db = dual(net)
    if db.dim == 0:
        return None
    arr = np.array([b.rows for b in db.basis], dtype=np.uint64)
    pts = gray_points(arr, net.s, max_dim=max_dual_dim)[1:]
    return int(_weights_array(pts, net.n, WeightSpec("alpha", 1)).min())


def strict_t_dual(net: DigitalNet, max_dual_dim: int = MAX_DUAL_DIM) -> int:
    """``t = m + 1 - min NRT weight``, clamped to ``[0, m]``."""
    net.require_linear()
    w = min_nrt_weight(net, max_dual_dim)
    if w is None:
        return 0
    return max(0, min(net.d, net.d + 1 - w))


def composition_dependent(net: DigitalNet, comp) -> bool:
    """Whether the first ``comp[i]`` rows of each generating matrix are dependent."""
    depth = max(max(comp), 1)
    rows = generator_rows(net, depth)
    vecs = [int(rows[i, r]) for i in range(net.s) for r in range(comp[i])]
    piv: dict[int, int] = {}
    for v in vecs:
        while v:
            p = v.bit_length() - 1
            if p not in piv:
                piv[p] = v
                break
            v ^= piv[p]
        else:
            return True
    return False
