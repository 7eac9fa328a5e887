"""QMC and MC integration with digital nets, digital shifts and error statistics.

Signed errors are ``estimate - truth``.  QMC averages sort the function
values and add them pairwise, so the estimate depends only on the multiset of
points: shifting by an element of the net gives a bit-identical result.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .f2net import BitMatrix, DigitalNet, enumerate_points
from .rng import make_rng, random_rows

#: mantissa bits usable for exact midpoints
_MANT = 52


def midpoints(points: np.ndarray, n: int) -> np.ndarray:
    """Map an ``(N, s)`` array of ``n``-bit rows to cell midpoints in ``[0, 1)``.

    Coordinate = ``x / 2^n + 2^{-(n+1)}``.  For ``n > 52`` the row is first
    truncated to 52 digits so the midpoint stays exactly representable and
    strictly below 1.
    """
    x = np.asarray(points, dtype=np.uint64)
    if n > _MANT:
        x = x >> np.uint64(n - _MANT)
        n = _MANT
    return np.ldexp(2.0 * x.astype(np.float64) + 1.0, -(n + 1))


def midpoint(b: BitMatrix) -> np.ndarray:
    return midpoints(np.array([b.rows], dtype=np.uint64), b.n)[0]


def tree_sum(values: np.ndarray) -> float:
    """Pairwise (tree) summation in a fixed order."""
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        return 0.0
    while v.size > 1:
        if v.size & 1:
            v = np.append(v, 0.0)
        v = v[0::2] + v[1::2]
    return float(v[0])


def _average(values: np.ndarray) -> float:
    return tree_sum(np.sort(values)) / values.size


def _ref(f, reference):
    if reference is not None:
        return float(reference)
    exact = getattr(f, "exact", None)
    if exact is None:
        raise ValueError("no reference integral available; pass reference=")
    return float(exact)


def _dim(f, s):
    dim = getattr(f, "dim", None)
    if dim is not None and dim != s:
        raise ValueError(f"integrand dimension {dim} != net dimension {s}")


def digital_shift(net: DigitalNet, sigma: BitMatrix) -> np.ndarray:
    """Points ``{B + sigma : B in P}`` as a ``(2^d, s)`` uint64 array."""
    if (sigma.s, sigma.n) != (net.s, net.n):
        raise ValueError("shift shape does not match net")
    return enumerate_points(net) ^ np.array(sigma.rows, dtype=np.uint64)


def _shift_rows(shift) -> np.ndarray | None:
    if shift is None:
        return None
    if isinstance(shift, BitMatrix):
        return np.array(shift.rows, dtype=np.uint64)
    return np.asarray(shift, dtype=np.uint64)


def qmc_estimate(f: Callable, net: DigitalNet, shift=None, points: np.ndarray | None = None) -> float:
    """Average of ``f`` over the midpoints of ``net`` (XOR ``shift``).

    ``points`` may pass a precomputed enumeration of ``net``.
    """
    _dim(f, net.s)
    pts = enumerate_points(net) if points is None else points
    sh = _shift_rows(shift)
    if sh is not None:
        if sh.shape != (net.s,):
            raise ValueError("shift shape does not match net")
        pts = pts ^ sh
    return _average(f(midpoints(pts, net.n)))


@dataclass(frozen=True)
class ErrorStat:
    """Error of one estimate, or aggregate over several shifts/replicates.

    For aggregates ``signed_error`` is the mean signed error and
    ``abs_error`` the mean absolute error.
    """

    signed_error: float
    abs_error: float
    rmse: float
    sample_count: int
    shift_count: int = 1
    seed: int | None = None
    reference_estimated: bool = False


def qmc_error(f, net: DigitalNet, shift=None, reference=None) -> ErrorStat:
    err = qmc_estimate(f, net, shift) - _ref(f, reference)
    return ErrorStat(err, abs(err), abs(err), net.size)


def _aggregate(errors, n_samples, seed, flagged=False) -> ErrorStat:
    e = np.asarray(errors, dtype=np.float64)
    return ErrorStat(
        signed_error=math.fsum(e) / e.size,
        abs_error=math.fsum(np.abs(e)) / e.size,
        rmse=math.sqrt(math.fsum(e * e) / e.size),
        sample_count=n_samples,
        shift_count=e.size,
        seed=seed,
        reference_estimated=flagged,
    )


def mc_reference(f, samples: int = 1 << 22, seed: int = 0) -> float:
    """High-N Monte Carlo reference value for integrands without a closed form."""
    return mc_estimate(f, samples, seed, role="mc-reference")


def rmse_over_shifts(f, net: DigitalNet, count: int = 32, seed: int = 0, reference=None,
                     exhaustive: bool = False, points: np.ndarray | None = None) -> ErrorStat:
    """Root mean square error over ``count`` uniform random digital shifts.

    With ``exhaustive=True`` every ``sigma`` in ``V`` is used once
    (``2^{s n}`` shifts).  ``reference="mc"`` estimates the integral by
    :func:`mc_reference` and flags the result.
    """
    _dim(f, net.s)
    flagged = False
    if isinstance(reference, str) and reference == "mc":
        reference, flagged = mc_reference(f, seed=seed), True
    truth = _ref(f, reference)
    pts = enumerate_points(net) if points is None else points
    if exhaustive:
        if net.s * net.n > 20:
            raise ValueError("exhaustive shifts need s*n <= 20")
        flat = np.arange(1 << (net.s * net.n), dtype=np.uint64)
        mask = np.uint64((1 << net.n) - 1)
        shifts = np.stack([(flat >> np.uint64(net.n * (net.s - 1 - i))) & mask
                           for i in range(net.s)], axis=1)
    else:
        if count < 1:
            raise ValueError("count must be >= 1")
        shifts = random_rows(make_rng(seed, "shift"), count, net.s, net.n)
    errors = [_average(f(midpoints(pts ^ sh, net.n))) - truth for sh in shifts]
    return _aggregate(errors, net.size, seed, flagged)


def mc_estimate(f, samples: int, seed: int = 0, replicate: int = 0, role: str = "mc") -> float:
    """Plain Monte Carlo mean of ``f`` over ``samples`` uniform points."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    s = getattr(f, "dim")
    x = make_rng(seed, role, replicate).random((samples, s))
    return tree_sum(f(x)) / samples


def mc_rmse(f, samples: int, replicates: int = 32, seed: int = 0, reference=None) -> ErrorStat:
    """RMSE of :func:`mc_estimate` over independent replicates."""
    truth = _ref(f, reference)
    errors = [mc_estimate(f, samples, seed, r) - truth for r in range(replicates)]
    return _aggregate(errors, samples, seed)
