"""Dick weights and Walsh figure of merit (WAFOM) computations.

Three evaluation routes for ``WF(P) = sum_{A in P^perp, A != 0} 2^{-mu(A)}``:

* :func:`wafom_dual` enumerates the perpendicular space (definition).
* :func:`wafom_fast` with ``method="product"`` averages
  ``prod_{i,j} (1 + (-1)^{b_ij} r_j) - 1`` over the net points, the inner
  product over ``j`` taken from per-chunk lookup tables.
* :func:`wafom_fast` with ``method="syndrome"`` runs a transfer-matrix sum
  over the ``2^d`` syndromes of the perpendicular code.  It costs the same
  ``O(s n 2^d)`` but sums only positive terms.

The product route loses relative accuracy once ``WF`` drops towards
``1e-16`` times the typical product, because it subtracts 1 from terms of
order one.  ``method="auto"`` (the default) keeps the product value when its
rounding bound certifies a relative error below ``1e-13`` and otherwise
returns the syndrome value.  Results with magnitude below ``1e-300`` are
reported as 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .f2net import (
    MAX_ENUM_DIM,
    BitMatrix,
    DigitalNet,
    GuardError,
    dual,
    enumerate_points,
    generator_rows,
    gray_points,
)

#: bits per lookup-table chunk in the product formula
CHUNK_BITS = 8
#: largest perpendicular-space dimension :func:`wafom_dual` will enumerate
MAX_DUAL_DIM = 24
TINY = 1e-300
_EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class WeightSpec:
    """Which weight replaces the Dick weight ``mu``.

    ``kind`` is ``"plain"`` (``mu``), ``"alpha"`` (``mu_alpha``, keep the
    ``alpha`` deepest nonzero digits per row) or ``"delta"``
    (``mu_delta = sum (j + delta) a_ij``).
    """

    kind: str = "plain"
    value: float = 0

    def __post_init__(self):
        if self.kind not in ("plain", "alpha", "delta"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.kind == "alpha":
            if int(self.value) != self.value or self.value < 1:
                raise ValueError("alpha must be an integer >= 1")
            object.__setattr__(self, "value", int(self.value))
        if self.kind == "delta" and not self.value > -1:
            raise ValueError("delta must be > -1")

    @classmethod
    def parse(cls, text: str) -> WeightSpec:
        """Parse ``plain``, ``alpha=K`` or ``delta=X``."""
        text = text.strip()
        if text == "plain":
            return cls()
        kind, sep, val = text.partition("=")
        if not sep:
            raise ValueError(f"bad weight spec {text!r}")
        kind = kind.strip()
        return cls(kind, int(val) if kind == "alpha" else float(val))

    def __str__(self):
        return "plain" if self.kind == "plain" else f"{self.kind}={self.value:g}"


PLAIN = WeightSpec()


def dick_weight(a: BitMatrix) -> int:
    """``mu(A) = sum_{i,j} j a_ij``."""
    return sum(j for row in a.rows for j in range(1, a.n + 1) if (row >> (a.n - j)) & 1)


def dick_weight_alpha(a: BitMatrix, alpha: int) -> int:
    """Dick weight restricted to the ``alpha`` largest-``j`` nonzero digits of each row."""
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    total = 0
    for row in a.rows:
        for _ in range(alpha):
            if not row:
                break
            low = row & -row
            total += a.n - (low.bit_length() - 1)
            row ^= low
    return total


def dick_weight_delta(a: BitMatrix, delta: float) -> float:
    """``mu_delta(A) = sum (j + delta) a_ij``."""
    return dick_weight(a) + delta * a.popcount()


def weight(a: BitMatrix, spec: WeightSpec = PLAIN) -> float:
    if spec.kind == "alpha":
        return dick_weight_alpha(a, spec.value)
    if spec.kind == "delta":
        return dick_weight_delta(a, spec.value)
    return dick_weight(a)


def _weights_array(points: np.ndarray, n: int, spec: WeightSpec) -> np.ndarray:
    """Weights of many matrices at once; ``points`` has shape ``(M, s)``."""
    pts = np.asarray(points, dtype=np.uint64)
    total = np.zeros(pts.shape[0], dtype=np.float64)
    one = np.uint64(1)
    if spec.kind == "alpha":
        for i in range(pts.shape[1]):
            row = pts[:, i].copy()
            for _ in range(min(spec.value, n)):
                low = row & (~row + one)
                nz = low != 0
                pos = np.zeros(row.shape, dtype=np.float64)
                pos[nz] = n - np.log2(low[nz].astype(np.float64))
                total += pos
                row ^= low
        return total
    pop = np.zeros(pts.shape[0], dtype=np.float64)
    for j in range(1, n + 1):
        bits = ((pts >> np.uint64(n - j)) & one).sum(axis=1).astype(np.float64)
        total += j * bits
        pop += bits
    if spec.kind == "delta":
        total += spec.value * pop
    return total


def wafom_dual(net: DigitalNet, w: WeightSpec = PLAIN, squared: bool = False,
               max_dual_dim: int = MAX_DUAL_DIM) -> float:
    """WAFOM by direct summation over the nonzero elements of ``P^perp``.

    With ``squared`` each term is ``2^{-2 weight(A)}`` (the inner sum of the
    r.m.s. variant).  Supports all weight kinds, including ``alpha``.
    """
    net.require_linear()
    dim = net.s * net.n - net.d
    if dim > max_dual_dim:
        raise GuardError(f"perpendicular space has dimension {dim} > {max_dual_dim}")
    dual_net = dual(net)
    if dual_net.dim == 0:
        return 0.0
    arr = np.array([b.rows for b in dual_net.basis], dtype=np.uint64)
    pts = gray_points(arr, net.s, max_dim=max_dual_dim)[1:]
    c = 2.0 if squared else 1.0
    val = math.fsum(np.exp2(-c * _weights_array(pts, net.n, w)))
    return 0.0 if val < TINY else val


def digit_ratios(n: int, w: WeightSpec = PLAIN, squared: bool = False) -> np.ndarray:
    """``r_j`` for ``j = 1..n``: ``2^{-c (j + delta)}`` with ``c = 2`` when squared."""
    if w.kind == "alpha":
        raise ValueError("alpha-truncated weights have no product formula; use wafom_dual")
    c = 2 if squared else 1
    base = 2.0 ** (-c * w.value) if w.kind == "delta" else 1.0
    return np.array([math.ldexp(base, -c * j) for j in range(1, n + 1)])


def chunk_tables(n: int, ratios: np.ndarray, width: int = CHUNK_BITS) -> np.ndarray:
    """Lookup tables of ``prod_j (1 + (-1)^{b_j} r_j)`` per ``width``-bit chunk.

    Chunk ``c`` covers digits ``j = c*width + 1 .. (c+1)*width``; digits past
    ``n`` are padding with factor 1.  Shape ``(ceil(n/width), 2^width)``.
    """
    nchunks = -(-n // width)
    v = np.arange(1 << width)
    tables = np.ones((nchunks, 1 << width), dtype=np.float64)
    for c in range(nchunks):
        for t in range(width):
            j = c * width + t + 1
            if j > n:
                break
            r = ratios[j - 1]
            bit = (v >> (width - 1 - t)) & 1
            tables[c] *= np.where(bit == 1, 1.0 - r, 1.0 + r)
    return np.ascontiguousarray(tables)


def _product_route(net: DigitalNet, ratios: np.ndarray, width: int, max_dim: int):
    pts = enumerate_points(net, max_dim)
    tables = chunk_tables(net.n, ratios, width)
    shift = tables.shape[0] * width - net.n
    terms = _backend.kernels.product_terms(pts, tables, shift, width)
    val = math.fsum(terms) / net.size
    # each product carries <= (factors + table depth) roundings of its own size
    bound = float(np.abs(terms + 1.0).mean()) * (net.s * tables.shape[0] + width + 4) * _EPS
    return val, bound


def _syndrome_route(net: DigitalNet, ratios: np.ndarray, max_dim: int) -> float:
    if net.d > min(max_dim, 63):
        raise GuardError(f"syndrome table of 2^{net.d} entries exceeds the cap")
    cols = generator_rows(net).reshape(-1)
    weights = np.tile(ratios, net.s)
    return _backend.kernels.syndrome_sum(cols, weights, net.d)


def wafom_fast(net: DigitalNet, w: WeightSpec = PLAIN, squared: bool = False,
               method: str = "auto", width: int = CHUNK_BITS,
               max_dim: int = MAX_ENUM_DIM) -> float:
    """WAFOM from the net itself, without enumerating ``P^perp``.

    ``method`` is ``"product"``, ``"syndrome"`` or ``"auto"``; see the module
    docstring.  ``w`` may be plain or delta.
    """
    net.require_linear()
    ratios = digit_ratios(net.n, w, squared)
    if method not in ("auto", "product", "syndrome"):
        raise ValueError(f"unknown method {method!r}")
    if method != "syndrome":
        val, bound = _product_route(net, ratios, width, max_dim)
        if method == "product" or bound <= 1e-13 * abs(val):
            return 0.0 if abs(val) < TINY else val
    val = _syndrome_route(net, ratios, max_dim)
    return 0.0 if val < TINY else val


def wafom(net: DigitalNet, w: WeightSpec = PLAIN, squared: bool = False) -> float:
    """WAFOM for any weight kind: fast route when possible, else the dual sum."""
    if w.kind == "alpha":
        return wafom_dual(net, w, squared)
    return wafom_fast(net, w, squared)


def wafom_rms(net: DigitalNet, w: WeightSpec = PLAIN) -> float:
    """``WF^rms(P) = sqrt(sum 2^{-2 weight(A)})``."""
    return math.sqrt(wafom(net, w, squared=True))


def wafom_exp_approx(net: DigitalNet) -> float:
    """Absolute QMC error of ``exp(-2 sum x_i)`` over the net's midpoints.

    A cheap surrogate whose ranking tracks WAFOM.
    """
    from .quadrature import midpoints, tree_sum

    x = midpoints(enumerate_points(net), net.n)
    vals = np.sort(np.exp(-2.0 * x.sum(axis=1)))
    est = tree_sum(vals) / net.size
    exact = ((1.0 - math.exp(-2.0)) / 2.0) ** net.s
    return abs(est - exact)
