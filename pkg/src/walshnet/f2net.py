"""Bit-exact linear algebra over F2 for digital nets.

An element of ``V = M_{s,n}(F2)`` is stored as ``s`` row integers of ``n``
bits.  Digit ``j = 1`` (the first binary digit after the point) is the most
significant of the ``n`` used bits, so row ``i`` read as an integer ``x``
corresponds to the dyadic interval ``[x / 2^n, (x + 1) / 2^n)``.

Flattening concatenates the rows, row 0 first (most significant), giving an
``s * n``-bit integer used by the elimination routines.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import _backend

MAX_N = 64
#: default cap on ``d`` for materialized enumeration (2^26 points * s words)
MAX_ENUM_DIM = 26


class RankError(ValueError):
    """Basis vectors of a net are linearly dependent."""


class GuardError(RuntimeError):
    """A resource guard refused an enumeration that would be too large."""


@dataclass(frozen=True)
class BitMatrix:
    """An ``s x n`` matrix over F2, one ``n``-bit integer per row."""

    s: int
    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("s must be >= 1")
        if not 1 <= self.n <= MAX_N:
            raise ValueError(f"n must be in 1..{MAX_N}")
        rows = tuple(int(r) for r in self.rows)
        if len(rows) != self.s:
            raise ValueError(f"expected {self.s} rows, got {len(rows)}")
        if any(r < 0 or r >> self.n for r in rows):
            raise ValueError(f"row value outside {self.n} bits")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def zeros(cls, s: int, n: int) -> BitMatrix:
        return cls(s, n, (0,) * s)

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> BitMatrix:
        """Build from rows of '0'/'1' characters, e.g. ``["1001", "0111"]``."""
        n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise ValueError("rows must share one length")
        return cls(len(rows), n, tuple(int(r, 2) for r in rows))

    @classmethod
    def from_flat(cls, value: int, s: int, n: int) -> BitMatrix:
        mask = (1 << n) - 1
        return cls(s, n, tuple((value >> (n * (s - 1 - i))) & mask for i in range(s)))

    def flat(self) -> int:
        v = 0
        for r in self.rows:
            v = (v << self.n) | r
        return v

    def bit(self, i: int, j: int) -> int:
        """Entry ``a_ij`` with 1-based ``i`` and ``j`` as in the usual notation."""
        return (self.rows[i - 1] >> (self.n - j)) & 1

    def to_strings(self) -> list[str]:
        return [format(r, f"0{self.n}b") for r in self.rows]

    def popcount(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    def _check(self, other: BitMatrix):
        if (self.s, self.n) != (other.s, other.n):
            raise ValueError(f"shape mismatch: {self.s}x{self.n} vs {other.s}x{other.n}")

    def __xor__(self, other: BitMatrix) -> BitMatrix:
        self._check(other)
        return BitMatrix(self.s, self.n, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    __add__ = __xor__

    def __bool__(self):
        return any(self.rows)

    def __repr__(self):
        return f"BitMatrix({'/'.join(self.to_strings())})"


def inner_product(a: BitMatrix, b: BitMatrix) -> int:
    """``sum a_ij b_ij mod 2``."""
    a._check(b)
    return sum((x & y).bit_count() for x, y in zip(a.rows, b.rows)) & 1


def _echelon(vectors: Iterable[int]) -> dict[int, int]:
    """Reduced echelon form keyed by pivot bit (highest set bit of each row)."""
    piv: dict[int, int] = {}
    for v in vectors:
        for p, row in piv.items():
            if (v >> p) & 1:
                v ^= row
        if v:
            p = v.bit_length() - 1
            for q in piv:
                if (piv[q] >> p) & 1:
                    piv[q] ^= v
            piv[p] = v
    return piv


def rank(vectors: Sequence[BitMatrix]) -> int:
    """F2-rank of the flattened vectors."""
    if vectors:
        first = vectors[0]
        for v in vectors[1:]:
            first._check(v)
    return len(_echelon(v.flat() for v in vectors))


def _nullspace(vectors: Sequence[int], width: int) -> list[int]:
    """Basis of ``{x : popcount(x & v) even for every v}`` in ``F2^width``."""
    piv = _echelon(vectors)
    out = []
    for f in range(width - 1, -1, -1):
        if f in piv:
            continue
        x = 1 << f
        for p, row in piv.items():
            if (row >> f) & 1:
                x |= 1 << p
        out.append(x)
    return out


@dataclass(frozen=True)
class DigitalNet:
    """An F2-linear subspace of ``M_{s,n}(F2)`` given by ``d`` basis matrices.

    Construction checks independence and raises :class:`RankError` unless
    ``degenerate=True`` is passed; degenerate sets can be stored and shifted
    but are refused by the figure-of-merit routines.
    """

    s: int
    n: int
    basis: tuple[BitMatrix, ...]
    degenerate: bool = field(default=False, compare=False)

    def __post_init__(self):
        basis = tuple(self.basis)
        for b in basis:
            if (b.s, b.n) != (self.s, self.n):
                raise ValueError("basis matrix shape does not match net")
        object.__setattr__(self, "basis", basis)
        r = len(_echelon(b.flat() for b in basis))
        if r != len(basis):
            if not self.degenerate:
                raise RankError(f"basis has rank {r} < d = {len(basis)}")
        else:
            object.__setattr__(self, "degenerate", False)

    @classmethod
    def span(cls, vectors: Sequence[BitMatrix]) -> DigitalNet:
        """Net spanned by arbitrary (possibly dependent) vectors."""
        s, n = vectors[0].s, vectors[0].n
        piv = _echelon(v.flat() for v in vectors)
        return cls(s, n, tuple(BitMatrix.from_flat(piv[p], s, n) for p in sorted(piv, reverse=True)))

    @classmethod
    def full(cls, s: int, n: int) -> DigitalNet:
        """The whole space ``V`` with its unit basis."""
        return cls(s, n, tuple(BitMatrix.from_flat(1 << k, s, n) for k in range(s * n - 1, -1, -1)))

    @classmethod
    def perp(cls, vectors: Sequence[BitMatrix]) -> DigitalNet:
        """The perpendicular space of ``span(vectors)`` as a net, e.g. ``(111)^perp``."""
        return dual(cls.span(vectors)).as_net()

    @property
    def d(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return 1 << self.d

    @cached_property
    def basis_array(self) -> np.ndarray:
        """Basis as a ``(d, s)`` uint64 array."""
        return np.array([b.rows for b in self.basis], dtype=np.uint64).reshape(self.d, self.s)

    def require_linear(self):
        if self.degenerate:
            raise RankError("operation requires an F2-linear net (basis is rank deficient)")

    def __contains__(self, item: BitMatrix) -> bool:
        piv = _echelon(b.flat() for b in self.basis)
        v = item.flat()
        for p in sorted(piv, reverse=True):
            if (v >> p) & 1:
                v ^= piv[p]
        return v == 0


@dataclass(frozen=True)
class DualBasis:
    """Basis of the perpendicular space ``P^perp`` (dimension ``s*n - d``)."""

    s: int
    n: int
    basis: tuple[BitMatrix, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def as_net(self) -> DigitalNet:
        return DigitalNet(self.s, self.n, self.basis)


def dual(net: DigitalNet) -> DualBasis:
    s, n = net.s, net.n
    vecs = _nullspace([b.flat() for b in net.basis], s * n)
    return DualBasis(s, n, tuple(BitMatrix.from_flat(v, s, n) for v in vecs))


def gray_points(basis_array: np.ndarray, s: int, max_dim: int = MAX_ENUM_DIM) -> np.ndarray:
    """Gray-code enumeration of all XOR-combinations of a ``(d, s)`` basis array."""
    d = basis_array.shape[0]
    if d > max_dim:
        raise GuardError(f"enumerating 2^{d} points exceeds the cap 2^{max_dim}")
    if d == 0:
        return np.zeros((1, s), dtype=np.uint64)
    return _backend.kernels.gray_points(basis_array)


def enumerate_points(net: DigitalNet, max_dim: int = MAX_ENUM_DIM) -> np.ndarray:
    """All ``2^d`` elements of the net as a ``(2^d, s)`` uint64 array.

    Rows follow the binary reflected Gray code: element ``k`` differs from
    element ``k - 1`` by basis vector ``ctz(k)``; element 0 is zero.
    """
    return gray_points(net.basis_array, net.s, max_dim)


def iter_points(net: DigitalNet) -> Iterator[BitMatrix]:
    """Lazy Gray-code enumeration, one XOR per step."""
    rows = [0] * net.s
    yield BitMatrix(net.s, net.n, tuple(rows))
    for k in range(1, net.size):
        b = net.basis[(k & -k).bit_length() - 1].rows
        rows = [x ^ y for x, y in zip(rows, b)]
        yield BitMatrix(net.s, net.n, tuple(rows))


def to_generating_matrices(net: DigitalNet) -> np.ndarray:
    """Generating matrices as a ``(s, n, d)`` uint8 array.

    ``C[i, r, k]`` is digit ``r + 1`` of row ``i`` of basis vector ``k``, so the
    point for digit vector ``z`` has row ``i`` equal to ``C[i] @ z mod 2``.
    """
    s, n, d = net.s, net.n, net.d
    c = np.zeros((s, n, d), dtype=np.uint8)
    for k, b in enumerate(net.basis):
        for i, row in enumerate(b.rows):
            for r in range(n):
                c[i, r, k] = (row >> (n - 1 - r)) & 1
    return c


def from_generating_matrices(c: np.ndarray) -> DigitalNet:
    """Inverse of :func:`to_generating_matrices`."""
    c = np.asarray(c, dtype=np.uint8) & 1
    s, n, d = c.shape
    weights = np.array([1 << (n - 1 - r) for r in range(n)], dtype=object)
    basis = []
    for k in range(d):
        rows = tuple(int((c[i, :, k].astype(object) * weights).sum()) for i in range(s))
        basis.append(BitMatrix(s, n, rows))
    return DigitalNet(s, n, tuple(basis))


def generator_rows(net: DigitalNet, depth: int | None = None) -> np.ndarray:
    """Rows of the generating matrices as ``d``-bit integers, shape ``(s, depth)``.

    Bit ``d - 1 - k`` of entry ``[i, r]`` holds ``C[i, r, k]``; rows beyond ``n``
    are zero.
    """
    s, n, d = net.s, net.n, net.d
    depth = n if depth is None else depth
    out = np.zeros((s, depth), dtype=np.uint64)
    use = min(n, depth)
    shifts = np.arange(n - 1, n - 1 - use, -1, dtype=np.uint64)
    one = np.uint64(1)
    for k, rows in enumerate(net.basis_array):
        bits = (rows[:, None] >> shifts[None, :]) & one
        out[:, :use] |= bits << np.uint64(d - 1 - k)
    return out
