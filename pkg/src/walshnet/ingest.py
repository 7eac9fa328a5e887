"""Net files, Joe-Kuo direction numbers and generating-matrix text files.

NetFile layout (canonical: lowercase hex, single spaces, LF line ends)::

    s n d
    <hex row 1> <hex row 2> ... <hex row s>     # one line per basis matrix

Each row is ``ceil(n/4)`` hex digits holding the ``n`` digits left-aligned,
so digit ``j = 1`` is the most significant bit of the first hex digit.  Lines
starting with ``#`` are ignored on input.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .f2net import BitMatrix, DigitalNet, RankError, from_generating_matrices


class FormatError(ValueError):
    """Malformed net, matrix or direction-number text."""


class RankDeficientWarning(UserWarning):
    pass


def _content_lines(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


def save_net(net: DigitalNet) -> str:
    digits = -(-net.n // 4)
    pad = 4 * digits - net.n
    lines = [f"{net.s} {net.n} {net.d}"]
    for b in net.basis:
        lines.append(" ".join(format(r << pad, f"0{digits}x") for r in b.rows))
    return "\n".join(lines) + "\n"


def load_net(text: str) -> DigitalNet:
    """Parse a NetFile.  A rank-deficient basis loads with ``degenerate=True`` and a warning."""
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty net file")
    head = lines[0].split()
    try:
        s, n, d = (int(x) for x in head)
    except ValueError:
        raise FormatError(f"bad header {lines[0]!r}; expected 's n d'") from None
    if s < 1 or not 1 <= n <= 64 or d < 0:
        raise FormatError(f"header values out of range: {lines[0]!r}")
    if len(lines) - 1 != d:
        raise FormatError(f"expected {d} basis lines, found {len(lines) - 1}")
    digits = -(-n // 4)
    pad = 4 * digits - n
    basis = []
    for k, line in enumerate(lines[1:], start=1):
        fields = line.split()
        if len(fields) != s:
            raise FormatError(f"basis line {k}: expected {s} fields, got {len(fields)}")
        rows = []
        for fld in fields:
            if len(fld) != digits:
                raise FormatError(f"basis line {k}: field {fld!r} must have {digits} hex digits")
            try:
                v = int(fld, 16)
            except ValueError:
                raise FormatError(f"basis line {k}: bad hex {fld!r}") from None
            if v & ((1 << pad) - 1):
                raise FormatError(f"basis line {k}: padding bits of {fld!r} are not zero")
            rows.append(v >> pad)
        basis.append(BitMatrix(s, n, tuple(rows)))
    try:
        return DigitalNet(s, n, tuple(basis))
    except RankError as exc:
        warnings.warn(f"net file basis is rank deficient: {exc}", RankDeficientWarning, stacklevel=2)
        return DigitalNet(s, n, tuple(basis), degenerate=True)


@dataclass(frozen=True)
class DirectionRecord:
    dim: int
    degree: int
    coeff: int
    m: tuple[int, ...]


def parse_direction_numbers(text: str) -> list[DirectionRecord]:
    """Parse the Joe-Kuo layout ``d s a m_1 ... m_s`` (header line optional).

    Records describe dimensions 2, 3, ...; dimension 1 is implicit.
    """
    recs = []
    for line in _content_lines(text):
        fields = line.split()
        if fields[0] == "d":
            continue
        try:
            vals = [int(x) for x in fields]
        except ValueError:
            raise FormatError(f"bad direction-number line {line!r}") from None
        if len(vals) < 3:
            raise FormatError(f"short direction-number line {line!r}")
        dim, deg, a, *m = vals
        if len(m) != deg:
            raise FormatError(f"dimension {dim}: expected {deg} initial numbers, got {len(m)}")
        for k, mk in enumerate(m, start=1):
            if mk % 2 == 0 or mk >= 1 << k:
                raise FormatError(f"dimension {dim}: m_{k} = {mk} must be odd and < 2^{k}")
        recs.append(DirectionRecord(dim, deg, a, tuple(m)))
    return recs


def direction_integers(rec: DirectionRecord | None, count: int) -> list[int]:
    """``m_1 .. m_count`` by the Sobol' recurrence; ``rec=None`` is dimension 1 (all ones)."""
    if rec is None:
        return [1] * count
    deg, a = rec.degree, rec.coeff
    m = list(rec.m[:count])
    for k in range(deg, count):
        v = m[k - deg] ^ (m[k - deg] << deg)
        for i in range(1, deg):
            if (a >> (deg - 1 - i)) & 1:
                v ^= m[k - i] << i
        m.append(v)
    return m


def sobol_matrices(records: list[DirectionRecord], s: int, m: int) -> np.ndarray:
    """Sobol' generating matrices, shape ``(s, m, m)``; ``C[i, r, k]`` is digit ``r+1`` of column ``k``."""
    if m > 31:
        raise ValueError("m must be <= 31")
    if len(records) < s - 1:
        raise FormatError(f"direction numbers cover {len(records) + 1} dimensions, need {s}")
    c = np.zeros((s, m, m), dtype=np.uint8)
    for i in range(s):
        mk = direction_integers(records[i - 1] if i else None, m)
        for k in range(m):
            v = mk[k] << (m - 1 - k)  # v_k = m_k / 2^(k+1) as an m-digit fraction
            for r in range(m):
                c[i, r, k] = (v >> (m - 1 - r)) & 1
    return c


def sobol_net(text: str, s: int, m: int) -> DigitalNet:
    """First ``2^m`` Sobol' points as a digital net with ``n = m``."""
    return from_generating_matrices(sobol_matrices(parse_direction_numbers(text), s, m))


def load_generating_matrices(text: str, s: int, n: int, m: int) -> DigitalNet:
    """Net from ``s`` matrices of ``n`` rows, each row ``m`` characters of 0/1.

    Rows are whitespace separated; blank lines and ``#`` comments are ignored.
    """
    tokens = [tok for line in _content_lines(text) for tok in line.split()]
    if len(tokens) != s * n:
        raise FormatError(f"expected {s * n} rows ({s} matrices x {n}), got {len(tokens)}")
    c = np.zeros((s, n, m), dtype=np.uint8)
    for idx, tok in enumerate(tokens):
        if len(tok) != m or set(tok) - {"0", "1"}:
            raise FormatError(f"row {idx + 1}: {tok!r} is not {m} characters of 0/1")
        c[idx // n, idx % n] = [ch == "1" for ch in tok]
    return from_generating_matrices(c)


def save_generating_matrices(c: np.ndarray) -> str:
    blocks = ["\n".join("".join(str(int(x)) for x in row) for row in mat) for mat in c]
    return "\n\n".join(blocks) + "\n"
