"""NumPy / pure-Python kernels.

Reference implementations of the hot loops.  The compiled module
``walshnet._kernels`` exposes the same functions with the same floating-point
operation order, so both backends return bit-identical results.
"""
import numpy as np


def gray_points(basis):
    """All XOR-combinations of ``basis`` rows (shape ``(d, s)``) in Gray-code order.

    Point ``k`` is the combination selected by the bits of ``k ^ (k >> 1)``, so
    consecutive points differ by exactly one basis vector.
    """
    basis = np.ascontiguousarray(basis, dtype=np.uint64)
    d, s = basis.shape
    pts = np.zeros((1, s), dtype=np.uint64)
    for k in range(d):
        pts = np.concatenate([pts, pts[::-1] ^ basis[k]])
    return pts


def product_terms(points, tables, shift, width):
    """Per-point ``prod_{i,j} (1 + (-1)^b_ij r_j) - 1`` by chunked table lookup."""
    points = np.asarray(points, dtype=np.uint64)
    nchunks = tables.shape[0]
    mask = np.uint64((1 << width) - 1)
    prod = np.ones(points.shape[0], dtype=np.float64)
    for i in range(points.shape[1]):
        row = points[:, i] << np.uint64(shift)
        for c in range(nchunks):
            idx = (row >> np.uint64(width * (nchunks - 1 - c))) & mask
            prod *= tables[c][idx.astype(np.intp)]
    return prod - 1.0


def syndrome_sum(columns, weights, d):
    """Sum of ``prod_k weights[k]^{a_k}`` over nonzero ``a`` with ``sum_k a_k columns[k] = 0``.

    Transfer-matrix evaluation over the 2^d partial syndromes.  Only additions
    of non-negative terms occur, so the result carries full relative accuracy.
    """
    size = 1 << d
    vec = np.zeros(size, dtype=np.float64)
    idx = np.arange(size, dtype=np.uint64)
    for c, r in zip(np.asarray(columns, dtype=np.uint64), weights):
        new = vec + r * vec[(idx ^ c).astype(np.intp)]
        new[int(c)] += r
        vec = new
    return float(vec[0])


def _reduce(v, basis, m):
    for b in range(m - 1, -1, -1):
        if (v >> b) & 1 and basis[b]:
            v ^= basis[b]
    return v


def min_dependent(rows, m):
    """Smallest total ``q <= m`` of a composition whose row prefixes are dependent.

    ``rows[i][r]`` is row ``r`` of generating matrix ``i`` as an ``m``-bit
    integer.  Returns ``(q, witness)``; ``q = m + 1`` with an all-zero witness
    when every composition of total ``<= m`` is independent.
    """
    rows = [[int(x) for x in r] for r in rows]
    s = len(rows)
    depth = len(rows[0]) if s else 0
    best = [m + 1, [0] * s]

    def dfs(i, total, basis, comp):
        if i == s:
            return
        dfs(i + 1, total, basis, comp)
        basis = list(basis)
        for k in range(depth):
            if total + k + 1 >= best[0]:
                return
            v = _reduce(rows[i][k], basis, m)
            if v == 0:
                best[0] = total + k + 1
                best[1] = comp[:i] + [k + 1] + [0] * (s - i - 1)
                return
            basis[v.bit_length() - 1] = v
            comp[i] = k + 1
            dfs(i + 1, total + k + 1, basis, comp)
            comp[i] = 0

    dfs(0, 0, [0] * max(m, 1), [0] * s)
    return best[0], np.array(best[1], dtype=np.int64)
