# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; same contracts and operation order as ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy

cnp.import_array()


def gray_points(basis):
    cdef cnp.ndarray[uint64_t, ndim=2, mode="c"] b = np.ascontiguousarray(basis, dtype=np.uint64)
    cdef Py_ssize_t d = b.shape[0], s = b.shape[1]
    cdef Py_ssize_t total = (<Py_ssize_t>1) << d
    out_arr = np.zeros((total, s), dtype=np.uint64)
    cdef uint64_t[:, ::1] out = out_arr
    cdef uint64_t[:, ::1] bv = b
    cdef Py_ssize_t k, g, prev, i, bit
    with nogil:
        for k in range(1, total):
            # point k = point k-1 XOR basis[lowest set bit of k]
            bit = 0
            while not ((k >> bit) & 1):
                bit += 1
            for i in range(s):
                out[k, i] = out[k - 1, i] ^ bv[bit, i]
    return out_arr


def product_terms(points, double[:, ::1] tables, int shift, int width):
    cdef uint64_t[:, ::1] pts = np.ascontiguousarray(points, dtype=np.uint64)
    cdef Py_ssize_t npts = pts.shape[0], s = pts.shape[1]
    cdef Py_ssize_t nchunks = tables.shape[0]
    cdef uint64_t mask = ((<uint64_t>1) << width) - 1
    out_arr = np.empty(npts, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t p, i, c
    cdef uint64_t row
    cdef double prod
    with nogil:
        for p in range(npts):
            prod = 1.0
            for i in range(s):
                row = pts[p, i] << shift
                for c in range(nchunks):
                    prod = prod * tables[c, (row >> (width * (nchunks - 1 - c))) & mask]
            out[p] = prod - 1.0
    return out_arr


def syndrome_sum(columns, weights, int d):
    cdef uint64_t[::1] cols = np.ascontiguousarray(columns, dtype=np.uint64)
    cdef double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t size = (<Py_ssize_t>1) << d
    cdef Py_ssize_t k, x, y
    cdef uint64_t c
    cdef double r, a, b
    vec_arr = np.zeros(size, dtype=np.float64)
    cdef double[::1] vec = vec_arr
    with nogil:
        for k in range(cols.shape[0]):
            c = cols[k]
            r = w[k]
            if c == 0:
                for x in range(size):
                    vec[x] = vec[x] + r * vec[x]
            else:
                for x in range(size):
                    y = x ^ <Py_ssize_t>c
                    if x < y:
                        a = vec[x]
                        b = vec[y]
                        vec[x] = a + r * b
                        vec[y] = b + r * a
            vec[<Py_ssize_t>c] += r
    return float(vec[0])


cdef struct DfsState:
    int s
    int depth
    int m
    int nb
    uint64_t *rows
    uint64_t *bases
    int *comp
    int best
    int *witness


cdef inline uint64_t _reduce(uint64_t v, uint64_t *basis, int m) nogil:
    cdef int b
    for b in range(m - 1, -1, -1):
        if (v >> b) & 1 and basis[b]:
            v ^= basis[b]
    return v


cdef int _bitlen(uint64_t v) nogil:
    cdef int n = 0
    while v:
        v >>= 1
        n += 1
    return n


cdef void _dfs(DfsState *st, int i, int total) nogil:
    if i == st.s:
        return
    # n_i = 0: level i+1 inherits level i's basis unchanged
    memcpy(&st.bases[(i + 1) * st.nb], &st.bases[i * st.nb], st.nb * sizeof(uint64_t))
    _dfs(st, i + 1, total)
    cdef uint64_t *basis = &st.bases[(st.s + 1 + i) * st.nb]
    memcpy(basis, &st.bases[i * st.nb], st.nb * sizeof(uint64_t))
    cdef int k, j
    cdef uint64_t v
    for k in range(st.depth):
        if total + k + 1 >= st.best:
            return
        v = _reduce(st.rows[i * st.depth + k], basis, st.m)
        if v == 0:
            st.best = total + k + 1
            for j in range(st.s):
                st.witness[j] = st.comp[j] if j < i else 0
            st.witness[i] = k + 1
            return
        basis[_bitlen(v) - 1] = v
        st.comp[i] = k + 1
        memcpy(&st.bases[(i + 1) * st.nb], basis, st.nb * sizeof(uint64_t))
        _dfs(st, i + 1, total + k + 1)
        st.comp[i] = 0


def min_dependent(rows, int m):
    cdef uint64_t[:, ::1] r = np.ascontiguousarray(rows, dtype=np.uint64)
    cdef DfsState st
    st.s = r.shape[0]
    st.depth = r.shape[1] if st.s else 0
    st.m = m
    st.nb = m if m > 0 else 1
    st.best = m + 1
    witness = np.zeros(st.s, dtype=np.int64)
    if st.s == 0:
        return st.best, witness
    st.rows = <uint64_t *> malloc(st.s * st.depth * sizeof(uint64_t) + 1)
    st.bases = <uint64_t *> malloc(2 * (st.s + 1) * st.nb * sizeof(uint64_t))
    st.comp = <int *> malloc(st.s * sizeof(int))
    st.witness = <int *> malloc(st.s * sizeof(int))
    cdef int i, k
    try:
        for i in range(st.s):
            st.comp[i] = 0
            st.witness[i] = 0
            for k in range(st.depth):
                st.rows[i * st.depth + k] = r[i, k]
        for k in range(st.nb):
            st.bases[k] = 0
        with nogil:
            _dfs(&st, 0, 0)
        for i in range(st.s):
            witness[i] = st.witness[i]
    finally:
        free(st.rows)
        free(st.bases)
        free(st.comp)
        free(st.witness)
    return st.best, witness
