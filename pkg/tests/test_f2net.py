import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from walshnet.f2net import (
    BitMatrix,
    DigitalNet,
    GuardError,
    RankError,
    dual,
    enumerate_points,
    from_generating_matrices,
    generator_rows,
    inner_product,
    iter_points,
    rank,
    to_generating_matrices,
)

from conftest import small_nets


def test_bitmatrix_layout():
    b = BitMatrix.from_strings(["1001", "0111"])
    assert b.rows == (0b1001, 0b0111)
    assert b.bit(1, 1) == 1 and b.bit(1, 2) == 0 and b.bit(2, 4) == 1
    assert b.flat() == 0b10010111
    assert BitMatrix.from_flat(b.flat(), 2, 4) == b
    assert b.to_strings() == ["1001", "0111"]
    assert b.popcount() == 5


def test_bitmatrix_validation():
    with pytest.raises(ValueError):
        BitMatrix(1, 3, (8,))
    with pytest.raises(ValueError):
        BitMatrix(2, 3, (1,))
    with pytest.raises(ValueError):
        BitMatrix(1, 65, (0,))
    with pytest.raises(ValueError):
        BitMatrix.zeros(1, 3) ^ BitMatrix.zeros(1, 4)


def test_inner_product():
    a = BitMatrix.from_strings(["110", "011"])
    b = BitMatrix.from_strings(["100", "011"])
    assert inner_product(a, b) == 1
    assert inner_product(a, a) == 0


def test_rank_and_rank_error():
    a = BitMatrix.from_strings(["101"])
    b = BitMatrix.from_strings(["011"])
    assert rank([a, b, a ^ b]) == 2
    with pytest.raises(RankError):
        DigitalNet(1, 3, (a, b, a ^ b))
    net = DigitalNet(1, 3, (a, b, a ^ b), degenerate=True)
    assert net.degenerate
    with pytest.raises(RankError):
        net.require_linear()


def test_span_full_perp():
    v = DigitalNet.full(1, 3)
    assert v.d == 3 and v.size == 8
    p = DigitalNet.perp([BitMatrix.from_strings(["111"])])
    assert p.d == 2
    assert sorted(int(x) for x in enumerate_points(p)[:, 0]) == [0, 3, 5, 6]
    assert BitMatrix.from_strings(["011"]) in p
    assert BitMatrix.from_strings(["001"]) not in p


def _brute_perp(net):
    s, n = net.s, net.n
    pts = {BitMatrix(s, n, tuple(int(x) for x in row)) for row in enumerate_points(net)}
    out = set()
    for v in range(1 << (s * n)):
        a = BitMatrix.from_flat(v, s, n)
        if all(inner_product(a, b) == 0 for b in pts):
            out.add(a)
    return out


@given(small_nets(max_sn=8))
def test_dual_matches_brute_force(net):
    db = dual(net)
    assert db.dim == net.s * net.n - net.d
    got = {BitMatrix(net.s, net.n, tuple(int(x) for x in row)) for row in enumerate_points(db.as_net())}
    assert got == _brute_perp(net)


@given(small_nets(max_sn=16))
def test_dual_of_dual(net):
    back = dual(dual(net).as_net()).as_net()
    assert back.d == net.d
    assert all(b in back for b in net.basis)


@given(small_nets(max_sn=16))
def test_enumeration_is_the_span(net):
    pts = enumerate_points(net)
    assert pts.shape == (net.size, net.s)
    assert len({tuple(r) for r in pts.tolist()}) == net.size
    assert not pts[0].any()
    lazy = np.array([b.rows for b in iter_points(net)], dtype=np.uint64)
    assert np.array_equal(lazy, pts)


def test_enumeration_guard():
    net = DigitalNet.full(1, 4)
    with pytest.raises(GuardError):
        enumerate_points(net, max_dim=3)


@given(small_nets(max_sn=16))
def test_generating_matrices_round_trip(net):
    c = to_generating_matrices(net)
    assert c.shape == (net.s, net.n, net.d)
    back = from_generating_matrices(c)
    assert back.basis == net.basis
    # C z reproduces the point for digit vector z
    pts = {tuple(r) for r in enumerate_points(net).tolist()}
    for z in itertools.islice(itertools.product((0, 1), repeat=net.d), 16):
        rows = (c.astype(int) @ np.array(z, dtype=int)) % 2
        vals = tuple(int("".join(map(str, r)), 2) if net.n else 0 for r in rows)
        assert vals in pts


@given(small_nets(max_sn=16, min_d=1))
def test_generator_rows_layout(net):
    c = to_generating_matrices(net)
    rows = generator_rows(net, net.n + 2)
    for i in range(net.s):
        for r in range(net.n):
            expect = sum(int(c[i, r, k]) << (net.d - 1 - k) for k in range(net.d))
            assert int(rows[i, r]) == expect
        assert not rows[i, net.n:].any()


@given(st.integers(1, 3), st.integers(1, 4))
def test_full_space(s, n):
    v = DigitalNet.full(s, n)
    assert v.d == s * n
    assert dual(v).dim == 0
