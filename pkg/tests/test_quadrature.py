import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from walshnet.f2net import BitMatrix, DigitalNet, enumerate_points
from walshnet.quadrature import (
    digital_shift,
    mc_estimate,
    mc_rmse,
    midpoint,
    midpoints,
    qmc_error,
    qmc_estimate,
    rmse_over_shifts,
    tree_sum,
)
from walshnet.search import random_net
from walshnet.testfns import constant, exp_neg2sum, hellekalek, monomial

from conftest import small_nets


def test_midpoint_mapping():
    np.testing.assert_array_equal(midpoint(BitMatrix.from_strings(["100", "011"])), [0.5625, 0.4375])
    x = midpoints(np.arange(8, dtype=np.uint64)[:, None], 3)[:, 0]
    np.testing.assert_array_equal(x, (2 * np.arange(8) + 1) / 16)


def test_midpoints_deep_rows_stay_below_one():
    top = np.array([[2**64 - 1, 0]], dtype=np.uint64)
    x = midpoints(top, 64)
    assert 0 < x[0, 0] < 1 and x[0, 1] > 0


def test_tree_sum():
    assert tree_sum(np.array([])) == 0.0
    assert tree_sum(np.arange(7.0)) == 21.0
    # pairs (a+b)+(c+d), so the 1.0s cancel against their large partners
    assert tree_sum(np.array([1e16, 1.0, -1e16, 1.0])) == 0.0


@pytest.mark.parametrize("k", [1, 2, 3])
def test_full_space_gives_discretization_error(k):
    # over V the estimate is the n-digit midpoint rule
    v = DigitalNet.full(1, 3)
    grid = (2 * np.arange(8) + 1) / 16
    assert qmc_estimate(monomial(k), v) == pytest.approx(float(np.mean(grid**k)), abs=1e-16)


def test_signed_error_convention():
    p = DigitalNet.perp([BitMatrix.from_strings(["001"])])
    assert qmc_error(monomial(1), p).signed_error == -0.0625


@given(small_nets(max_sn=12, min_d=1), st.integers(0, 2**32 - 1))
def test_shift_by_net_element_is_bit_identical(net, seed):
    f = exp_neg2sum(net.s)
    pts = enumerate_points(net)
    elem = pts[seed % net.size]
    assert qmc_estimate(f, net, shift=elem) == qmc_estimate(f, net)


@given(small_nets(max_sn=10), st.sampled_from([1, 2, 3]))
def test_all_shifts_average_to_grid_integral(net, k):
    # averaging over every shift in V is the full n-digit midpoint rule
    f = exp_neg2sum(net.s) if net.s > 1 else monomial(k)
    s, n = net.s, net.n
    shifts = [np.array([(v >> (n * (s - 1 - i))) & ((1 << n) - 1) for i in range(s)], dtype=np.uint64)
              for v in range(1 << (s * n))]
    avg = math.fsum(qmc_estimate(f, net, shift=sh) for sh in shifts) / len(shifts)
    grid = qmc_estimate(f, DigitalNet.full(s, n))
    assert avg == pytest.approx(grid, abs=1e-14)


def test_digital_shift_points():
    net = DigitalNet.perp([BitMatrix.from_strings(["111"])])
    sigma = BitMatrix.from_strings(["001"])
    got = sorted(int(x) for x in digital_shift(net, sigma)[:, 0])
    assert got == [1, 2, 4, 7]
    with pytest.raises(ValueError):
        digital_shift(net, BitMatrix.zeros(2, 3))


def test_exhaustive_rmse_and_guard():
    net = random_net(1, 4, 2, 5)
    stat = rmse_over_shifts(monomial(2), net, exhaustive=True)
    assert stat.shift_count == 16
    assert stat.rmse >= abs(stat.signed_error)
    with pytest.raises(ValueError):
        rmse_over_shifts(monomial(2), random_net(3, 7, 2, 0), exhaustive=True)


def test_rmse_over_shifts_reproducible():
    net = random_net(4, 30, 8, 1)
    f = hellekalek()
    a = rmse_over_shifts(f, net, 8, seed=3)
    b = rmse_over_shifts(f, net, 8, seed=3)
    assert a == b
    assert a.sample_count == 256 and a.shift_count == 8 and not a.reference_estimated


def test_mc_reference_flag():
    net = random_net(2, 10, 6, 2)
    stat = rmse_over_shifts(exp_neg2sum(2), net, 4, seed=1, reference="mc")
    assert stat.reference_estimated


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        qmc_estimate(exp_neg2sum(3), random_net(2, 5, 3, 0))


def test_constant_is_exact():
    net = random_net(3, 10, 7, 9)
    assert qmc_estimate(constant(3, 2.5), net) == 2.5


def test_mc_rmse_scales_like_inverse_sqrt():
    f = exp_neg2sum(2)
    small = mc_rmse(f, 256, 64, seed=1).rmse
    large = mc_rmse(f, 256 * 64, 64, seed=1).rmse
    assert 4.0 < small / large < 16.0
    assert mc_estimate(f, 10, seed=1) == mc_estimate(f, 10, seed=1)
