import itertools

import numpy as np
import pytest

from walshnet.testfns import (
    DEFAULT_MEANS,
    GENZ_KINDS,
    GenzParams,
    by_label,
    exp_neg2sum,
    genz,
    genz_params,
    hamukazu,
    hellekalek,
    labels,
    monomial,
)


def _gauss_grid(breaks_per_dim, order=24):
    """Tensor Gauss-Legendre rule on [0, 1]^s, split at the given breakpoints."""
    x0, w0 = np.polynomial.legendre.leggauss(order)
    axes = []
    for breaks in breaks_per_dim:
        edges = [0.0] + sorted(b for b in breaks if 0 < b < 1) + [1.0]
        xs, ws = [], []
        for lo, hi in zip(edges[:-1], edges[1:]):
            xs.append(lo + (hi - lo) * (x0 + 1) / 2)
            ws.append(w0 * (hi - lo) / 2)
        axes.append((np.concatenate(xs), np.concatenate(ws)))
    pts = np.array(list(itertools.product(*[a[0] for a in axes])))
    wts = np.prod(np.array(list(itertools.product(*[a[1] for a in axes]))), axis=1)
    return pts, wts


@pytest.mark.parametrize("kind", sorted(GENZ_KINDS))
@pytest.mark.parametrize("s", [1, 2, 3])
@pytest.mark.parametrize("mean", [None, 3.0])
def test_genz_closed_forms(kind, s, mean):
    p = genz_params(s, kind, mean, seed=17)
    f = genz(kind, p)
    breaks = [[u] for u in p.u]
    pts, wts = _gauss_grid(breaks, order=40 if s < 3 else 24)
    approx = float(wts @ f(pts))
    assert f.exact == pytest.approx(approx, rel=1e-9, abs=1e-12)


def test_genz_params_shape():
    p = genz_params(4, "oscillatory", 3.0, seed=1)
    assert len(p.a) == len(p.u) == 4
    assert np.mean(p.a) == pytest.approx(3.0)
    assert p.a[-1] == pytest.approx(2 * p.a[0])
    assert all(0 <= u < 1 for u in p.u)
    assert genz_params(4, 1, seed=1) == genz_params(4, 1, seed=1)
    assert np.mean(genz_params(4, 5).a) == pytest.approx(DEFAULT_MEANS[5])


def test_genz_validation():
    with pytest.raises(ValueError):
        GenzParams((1.0, -1.0), (0.5, 0.5))
    with pytest.raises(ValueError):
        GenzParams((1.0,), (0.5, 0.5))
    with pytest.raises(ValueError):
        genz_params(2, 7)
    with pytest.raises(ValueError):
        genz_params(2, "banana")
    with pytest.raises(ValueError):
        genz_params(2, 1, mean_target=0.0)


def test_shape_check():
    f = exp_neg2sum(3)
    with pytest.raises(ValueError):
        f(np.zeros((4, 2)))


@pytest.mark.parametrize("f", [hellekalek(), hamukazu()], ids=lambda f: f.label)
def test_hellekalek_hamukazu_integrals(f):
    # kinks of the fractional parts sit at multiples of 1/k
    if f.label == "hamukazu":
        breaks = [[j / k for j in range(1, k)] for k in (5, 7, 11, 13)]
        order = 4
    else:
        breaks = [[]] * 4
        order = 30
    pts, wts = _gauss_grid(breaks, order)
    assert float(wts @ f(pts)) == pytest.approx(f.exact, abs=1e-10)


def test_monomial_and_labels():
    assert monomial(3).exact == 0.25
    assert by_label("x^2", 1).exact == pytest.approx(1 / 3)
    assert by_label("continuous", 4, seed=2).dim == 4
    assert "hellekalek" in labels()
    with pytest.raises(ValueError):
        by_label("nope", 2)
