"""Test integrands with closed-form integrals.

Evaluators take an ``(N, s)`` array of points and return ``N`` values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable

import numpy as np

from .rng import make_rng

GENZ_KINDS = {
    1: "oscillatory",
    2: "product_peak",
    3: "corner_peak",
    4: "gaussian",
    5: "continuous",
    6: "discontinuous",
}
GENZ_BY_NAME = {v: k for k, v in GENZ_KINDS.items()}
#: default mean of a_1..a_s per family: the classical Genz difficulty levels
#: b = (9.0, 7.25, 1.85, 7.03, 20.4, 4.3) spread over 10 dimensions
DEFAULT_MEANS = {1: 0.9, 2: 0.725, 3: 0.185, 4: 0.703, 5: 2.04, 6: 0.43}


@dataclass(frozen=True)
class Integrand:
    dim: int
    func: Callable[[np.ndarray], np.ndarray]
    exact: float | None
    label: str

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.dim:
            raise ValueError(f"{self.label}: expected points of shape (N, {self.dim})")
        return self.func(x)


@dataclass(frozen=True)
class GenzParams:
    a: tuple[float, ...]
    u: tuple[float, ...]

    def __post_init__(self):
        if len(self.a) != len(self.u):
            raise ValueError("a and u must have equal length")
        if any(not ai > 0 for ai in self.a):
            raise ValueError("Genz parameters a_i must be positive")


def genz_params(s: int, kind: int | str = 1, mean_target: float | None = None,
                seed: int = 0) -> GenzParams:
    """Arithmetic-progression ``a`` with ``a_s = 2 a_1`` and mean ``mean_target``; uniform ``u``.

    ``mean_target=None`` takes the family default from :data:`DEFAULT_MEANS`.
    """
    kind = _kind(kind)
    if mean_target is None:
        mean_target = DEFAULT_MEANS[kind]
    if mean_target <= 0:
        raise ValueError("mean_target must be positive")
    if s == 1:
        a = (float(mean_target),)
    else:
        a1 = 2.0 * mean_target / 3.0
        h = a1 / (s - 1)
        a = tuple(a1 + i * h for i in range(s))
    u = tuple(float(x) for x in make_rng(seed, "genz-u", kind, s).random(s))
    return GenzParams(a, u)


def _kind(kind):
    if isinstance(kind, str):
        if kind not in GENZ_BY_NAME:
            raise ValueError(f"unknown Genz function {kind!r}")
        return GENZ_BY_NAME[kind]
    if kind not in GENZ_KINDS:
        raise ValueError(f"Genz kind must be 1..6, got {kind}")
    return kind


def _corner_peak_integral(a) -> float:
    s = len(a)
    terms = [1.0]
    for k in range(1, s + 1):
        for v in combinations(a, k):
            terms.append((-1) ** k / (1.0 + math.fsum(v)))
    return math.fsum(terms) / (math.factorial(s) * math.prod(a))


def genz(kind: int | str, params: GenzParams) -> Integrand:
    kind = _kind(kind)
    a = np.array(params.a)
    u = np.array(params.u)
    s = len(a)
    label = GENZ_KINDS[kind]

    if kind == 1:
        def f(x):
            return np.cos(2 * np.pi * u[0] + x @ a)
        z = np.exp(2j * np.pi * u[0])
        for ai in a:
            z *= (np.exp(1j * ai) - 1.0) / (1j * ai)
        exact = float(z.real)
    elif kind == 2:
        def f(x):
            return np.prod(1.0 / (a**2 + (x - u) ** 2), axis=1)
        exact = math.prod((math.atan((1 - ui) / ai) + math.atan(ui / ai)) / ai for ai, ui in zip(a, u))
    elif kind == 3:
        def f(x):
            return (1.0 + x @ a) ** (-(s + 1))
        exact = _corner_peak_integral(params.a)
    elif kind == 4:
        def f(x):
            return np.exp(-np.sum(a**2 * (x - u) ** 2, axis=1))
        exact = math.prod(math.sqrt(math.pi) / (2 * ai) * (math.erf(ai * (1 - ui)) + math.erf(ai * ui))
                          for ai, ui in zip(a, u))
    elif kind == 5:
        def f(x):
            return np.exp(-np.abs(x - u) @ a)
        exact = math.prod((2.0 - math.exp(-ai * ui) - math.exp(-ai * (1 - ui))) / ai for ai, ui in zip(a, u))
    else:
        # only the first two coordinates carry a cut (just the first when s == 1)
        ncut = min(s, 2)

        def f(x):
            inside = np.all(x[:, :ncut] <= u[:ncut], axis=1)
            return np.where(inside, np.exp(x @ a), 0.0)
        exact = math.prod(math.expm1(ai * (ui if i < ncut else 1.0)) / ai
                          for i, (ai, ui) in enumerate(zip(a, u)))
    return Integrand(s, f, exact, label)


HELLEKALEK_EXPONENTS = (1.1, 1.7, 2.3, 2.9)
HAMUKAZU_MULTIPLIERS = (5, 7, 11, 13)


def hellekalek(exponents=HELLEKALEK_EXPONENTS) -> Integrand:
    """``prod_i (x_i^{c_i} - 1/(1 + c_i))``; integral 0."""
    c = np.array(exponents, dtype=np.float64)

    def f(x):
        return np.prod(x**c - 1.0 / (1.0 + c), axis=1)
    return Integrand(len(c), f, 0.0, "hellekalek")


def hamukazu(multipliers=HAMUKAZU_MULTIPLIERS) -> Integrand:
    """``2^s prod_i {k_i x_i}`` with ``{y} = y - floor(y)``; integral 1."""
    k = np.array(multipliers, dtype=np.float64)

    def f(x):
        y = k * x
        return 2.0 ** len(k) * np.prod(y - np.floor(y), axis=1)
    return Integrand(len(k), f, 1.0, "hamukazu")


def exp_neg2sum(s: int) -> Integrand:
    """``exp(-2 sum x_i)``; integral ``((1 - e^{-2}) / 2)^s``."""
    def f(x):
        return np.exp(-2.0 * x.sum(axis=1))
    return Integrand(s, f, ((1.0 - math.exp(-2.0)) / 2.0) ** s, "exp_neg2sum")


def monomial(k: int) -> Integrand:
    """``x^k`` on ``[0, 1)``; integral ``1/(k+1)``."""
    def f(x):
        return x[:, 0] ** k
    return Integrand(1, f, 1.0 / (k + 1), f"x^{k}")


def constant(s: int, value: float = 1.0) -> Integrand:
    def f(x):
        return np.full(x.shape[0], value)
    return Integrand(s, f, value, "constant")


def by_label(label: str, s: int, seed: int = 0, mean_target: float | None = None) -> Integrand:
    """Integrand from a CLI label such as ``oscillatory``, ``x^2`` or ``hellekalek``."""
    if label in GENZ_BY_NAME:
        return genz(label, genz_params(s, label, mean_target, seed))
    if label == "hellekalek":
        return hellekalek()
    if label == "hamukazu":
        return hamukazu()
    if label == "exp_neg2sum":
        return exp_neg2sum(s)
    if label.startswith("x^") and label[2:].isdigit():
        return monomial(int(label[2:]))
    raise ValueError(f"unknown function label {label!r}")


def labels():
    return list(GENZ_BY_NAME) + ["hellekalek", "hamukazu", "exp_neg2sum", "x^K"]
