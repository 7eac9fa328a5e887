"""Random search for low-WAFOM nets and the experiment drivers.

Every candidate net is generated from its own sub-seed
``derive_seed(seed, "candidate", s, n, d, index)``, so results do not depend
on evaluation order or on the number of worker threads.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .f2net import BitMatrix, DigitalNet, _echelon, enumerate_points
from .quadrature import mc_rmse, qmc_estimate, rmse_over_shifts
from .rng import derive_seed, make_rng, random_rows
from .tvalue import strict_t_rank
from .wafom import PLAIN, WeightSpec, wafom_fast

#: floor applied to an RMSE before taking log2
RMSE_FLOOR = 1e-300


def random_net(s: int, n: int, d: int, seed: int) -> DigitalNet:
    """Net with ``d`` basis matrices drawn uniformly from ``V``, redrawing dependent ones."""
    if d > s * n:
        raise ValueError(f"d = {d} exceeds s*n = {s * n}")
    rng = make_rng(seed, "net")
    basis: list[BitMatrix] = []
    piv: dict[int, int] = {}
    while len(basis) < d:
        rows = random_rows(rng, 1, s, n)[0]
        b = BitMatrix(s, n, tuple(int(x) for x in rows))
        v = b.flat()
        for p in sorted(piv, reverse=True):
            if (v >> p) & 1:
                v ^= piv[p]
        if v == 0:
            continue
        piv[v.bit_length() - 1] = v
        basis.append(b)
    return DigitalNet(s, n, tuple(basis))


def candidate_seed(seed: int, s: int, n: int, d: int, index: int) -> int:
    return derive_seed(seed, "candidate", s, n, d, index)


@dataclass(frozen=True)
class Candidate:
    index: int
    wafom: float
    seed: int
    net: DigitalNet = field(repr=False)
    t: int | None = None


@dataclass(frozen=True)
class SearchResult:
    s: int
    n: int
    d: int
    candidates: tuple[Candidate, ...]
    wafoms: np.ndarray = field(repr=False)
    trials: int
    seed: int
    weight: WeightSpec
    elapsed: float

    @property
    def best(self) -> Candidate:
        return self.candidates[0]

    @property
    def kth_best(self) -> Candidate:
        return self.candidates[-1]

    @property
    def median(self) -> float:
        return float(np.median(self.wafoms))


def _map(fn: Callable, items: Iterable, workers: int):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def search_low_wafom(s: int, n: int, d: int, trials: int = 1000, keep_k: int = 100,
                     weight: WeightSpec = PLAIN, seed: int = 0, with_t: bool = False,
                     workers: int = 1) -> SearchResult:
    """Evaluate ``trials`` random nets and keep the ``keep_k`` lowest WAFOM.

    Ties are broken by candidate index.  ``best`` and ``kth_best`` are the
    first and ``keep_k``-th entries of the ranking.
    """
    if not 1 <= keep_k <= trials:
        raise ValueError("need trials >= keep_k >= 1")
    start = time.perf_counter()

    def evaluate(i):
        return wafom_fast(random_net(s, n, d, candidate_seed(seed, s, n, d, i)), weight)

    wafoms = np.array(_map(evaluate, range(trials), workers), dtype=np.float64)
    order = np.lexsort((np.arange(trials), wafoms))[:keep_k]
    cands = []
    for i in order:
        cs = candidate_seed(seed, s, n, d, int(i))
        net = random_net(s, n, d, cs)
        t = strict_t_rank(net).t if with_t else None
        cands.append(Candidate(int(i), float(wafoms[i]), cs, net, t))
    return SearchResult(s, n, d, tuple(cands), wafoms, trials, seed, weight,
                        time.perf_counter() - start)


@dataclass(frozen=True)
class ExperimentRecord:
    method: str
    s: int
    n: int
    d: int
    N: int
    function: str
    rmse: float
    log2_rmse: float
    shifts: int
    seed: int


@dataclass(frozen=True)
class SlopeFit:
    method: str
    function: str
    slope: float
    intercept: float
    r2: float


def fit_slope(ds: Sequence[float], rmses: Sequence[float]) -> tuple[float, float, float]:
    """Least-squares line through ``(d, log2 rmse)``; returns slope, intercept, r^2."""
    x = np.asarray(ds, dtype=np.float64)
    y = np.log2(np.maximum(np.asarray(rmses, dtype=np.float64), RMSE_FLOOR))
    if x.size < 2:
        return float("nan"), float(y[0]) if y.size else float("nan"), float("nan")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float((resid**2).sum()) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


@dataclass(frozen=True)
class ConvergenceResult:
    records: list[ExperimentRecord]
    slopes: list[SlopeFit]


SEARCH_METHODS = ("wafom-best", "wafom-kth")


def _record(method, net_n, s, d, f, rmse, shifts, seed):
    return ExperimentRecord(method, s, net_n, d, 1 << d, f.label, rmse,
                            math.log2(max(rmse, RMSE_FLOOR)), shifts, seed)


def convergence_experiment(methods: Sequence[str], s: int, n: int, d_range: Sequence[int],
                           functions: Sequence, shifts: int = 32, seed: int = 0,
                           trials: int = 1000, keep_k: int = 100, weight: WeightSpec = PLAIN,
                           nets: Mapping[str, Mapping[int, DigitalNet]] | None = None,
                           workers: int = 1) -> ConvergenceResult:
    """RMSE over random digital shifts per (method, d, function), plus slope fits.

    ``methods`` may contain ``"wafom-best"``/``"wafom-kth"`` (random search,
    best and ``keep_k``-th best), ``"mc"`` (Monte Carlo with ``shifts``
    independent replicates) and any key of ``nets`` (ingested nets by ``d``).
    """
    d_range = list(d_range)
    if not d_range:
        raise ValueError("empty d range")
    nets = nets or {}
    for m in methods:
        if m not in SEARCH_METHODS and m != "mc" and m not in nets:
            raise ValueError(f"no nets for method {m!r}")
        if m in nets:
            missing = [d for d in d_range if d not in nets[m]]
            if missing:
                raise ValueError(f"method {m!r} has no net for d = {missing}")
    records: list[ExperimentRecord] = []
    for d in d_range:
        chosen: dict[str, DigitalNet] = {}
        if any(m in SEARCH_METHODS for m in methods):
            res = search_low_wafom(s, n, d, trials, keep_k, weight, seed, workers=workers)
            chosen["wafom-best"] = res.best.net
            chosen["wafom-kth"] = res.kth_best.net
        for m in methods:
            if m in nets:
                chosen[m] = nets[m][d]
        for m in methods:
            for f in functions:
                if m == "mc":
                    sd = derive_seed(seed, f"mc/{f.label}", d)
                    stat = mc_rmse(f, 1 << d, shifts, sd)
                    records.append(_record(m, 0, s, d, f, stat.rmse, shifts, sd))
                    continue
                net = chosen[m]
                sd = derive_seed(seed, f"shifts/{f.label}", d)
                stat = rmse_over_shifts(f, net, shifts, sd)
                records.append(_record(m, net.n, s, d, f, stat.rmse, shifts, sd))
    slopes = []
    for m in methods:
        for f in functions:
            rs = [r for r in records if r.method == m and r.function == f.label]
            slope, icpt, r2 = fit_slope([r.d for r in rs], [r.rmse for r in rs])
            slopes.append(SlopeFit(m, f.label, slope, icpt, r2))
    return ConvergenceResult(records, slopes)


@dataclass(frozen=True)
class GradingRow:
    category: int
    t: int
    size: int
    function: str
    mse_t: float
    mse_wafom: float
    wafom_min: float
    wafom_max: float


@dataclass(frozen=True)
class GradingResult:
    t_frequency: dict[int, int]
    rows: list[GradingRow]
    t_values: np.ndarray = field(repr=False)
    wafoms: np.ndarray = field(repr=False)
    errors: dict[str, np.ndarray] = field(repr=False)
    t_classes: list[np.ndarray] = field(repr=False)
    wafom_classes: list[np.ndarray] = field(repr=False)

    def row(self, function: str, category: int = 0) -> GradingRow:
        return next(r for r in self.rows if r.function == function and r.category == category)


def grading_experiment(s: int = 4, n: int = 32, d: int = 12, count: int = 10_000,
                       functions: Sequence = (), seed: int = 0, weight: WeightSpec = PLAIN,
                       workers: int = 1) -> GradingResult:
    """Grade ``count`` random nets by strict t-value and by WAFOM.

    Nets sorted by WAFOM are cut into classes with the same sizes as the
    t-value classes (smallest t first); each class reports the mean square
    QMC error of every function (unshifted midpoints).
    """
    labels = [f.label for f in functions]

    def evaluate(i):
        net = random_net(s, n, d, derive_seed(seed, "grading", s, n, d, i))
        pts = enumerate_points(net)
        errs = [qmc_estimate(f, net, points=pts) - f.exact for f in functions]
        return wafom_fast(net, weight), strict_t_rank(net).t, errs

    out = _map(evaluate, range(count), workers)
    wafoms = np.array([o[0] for o in out])
    tvals = np.array([o[1] for o in out], dtype=np.int64)
    errors = {lab: np.array([o[2][k] for o in out]) for k, lab in enumerate(labels)}

    ts, freq = np.unique(tvals, return_counts=True)
    idx = np.arange(count)
    t_classes = [idx[tvals == t] for t in ts]
    by_wafom = np.lexsort((idx, wafoms))
    cuts = np.cumsum(freq)[:-1]
    w_classes = np.split(by_wafom, cuts)
    rows = []
    for lab in labels:
        e2 = errors[lab] ** 2
        for c, (t, tc, wc) in enumerate(zip(ts, t_classes, w_classes)):
            rows.append(GradingRow(c, int(t), int(tc.size), lab, float(e2[tc].mean()),
                                   float(e2[wc].mean()), float(wafoms[wc].min()),
                                   float(wafoms[wc].max())))
    return GradingResult({int(t): int(f) for t, f in zip(ts, freq)}, rows, tvals, wafoms,
                         errors, t_classes, w_classes)
