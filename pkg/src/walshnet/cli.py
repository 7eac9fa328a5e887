"""Command-line workbench.

Exit codes: 0 ok, 2 usage or input error, 3 resource-guard refusal.
Reals are printed with 17 significant digits; output depends only on the
flags, input files and seed.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from . import __version__
from .f2net import GuardError, RankError
from .ingest import FormatError, load_generating_matrices, load_net, save_net, sobol_net
from .quadrature import rmse_over_shifts
from .rng import DEFAULT_SEED
from .search import _record, convergence_experiment, grading_experiment, random_net, search_low_wafom
from .testfns import by_label
from .tvalue import strict_t_rank
from .wafom import WeightSpec, wafom, wafom_dual, wafom_exp_approx, wafom_rms

EXIT_USAGE = 2
EXIT_GUARD = 3

RECORD_FIELDS = ["method", "s", "n", "d", "N", "function", "rmse", "log2_rmse", "shifts", "seed"]
SLOPE_FIELDS = ["method", "function", "slope", "intercept", "r2"]


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def _precision(text):
    v = int(text)
    if not 1 <= v <= 64:
        raise argparse.ArgumentTypeError("n must be in 1..64")
    return v


def _weight(text):
    try:
        return WeightSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_d_range(text: str) -> list[int]:
    """``8:14`` (inclusive) or ``8,10,12``."""
    try:
        if ":" in text:
            lo, hi = (int(x) for x in text.split(":"))
            ds = list(range(lo, hi + 1))
        else:
            ds = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad d range {text!r}") from None
    if not ds:
        raise UsageError(f"empty d range {text!r}")
    if any(d < 0 for d in ds):
        raise UsageError("d must be >= 0")
    return ds


def _functions(text: str, s: int, seed: int, mean: float | None):
    out = []
    for lab in (x.strip() for x in text.split(",")):
        try:
            f = by_label(lab, s, seed, mean)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if f.dim != s:
            raise UsageError(f"function {lab!r} has dimension {f.dim}, net has s = {s}")
        out.append(f)
    return out


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load(path):
    return load_net(_read(path))


def _writer(args):
    buf = io.StringIO()
    delim = "\t" if args.format == "tsv" else ","
    return buf, csv.writer(buf, delimiter=delim, lineterminator="\n")


def _emit(text: str, path):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _rows_text(args, header, rows):
    buf, w = _writer(args)
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(x) for x in r])
    return buf.getvalue()


def cmd_wafom(args):
    net = _load(args.net)
    w = args.weight
    if args.dual:
        wf = wafom_dual(net, w)
        rms = wafom_dual(net, w, squared=True) ** 0.5
    else:
        wf = wafom(net, w)
        rms = wafom_rms(net, w)
    lines = [f"wafom {fmt(float(wf))}", f"wafom_rms {fmt(float(rms))}",
             f"exp_approx {fmt(float(wafom_exp_approx(net)))}"]
    if args.tvalue:
        lines.append(f"t_value {strict_t_rank(net).t}")
    print("\n".join(lines))


def cmd_tvalue(args):
    rep = strict_t_rank(_load(args.net))
    print(f"m {rep.m}")
    print(f"t {rep.t}")
    if rep.witness is not None:
        print("witness " + " ".join(map(str, rep.witness)))
    if rep.digit_depth_limited:
        print("digit_depth_limited 1")


def cmd_search(args):
    res = search_low_wafom(args.s, args.n, args.d, args.trials, args.keep_k, args.weight,
                           args.seed, with_t=True, workers=args.threads)
    rows = [(k + 1, c.index, c.wafom, c.t) for k, c in enumerate(res.candidates)]
    _emit(_rows_text(args, ["rank", "index", "wafom", "t"], rows), args.out)
    if args.best_net:
        Path(args.best_net).write_text(save_net(res.best.net))


def _record_rows(records):
    return [(r.method, r.s, r.n, r.d, r.N, r.function, r.rmse, r.log2_rmse, r.shifts, r.seed)
            for r in records]


def cmd_integrate(args):
    net = _load(args.net)
    funcs = _functions(args.functions, net.s, args.seed, args.genz_mean)
    rows = []
    for f in funcs:
        st = rmse_over_shifts(f, net, args.shifts, args.seed)
        rows.append(_record(args.label, net.n, net.s, net.d, f, st.rmse, args.shifts, args.seed))
    _emit(_rows_text(args, RECORD_FIELDS, _record_rows(rows)), args.out)


def cmd_convergence(args):
    ds = parse_d_range(args.d_range)
    funcs = _functions(args.functions, args.s, args.seed, args.genz_mean)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    nets = {}
    for spec in args.nets or []:
        label, sep, directory = spec.partition("=")
        if not sep:
            raise UsageError(f"--nets expects LABEL=DIR, got {spec!r}")
        nets[label] = {}
        for d in ds:
            p = Path(directory) / f"{d}.net"
            if p.exists():
                nets[label][d] = _load(p)
    if "sobol" in methods:
        if not args.direction_numbers:
            raise UsageError("method 'sobol' needs --direction-numbers")
        text = _read(args.direction_numbers)
        nets["sobol"] = {d: sobol_net(text, args.s, d) for d in ds}
    try:
        res = convergence_experiment(methods, args.s, args.n, ds, funcs, args.shifts, args.seed,
                                     args.trials, args.keep_k, args.weight, nets, args.threads)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(_rows_text(args, RECORD_FIELDS, _record_rows(res.records)), args.out)
    slopes = [(f.method, f.function, f.slope, f.intercept, f.r2) for f in res.slopes]
    text = _rows_text(args, SLOPE_FIELDS, slopes)
    if args.slopes_out:
        Path(args.slopes_out).write_text(text)
    elif not args.out:
        sys.stdout.write("\n" + text)


def cmd_grading(args):
    funcs = _functions(args.functions, args.s, args.seed, args.genz_mean)
    res = grading_experiment(args.s, args.n, args.d, args.count, funcs, args.seed,
                             args.weight, args.threads)
    header = ["category", "t", "size", "function", "mse_t", "mse_wafom", "wafom_min", "wafom_max"]
    rows = [(r.category, r.t, r.size, r.function, r.mse_t, r.mse_wafom, r.wafom_min, r.wafom_max)
            for r in res.rows]
    _emit(_rows_text(args, header, rows), args.out)


def cmd_sobol(args):
    net = sobol_net(_read(args.direction_numbers), args.s, args.m)
    _emit(save_net(net), args.out)


def cmd_convert(args):
    net = load_generating_matrices(_read(args.matrices), args.s, args.n, args.m)
    _emit(save_net(net), args.out)


def cmd_random(args):
    if args.d > args.s * args.n:
        raise UsageError("d exceeds s*n")
    _emit(save_net(random_net(args.s, args.n, args.d, args.seed)), args.out)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="walshnet", description="Digital-net workbench: WAFOM, t-value, QMC experiments.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, net_shape=False, weight=True, seed=True, out=True):
        if net_shape:
            sp.add_argument("--s", type=_positive, default=4, help="dimension (default 4)")
            sp.add_argument("--n", type=_precision, default=30, help="digits of precision (default 30)")
        if weight:
            sp.add_argument("--weight", type=_weight, default=WeightSpec(),
                            help="plain | alpha=K | delta=X (default plain)")
        if seed:
            sp.add_argument("--seed", type=_nonneg, default=DEFAULT_SEED,
                            help=f"master seed (default {DEFAULT_SEED})")
        if out:
            sp.add_argument("--out", help="output path (default stdout)")
            sp.add_argument("--format", choices=("csv", "tsv"), default="csv")

    def experiment(sp):
        sp.add_argument("--functions", required=True,
                        help="comma-separated labels: Genz names, hellekalek, hamukazu, exp_neg2sum, x^K")
        sp.add_argument("--genz-mean", type=float, default=None,
                        help="mean of the Genz a_i (default: per-family classical level)")
        sp.add_argument("--threads", type=_positive, default=1)

    sp = sub.add_parser("wafom", help="print WAFOM, WF r.m.s., exp approximation")
    sp.add_argument("net")
    sp.add_argument("--weight", type=_weight, default=WeightSpec(), help="plain | alpha=K | delta=X")
    sp.add_argument("--dual", action="store_true", help="sum over the perpendicular space")
    sp.add_argument("--tvalue", action="store_true", help="also print the strict t-value")
    sp.set_defaults(func=cmd_wafom)

    sp = sub.add_parser("tvalue", help="strict t-value with a witness composition")
    sp.add_argument("net")
    sp.set_defaults(func=cmd_tvalue)

    sp = sub.add_parser("search", help="random search for low-WAFOM nets")
    common(sp, net_shape=True)
    sp.add_argument("--d", type=_nonneg, required=True)
    sp.add_argument("--trials", type=_positive, default=1000)
    sp.add_argument("--keep-k", type=_positive, default=100)
    sp.add_argument("--best-net", help="write the best net to this NetFile")
    sp.add_argument("--threads", type=_positive, default=1)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("integrate", help="RMSE over random digital shifts for one net")
    sp.add_argument("net")
    common(sp, weight=False)
    experiment(sp)
    sp.add_argument("--shifts", type=_positive, default=32)
    sp.add_argument("--label", default="file", help="method label in the output")
    sp.set_defaults(func=cmd_integrate)

    sp = sub.add_parser("convergence", help="RMSE vs d for several methods, with slope fits")
    common(sp, net_shape=True)
    experiment(sp)
    sp.add_argument("--methods", default="wafom-best,wafom-kth,mc",
                    help="comma list of wafom-best, wafom-kth, mc, sobol, or --nets labels")
    sp.add_argument("--d-range", required=True, help="LO:HI inclusive or a comma list")
    sp.add_argument("--shifts", type=_positive, default=32)
    sp.add_argument("--trials", type=_positive, default=1000)
    sp.add_argument("--keep-k", type=_positive, default=100)
    sp.add_argument("--nets", action="append", metavar="LABEL=DIR", help="ingested nets DIR/<d>.net")
    sp.add_argument("--direction-numbers", help="Joe-Kuo file for method 'sobol'")
    sp.add_argument("--slopes-out", help="slopes CSV path")
    sp.set_defaults(func=cmd_convergence)

    sp = sub.add_parser("grading", help="grade random nets by t-value and by WAFOM")
    common(sp, net_shape=True)
    experiment(sp)
    sp.add_argument("--d", type=_nonneg, default=12)
    sp.add_argument("--count", type=_positive, default=10_000)
    sp.set_defaults(func=cmd_grading, n=32)

    sp = sub.add_parser("sobol", help="Sobol' net from a Joe-Kuo direction-number file")
    sp.add_argument("--direction-numbers", required=True)
    sp.add_argument("--s", type=_positive, required=True)
    sp.add_argument("--m", type=_nonneg, required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_sobol)

    sp = sub.add_parser("convert", help="generating-matrix text file to NetFile")
    sp.add_argument("--matrices", required=True)
    sp.add_argument("--s", type=_positive, required=True)
    sp.add_argument("--n", type=_precision, required=True)
    sp.add_argument("--m", type=_nonneg, required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_convert)

    sp = sub.add_parser("random", help="write one random net")
    sp.add_argument("--s", type=_positive, default=4)
    sp.add_argument("--n", type=_precision, default=30)
    sp.add_argument("--d", type=_nonneg, required=True)
    sp.add_argument("--seed", type=_nonneg, default=DEFAULT_SEED)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_random)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except GuardError as exc:
        print(f"walshnet: refused: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (UsageError, FormatError, RankError, ValueError) as exc:
        print(f"walshnet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
