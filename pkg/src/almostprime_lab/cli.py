"""Command-line entry point: ``almostprime-lab <command> [options]``.

Exit status is 0 on success, 1 when a checked inequality fails (or a
numerical refinement does not converge) and 2 on usage errors.

Option defaults may be overridden by environment variables named
``APL_<OPTION>`` (e.g. ``APL_X=1000000``, ``APL_FORMAT=json``); explicit
flags win over the environment.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Callable, Dict, List, Optional

import numpy as np
from threadpoolctl import threadpool_limits

from . import audits
from .buchstab import build_omega_table
from .core_arith import build_prime_table
from .dirichlet import DirichletPolynomial, hb_sparse_rhs, large_value_measure, twisted_moment_rhs
from .errors import (ConvergenceError, InvalidArgumentError, OutOfDomainError,
                     ResourceLimitError)
from .exponents import (Q, cgen, fraction_str, headline_constants_check, typeII_feasible)
from .minorant import (MinorantParams, WindowSums, count_E2_intervals, count_E3_all_intervals,
                       minorant_scan, variance_experiment, x_grid)
from .reports import FORMATS, Report, emit_report
from .sieve_integrals import density_margin, integral_I4_bound

LARGE_VALUE_CEILING = 10.0
NOT_PARAMS = {"command", "format", "output", "threads", "handler", "json", "csv"}


class UsageError(Exception):
    pass


def _count(name: str) -> Callable[[str], int]:
    """Parser for positive integers that also accepts forms like ``1e6``."""

    def parse(text: str) -> int:
        try:
            v = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a positive integer, got {text!r}")
        if not math.isfinite(v) or v != int(v) or v < 1:
            raise argparse.ArgumentTypeError(f"{name} must be a positive integer, got {text!r}")
        return int(v)

    parse.__name__ = name
    return parse


def _real(name: str) -> Callable[[str], float]:
    def parse(text: str) -> float:
        try:
            v = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a real number, got {text!r}")
        if not math.isfinite(v):
            raise argparse.ArgumentTypeError(f"{name} must be finite, got {text!r}")
        return v

    parse.__name__ = name
    return parse


def _opt(p: argparse.ArgumentParser, flag: str, type, default, help: str, **kw):
    """Add ``--flag`` whose default can come from ``APL_<DEST>``."""
    dest = kw.pop("dest", flag.lstrip("-").replace("-", "_"))
    env = os.environ.get("APL_" + dest.upper())
    if env is not None:
        try:
            default = type(env)
        except (argparse.ArgumentTypeError, ValueError) as exc:
            raise UsageError(f"APL_{dest.upper()}: {exc}")
    p.add_argument(flag, type=type, default=default, dest=dest, help=help, **kw)


def _common(p: argparse.ArgumentParser, seed: bool = False):
    fmt = os.environ.get("APL_FORMAT", "human")
    if fmt not in FORMATS:
        raise UsageError(f"APL_FORMAT must be one of {FORMATS}, got {fmt!r}")
    p.add_argument("--format", choices=FORMATS, default=fmt, help="report format")
    p.add_argument("--json", action="store_const", const="json", dest="format",
                   help="shorthand for --format json")
    p.add_argument("--csv", action="store_const", const="csv", dest="format",
                   help="shorthand for --format csv")
    p.add_argument("--output", default=os.environ.get("APL_OUTPUT"),
                   help="write the report here instead of stdout")
    _opt(p, "--threads", _count("threads"), 1, "cap on worker threads")
    if seed:
        _opt(p, "--seed", int, audits.DEFAULT_SEED, "seed of the random instance family")


def _minorant_opts(p, X: int, sample: Optional[int] = None):
    _opt(p, "--X", _count("X"), X, "ambient scale X")
    _opt(p, "--eps", _real("eps"), 0.01, "epsilon in the minorant constraints")
    _opt(p, "--a", _real("a"), 1.1, "P1 = (log X)^a")
    _opt(p, "--c", _real("c"), 2.1, "interval length (log X)^c")
    p.add_argument("--exploratory", action="store_true",
                   help="allow a outside [c-1-1/10000, c-1]")
    if sample is not None:
        _opt(p, "--sample", _count("sample"), sample, "number of sample points")


def _params(args) -> MinorantParams:
    return MinorantParams(args.X, args.eps, args.c, args.a, args.exploratory)


def _param_dict(args) -> Dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in NOT_PARAMS}


# handlers ------------------------------------------------------------------

def cmd_omega(args) -> Report:
    table = build_omega_table(args.u_max, args.step)
    if args.points:
        us = [float(u) for u in args.points.split(",")]
    else:
        us = list(np.round(np.arange(1.0, args.u_max + 1e-9, args.spacing), 12))
    rows = [(u, table(u)) for u in us]
    return Report("omega", "Buchstab omega(u)", _param_dict(args),
                  results={"points": len(rows), "per_unit": table.per_unit},
                  columns=("u", "omega"), rows=rows)


def cmd_integrals(args) -> Report:
    m = density_margin(args.eps, args.tol)
    results = {
        "I2": m.I2.value, "I2_err": m.I2.error_estimate, "I2_cells": m.I2.cells,
        "I2_zero_measure": m.I2.zero_measure,
        "I4_direct": m.I4.value, "I4_err": m.I4.error_estimate, "I4_cells": m.I4.cells,
        "I4_bound": integral_I4_bound(),
        "margin": m.margin, "margin_err": m.error_estimate,
    }
    passed = None
    if args.eps == 0:
        passed = (m.certified and m.I2.value + m.I2.error_estimate <= 0.99
                  and m.I4.value <= float(integral_I4_bound()) + m.I4.error_estimate)
    return Report("integrals", "deficiency integrals I2, I4 and margin 1 - I2 - I4",
                  _param_dict(args), results=results, passed=passed)


def cmd_minorant_scan(args) -> Report:
    params = _params(args)
    table = build_prime_table(params.n_hi)
    r = minorant_scan(params, table)
    results = {
        "z": params.z, "n_lo": r.n_lo, "n_hi": r.n_hi,
        "upper_violations": r.upper_violations, "size_violations": r.size_violations,
        "prime_mismatches": r.prime_mismatches, "primes_checked": r.primes_checked,
        "histogram": r.histogram,
    }
    ok = r.upper_violations == 0 and r.size_violations == 0 and r.prime_mismatches == 0
    return Report("minorant-scan", "rho-(n) <= 1_P(n) and the size bound on [2 sqrt X, 3X]",
                  _param_dict(args), results=results, passed=ok)


def cmd_window_sums(args) -> Report:
    params = _params(args)
    table = build_prime_table(params.n_hi)
    sums = WindowSums.build(params, table)
    xs = x_grid(params.X, args.sample)
    vals = sums.windows(xs, params.h1)
    target = params.h1 / (200.0 * math.log(params.P1) * params.log_X)
    rows = [(float(x), int(v)) for x, v in zip(xs, vals)]
    return Report("window-sums", "long-window minorant sum against h1/(200 log P1 log X)",
                  _param_dict(args),
                  results={"h1": params.h1, "P1": params.P1, "target": target,
                           "min_sum": int(vals.min()), "max_sum": int(vals.max()),
                           "below_target": int(np.count_nonzero(vals < target))},
                  columns=("x", "sum"), rows=rows, passed=bool(np.all(vals >= target)))


def cmd_variance(args) -> Report:
    params = _params(args)
    table = build_prime_table(params.n_hi)
    v = variance_experiment(params, table, args.sample)
    return Report("variance", "mean square of short minus long window averages",
                  _param_dict(args), results=v)


def cmd_count_e2(args) -> Report:
    params = _params(args)
    X = params.X
    top = int((2 * X + math.log(2 * X) ** params.c) / math.log(X) ** params.a) + 2
    table = build_prime_table(top)
    r = count_E2_intervals(X, params, table, args.sample)
    ok = r.hit_fraction >= 0.9 and 1 / 3 <= r.mean_ratio <= 3
    return Report("count-e2", "E2 numbers p1 p2 in (x, x + (log x)^c], p1 in (P1, 2P1]",
                  _param_dict(args),
                  results={"failures": r.failures, "hit_fraction": r.hit_fraction,
                           "mean_count": r.mean_count, "predicted": r.predicted,
                           "mean_ratio": r.mean_ratio},
                  columns=("x", "count", "prediction"),
                  rows=list(zip(r.x_grid, r.counts, r.predictions)), passed=ok)


def cmd_count_e3(args) -> Report:
    x_hi = args.x_hi
    end = x_hi + math.sqrt(x_hi) * math.log(x_hi) ** args.window_exponent
    table = build_prime_table(math.isqrt(int(end) + 1) + 1)
    r = count_E3_all_intervals(args.x_lo, x_hi, args.grid, table, args.window_exponent)
    return Report("count-e3", "E3 numbers in (x, x + sqrt(x) (log x)^1.55]",
                  _param_dict(args),
                  results={"failures": r.failures, "min_count": int(r.counts.min()),
                           "mean_count": r.mean_count, "predicted": r.predicted,
                           "mean_ratio": r.mean_ratio},
                  columns=("x", "count", "prediction"),
                  rows=list(zip(r.x_grid, r.counts, r.predictions)), passed=r.failures == 0)


def _audit_results(results: List[audits.AuditResult]) -> Dict:
    return {r.name: {"max_ratio": r.max_ratio, "ceiling": r.ceiling, "instances": len(r.ratios),
                     "passed": r.passed} for r in results}


def cmd_mvt(args) -> Report:
    rs = [audits.audit_exact_vs_sampled(args.seed, args.instances),
          audits.audit_mvt_defect(args.seed, args.instances),
          audits.audit_improved_mvt(args.seed, max(1, args.instances // 2))]
    return Report("mvt", "mean value theorem: exact vs sampled, O(N) defect, improved bound",
                  _param_dict(args), seed=args.seed, results=_audit_results(rs),
                  passed=all(r.passed for r in rs))


def cmd_hb_check(args) -> Report:
    if args.card_M is not None:
        val = hb_sparse_rhs(args.card_M, args.M, args.N, args.T, args.eta, args.amax)
        return Report("hb-check", "sparse mean value bound (implied constant 1)",
                      _param_dict(args), results={"rhs": val})
    r = audits.audit_hb_sparse(args.seed, args.instances)
    return Report("hb-check", "sampled |M A|^2 moment over the sparse mean value bound",
                  _param_dict(args), seed=args.seed, results=_audit_results([r]),
                  passed=r.passed)


def cmd_large_values(args) -> Report:
    poly = DirichletPolynomial.dyadic(args.N)
    r = large_value_measure(poly, args.T, args.sigma)
    return Report("large-values", "measure of t in [-T, T] with |N(1+it)| > N^-sigma",
                  _param_dict(args), results=r, passed=r.ratio <= LARGE_VALUE_CEILING)


def cmd_twisted_moment(args) -> Report:
    if args.which is not None:
        val = twisted_moment_rhs(args.which, args.N, args.A, args.T, args.eps, args.norm)
        return Report("twisted-moment", "twisted fourth moment bound (implied constant 1)",
                      _param_dict(args), results={"rhs": val})
    r = audits.audit_twisted_moment(args.seed, args.instances, args.T)
    return Report("twisted-moment", "sampled |N|^4 |A|^2 moment over the twisted bounds",
                  _param_dict(args), seed=args.seed, results=_audit_results([r]),
                  passed=r.passed)


def cmd_exponents(args) -> Report:
    if args.cgen:
        c = cgen(*(Q(x) for x in args.cgen))
        return Report("exponents", "interval exponent c = 1 + 1/(1 - theta(1 - 2 sigma) - eps)",
                      _param_dict(args), results={"c": c, "c_float": float(c)})
    if args.typeii:
        v = typeII_feasible(*(Q(x) for x in args.typeii))
        return Report("exponents", "type II feasibility", _param_dict(args),
                      results=v, passed=v.feasible)
    checks = headline_constants_check()
    rows = [(c.name, "pass" if c.passed else "fail", c.detail) for c in checks]
    return Report("exponents", "headline exponent constants", _param_dict(args),
                  results={"checks": len(checks), "passed": sum(c.passed for c in checks)},
                  columns=("check", "status", "detail"), rows=rows,
                  passed=all(c.passed for c in checks))


# parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="almostprime-lab",
                                     description="Almost-prime and minorant experiments.")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("omega", help="tabulate Buchstab's function")
    _opt(p, "--u-max", _real("u-max"), 20.0, "upper end of the table")
    _opt(p, "--step", _real("step"), 1e-4, "table grid step")
    _opt(p, "--spacing", _real("spacing"), 0.5, "output spacing when --points is absent")
    p.add_argument("--points", default=None, help="comma-separated u values")
    _common(p)
    p.set_defaults(handler=cmd_omega)

    p = sub.add_parser("integrals", help="I2, I4 and the density margin")
    _opt(p, "--eps", _real("eps"), 0.0, "epsilon in [0, 0.01]")
    _opt(p, "--tol", _real("tol"), 1e-4, "absolute tolerance for I2")
    _common(p)
    p.set_defaults(handler=cmd_integrals)

    p = sub.add_parser("minorant-scan", help="check the minorant on [2 sqrt X, 3X]")
    _minorant_opts(p, 10 ** 6)
    _common(p)
    p.set_defaults(handler=cmd_minorant_scan)

    p = sub.add_parser("window-sums", help="long-window minorant sums on a grid of x")
    _minorant_opts(p, 10 ** 6, sample=100)
    _common(p)
    p.set_defaults(handler=cmd_window_sums)

    p = sub.add_parser("variance", help="short vs long window mean square")
    _minorant_opts(p, 10 ** 6, sample=1000)
    _common(p)
    p.set_defaults(handler=cmd_variance)

    p = sub.add_parser("count-e2", help="E2 numbers in (x, x + (log x)^c]")
    _minorant_opts(p, 10 ** 8, sample=10 ** 4)
    _common(p)
    p.set_defaults(handler=cmd_count_e2)

    p = sub.add_parser("count-e3", help="E3 numbers in (x, x + sqrt(x) (log x)^1.55]")
    _opt(p, "--x-lo", _count("x-lo"), 10 ** 6, "lower end of the grid")
    _opt(p, "--x-hi", _count("x-hi"), 10 ** 8, "upper end of the grid")
    _opt(p, "--grid", _count("grid"), 1000, "number of geometric grid points")
    _opt(p, "--window-exponent", _real("window-exponent"), 1.55, "exponent of log x")
    _common(p)
    p.set_defaults(handler=cmd_count_e3)

    p = sub.add_parser("mvt", help="mean value theorem audits")
    _opt(p, "--instances", _count("instances"), 100, "family size")
    _common(p, seed=True)
    p.set_defaults(handler=cmd_mvt)

    p = sub.add_parser("hb-check", help="sparse mean value bound: formula or audit")
    _opt(p, "--card-M", _count("card-M"), None, "evaluate the bound for this |M|", dest="card_M")
    _opt(p, "--M", _real("M"), 100.0, "lower end of the sparse support")
    _opt(p, "--N", _real("N"), 50.0, "length of the second polynomial")
    _opt(p, "--T", _real("T"), 1000.0, "height")
    _opt(p, "--eta", _real("eta"), 0.1, "eta")
    _opt(p, "--amax", _real("amax"), 1.0, "max |a_n|")
    _opt(p, "--instances", _count("instances"), 20, "family size for the audit")
    _common(p, seed=True)
    p.set_defaults(handler=cmd_hb_check)

    p = sub.add_parser("large-values", help="large values of a dyadic one-line polynomial")
    _opt(p, "--N", _count("N"), 1000, "polynomial is sum over N < n <= 2N")
    _opt(p, "--T", _real("T"), 1e5, "height")
    _opt(p, "--sigma", _real("sigma"), 0.2, "threshold N^-sigma")
    _common(p)
    p.set_defaults(handler=cmd_large_values)

    p = sub.add_parser("twisted-moment", help="twisted fourth moment: formula or audit")
    p.add_argument("--which", choices=("watt", "deshouillers-iwaniec"), default=None,
                   help="evaluate this bound instead of running the audit")
    _opt(p, "--N", _real("N"), 1000.0, "length N")
    _opt(p, "--A", _real("A"), 10.0, "length A")
    _opt(p, "--T", _real("T"), 1e4, "height")
    _opt(p, "--eps", _real("eps"), 0.0, "exponent of T^eps")
    _opt(p, "--norm", _real("norm"), 1.0, "coefficient norm")
    _opt(p, "--instances", _count("instances"), 20, "family size for the audit")
    _common(p, seed=True)
    p.set_defaults(handler=cmd_twisted_moment)

    p = sub.add_parser("exponents", help="exact exponent certification")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--check-headline", action="store_true", help="the five headline checks")
    g.add_argument("--cgen", nargs=3, metavar=("THETA", "SIGMA", "EPS"))
    g.add_argument("--typeii", nargs=5, metavar=("SIGMA1", "SIGMA2", "THETA", "A", "EPS"))
    _common(p)
    p.set_defaults(handler=cmd_exponents)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    try:
        parser = build_parser()
    except UsageError as exc:
        print(f"almostprime-lab: error: {exc}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with threadpool_limits(limits=args.threads):
            report = args.handler(args)
        emit_report(report, args.format, args.output)
    except (InvalidArgumentError, OutOfDomainError, ResourceLimitError) as exc:
        print(f"almostprime-lab {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"almostprime-lab {args.command}: {exc} (best value {exc.value})", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"almostprime-lab {args.command}: {exc}", file=sys.stderr)
        return 1
    return 1 if report.passed is False else 0
