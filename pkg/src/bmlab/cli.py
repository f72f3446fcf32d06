"""Command-line surface: reproducible experiments with file-based output.

Symbols and signals are specified with a small name:parameter language
(``sign``, ``one``, ``gauss:a``, ``frac:alpha``, ``measure:file.json``,
``csv:file`` for symbols; ``gauss:lam``, ``delta``, ``const:c``,
``csv:file``, ``json:file`` for signals).  Exit codes: 0 success,
1 validation error (bad flags, malformed files, guard violations),
2 numerical-check failure (a residual over tolerance).
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time

import numpy as np

from . import identities, normlab
from .engine import apply_bilinear, apply_bilinear_direct, apply_delta_symbol
from .signals import (
    ExponentTriple,
    GridSpec,
    GuardError,
    SampledSignal,
    idft,
    Spectrum,
    make_gaussian,
    random_bandlimited,
    signal_from_csv,
    signal_from_json,
    signal_to_csv,
)
from .symbols import Symbol1D, Symbol2D, symbol_from_json

__all__ = ["main", "run"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.exit(1, f"{self.prog}: error: {message}\n")


class ValidationError(ValueError):
    pass


def _parse_symbol(spec: str, grid: GridSpec):
    name, _, arg = spec.partition(":")
    if name in ("sign", "hilbert"):
        return Symbol1D.sign(grid)
    if name == "one":
        return Symbol1D.constant(grid)
    if name == "gauss":
        return Symbol1D.gaussian(grid, float(arg) if arg else 1.0)
    if name == "frac":
        if not arg:
            raise ValidationError("frac symbol needs an order, e.g. frac:0.5")
        return Symbol1D.fractional(grid, float(arg))
    if name == "measure":
        return symbol_from_json(arg, grid)
    if name == "csv":
        return _symbol2d_from_csv(arg, grid)
    raise ValidationError(f"unknown symbol spec: {spec!r}")


def _symbol2d_from_csv(path: str, grid: GridSpec) -> Symbol2D:
    vals = np.zeros((grid.n, grid.n), dtype=complex)
    seen = 0
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip() for h in header] != ["i", "j", "re", "im"]:
            raise ValidationError("symbol CSV must have header i,j,re,im")
        for row in reader:
            i, j = int(row[0]), int(row[1])
            vals[i, j] = float(row[2]) + 1j * float(row[3])
            seen += 1
    if seen != grid.n * grid.n:
        raise ValidationError("symbol CSV does not cover the full grid")
    return Symbol2D(grid, vals)


def _parse_signal(spec: str, grid: GridSpec):
    name, _, arg = spec.partition(":")
    if name == "gauss":
        return make_gaussian(float(arg) if arg else 1.0, grid, tail_tol=1e-3)
    if name == "delta":
        s = np.zeros(grid.n, dtype=complex)
        s[grid.n // 2] = 1.0 / grid.dx
        return SampledSignal(grid, s)
    if name == "const":
        return SampledSignal(grid, np.full(grid.n, complex(arg) if arg else 1.0))
    if name == "csv":
        f = signal_from_csv(arg)
        _require_grid(f, grid)
        return f
    if name == "json":
        f = signal_from_json(arg)
        _require_grid(f, grid)
        return f
    raise ValidationError(f"unknown signal spec: {spec!r}")


def _require_grid(f: SampledSignal, grid: GridSpec) -> None:
    if f.grid != grid:
        raise ValidationError("file-based signal does not match --n/--length")


def _write_json(doc: dict, path: str) -> None:
    doc = {"schema": 1, **doc}
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_apply(args) -> int:
    grid = GridSpec(args.n, args.length)
    sym = _parse_symbol(args.symbol, grid)
    f = _parse_signal(args.f, grid)
    g = _parse_signal(args.g, grid)
    if isinstance(sym, Symbol1D):
        out = apply_delta_symbol(sym, f, g)
    else:
        out = apply_bilinear(sym, f, g)
    signal_to_csv(out, args.out)
    return 0


def _cmd_verify(args) -> int:
    grid = GridSpec(args.n, args.length)
    if args.suite == "all":
        ids = identities.IDENTITY_IDS
    else:
        ids = tuple(s.strip() for s in args.suite.split(",") if s.strip())
        bad = [i for i in ids if i not in identities.IDENTITY_IDS]
        if bad:
            raise ValidationError(f"unknown identity ids: {bad}")
    seeds = [args.seed * 1000 + i for i in range(args.repeats)]
    reports = identities.run_suite(ids, seeds, grid)
    swap = identities.exponent_swap_residual(grid, seed=args.seed)
    all_pass = all(r["pass"] for r in reports) and swap > 1e-3
    doc = {
        "suite": reports,
        "swap_residual": swap,
        "swap_must_exceed": 1e-3,
        "all_pass": bool(all_pass),
    }
    if args.json:
        _write_json(doc, args.json)
    else:
        json.dump(doc, sys.stdout, sort_keys=True)
        sys.stdout.write("\n")
    return 0 if all_pass else 2


def _cmd_norm_scan(args) -> int:
    grid = GridSpec(args.n, args.length)
    sym = _parse_symbol(args.symbol, grid)
    e = ExponentTriple(args.p1, args.p2, args.p3)
    est = normlab.estimate_norm(sym, e, budget=args.budget, seed=args.seed, grid=grid)
    doc = {
        "exponents": [e.p1, e.p2, e.p3],
        "value": est.value,
        "witness": est.witness,
        "evaluations": len(est.trace),
        "trace": list(est.trace),
    }
    if args.json:
        _write_json(doc, args.json)
    else:
        json.dump({"schema": 1, **doc}, sys.stdout, sort_keys=True)
        sys.stdout.write("\n")
    return 0


def _cmd_gaussian_lemma(args) -> int:
    grid = GridSpec(args.n, args.length)
    sym = _parse_symbol(args.symbol, grid)
    if not isinstance(sym, Symbol1D):
        raise ValidationError("gaussian-lemma needs a one-variable symbol")
    e = ExponentTriple(args.p1, args.p2, args.p3)
    lambdas = np.geomspace(0.5, 2.0, args.lambdas)
    report = normlab.gaussian_scan(sym, e, lambdas=lambdas, grid=grid)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["lam", "deviation", "integral"])
            for row in report["rows"]:
                w.writerow([repr(row["lam"]), repr(row["deviation"]), repr(row["integral"])])
    if args.json:
        _write_json(report, args.json)
    print(f"max deviation {report['max_deviation']!r}, "
          f"integral slope {report['integral_slope']!r}")
    return 0 if report["max_deviation"] < args.tol else 2


def _cmd_window_report(args) -> int:
    grid = GridSpec(args.n, args.length)
    sym = _parse_symbol(args.symbol, grid)
    if not isinstance(sym, Symbol1D):
        raise ValidationError("window-report needs a one-variable symbol")
    triples = []
    for part in args.triples.split(";"):
        p1, p2, p3 = (float(v) for v in part.split(","))
        triples.append(ExponentTriple(p1, p2, p3))
    report = normlab.exponent_window_report(sym, triples, grid=grid)
    if args.json:
        _write_json(report, args.json)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["p1", "p2", "p3", "lam", "ratio"])
            for entry in report["triples"]:
                for lam, r in zip(report["lambdas"], entry["ratios"]):
                    w.writerow([repr(entry["p1"]), repr(entry["p2"]), repr(entry["p3"]),
                                repr(lam), repr(r)])
    for entry in report["triples"]:
        label = "FLAGGED" if entry["flagged"] else "bounded"
        print(f"({entry['p1']},{entry['p2']},{entry['p3']}): growth {entry['growth']!r} [{label}]")
    return 0


def _cmd_bench(args) -> int:
    rng = np.random.default_rng(args.seed)
    for n in args.sizes:
        grid = GridSpec(n, args.length)
        f = random_bandlimited(grid, rng)
        g = random_bandlimited(grid, rng)
        vals = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        m = Symbol2D(grid, vals)
        t0 = time.perf_counter()
        apply_bilinear(m, f, g)
        t_fast = time.perf_counter() - t0
        t0 = time.perf_counter()
        apply_bilinear_direct(m, f, g, range(n))
        t_direct = time.perf_counter() - t0
        print(f"n={n}: regrouped {t_fast:.6f}s, direct {t_direct:.6f}s")
    return 0


def _add_grid_flags(p, n=512, length=64.0):
    p.add_argument("--n", type=int, default=n, help="sample count (power of two)")
    p.add_argument("--length", type=float, default=length, help="period length L")
    p.add_argument("--seed", type=int, default=0, help="search / suite seed")
    p.add_argument("--tol", type=float, default=1e-6, help="tolerance for pass/fail checks")


def run(argv=None) -> int:
    parser = _Parser(prog="bmlab", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("apply", help="evaluate a bilinear operator, write CSV samples")
    p.add_argument("--symbol", required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--out", required=True, help="output CSV (columns x,re,im)")
    _add_grid_flags(p)
    p.set_defaults(fn=_cmd_apply)

    p = sub.add_parser("verify", help="run the identity suite, emit JSON residual records")
    p.add_argument("--suite", default="all", help='"all" or comma-separated identity ids')
    p.add_argument("--json", default=None, help="write the report here instead of stdout")
    p.add_argument("--repeats", type=int, default=50, help="seeds per identity")
    _add_grid_flags(p, n=64, length=16.0)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("norm-scan", help="search for the best witness norm ratio")
    p.add_argument("--symbol", required=True)
    p.add_argument("--p1", type=float, required=True)
    p.add_argument("--p2", type=float, required=True)
    p.add_argument("--p3", type=float, required=True)
    p.add_argument("--budget", type=int, default=300)
    p.add_argument("--json", default=None)
    _add_grid_flags(p, n=128, length=32.0)
    p.set_defaults(fn=_cmd_norm_scan)

    p = sub.add_parser("gaussian-lemma", help="engine vs closed form on the Gaussian family")
    p.add_argument("--symbol", required=True)
    p.add_argument("--p1", type=float, default=2.0)
    p.add_argument("--p2", type=float, default=2.0)
    p.add_argument("--p3", type=float, default=1.0)
    p.add_argument("--lambdas", type=int, default=9, help="log-spaced points in [1/2, 2]")
    p.add_argument("--csv", default=None)
    p.add_argument("--json", default=None)
    _add_grid_flags(p)
    p.set_defaults(fn=_cmd_gaussian_lemma)

    p = sub.add_parser("window-report", help="bounded vs growing ratios across dilations")
    p.add_argument("--symbol", required=True)
    p.add_argument("--triples", default="2,2,1;4,4,1",
                   help='semicolon-separated exponent triples "p1,p2,p3;..."')
    p.add_argument("--json", default=None)
    p.add_argument("--csv", default=None)
    _add_grid_flags(p, n=4096, length=48.0)
    p.set_defaults(fn=_cmd_window_report)

    p = sub.add_parser("bench", help="timings: regrouped vs direct evaluation")
    p.add_argument("--sizes", type=int, nargs="+", default=[16, 32, 64, 128])
    _add_grid_flags(p, n=128, length=32.0)
    p.set_defaults(fn=_cmd_bench)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValidationError, GuardError, ValueError, OSError) as exc:
        print(f"bmlab: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
