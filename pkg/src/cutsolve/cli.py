"""Command-line front end: solve, sweep, audit, run-fixture.

Exit codes for ``solve``: 0 ResidualMet, 2 MaxIter, 3 Stagnated, 4 Error;
config and usage problems exit 1. Sweeps run cells on a bounded worker pool
but always write rows in deterministic grid order.
"""

import argparse
import csv
import itertools
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .config import ProblemConfig
from .errors import CutsolveError
from .functions import CATALOG
from .gallery import FIXTURES, get_fixture
from .instances import rng_from_seed, sample_point_in
from .operators import ExactCutter, OperatorParams, classify_params
from .solver import (TerminationReason, cutter_audit, solve, sqne_audit,
                     varying_params_solve)
from .traceio import write_trace

EXIT_CODES = {
    TerminationReason.RESIDUAL_MET: 0,
    TerminationReason.MAX_ITER: 2,
    TerminationReason.STAGNATED: 3,
    TerminationReason.ERROR: 4,
}

DEFAULT_AUDIT_GAMMAS = (0.5, 1.0, 1.5)


def _load_config(path, mode=None):
    cfg = ProblemConfig.from_file(path)
    if mode:
        cfg.data["mode"] = mode
    return cfg.validate()


def cmd_solve(args):
    cfg = _load_config(args.config, args.mode)
    ca, cb = cfg.cutters()
    stop = cfg.stop_rule()
    if cfg.is_varying():
        gseq, mseq, lam, floor = cfg.param_sequences()
        trace = varying_params_solve(ca, cb, gseq, mseq, lam, cfg.x0(), stop, floor=floor)
    else:
        trace = solve(ca, cb, cfg.fixed_params(), cfg.x0(), stop)
    path, fmt = cfg.output()
    if args.out:
        path = args.out
    if args.format:
        fmt = args.format
    write_trace(trace, path, fmt)
    ra, rb = (trace.final_residuals if trace.steps else (float("nan"),) * 2)
    print(f"{trace.reason.value}: {trace.iterations} iterations, "
          f"residuals ({ra:.3e}, {rb:.3e}), trace -> {path}")
    if trace.error:
        print(f"error: {trace.error}", file=sys.stderr)
    return EXIT_CODES[trace.reason]


def _parse_grid(tokens):
    grid = {"gamma": None, "mu": None, "lambda": None}
    for tok in tokens:
        if "=" not in tok:
            raise CutsolveError(f"grid token {tok!r} is not KEY=V1,V2,...")
        key, _, vals = tok.partition("=")
        if key not in grid:
            raise CutsolveError(f"grid key must be gamma, mu or lambda, got {key!r}")
        grid[key] = [float(v) for v in vals.split(",") if v]
        if not grid[key]:
            raise CutsolveError(f"grid key {key!r} has no values")
    return grid


def cmd_sweep(args):
    cfg = _load_config(args.config, args.mode)
    if cfg.is_varying():
        raise CutsolveError("sweep needs fixed base parameters, not sequences")
    base = cfg.fixed_params()
    grid = _parse_grid(args.grid)
    gammas = grid["gamma"] or [base.gamma]
    mus = grid["mu"] or [base.mu]
    lams = grid["lambda"] or [base.lam]
    permissive = cfg.mode == "permissive"
    cells = list(itertools.product(gammas, mus, lams))
    params = [OperatorParams(g, m, l, permissive=permissive) for g, m, l in cells]

    ca, cb = cfg.cutters()
    stop = cfg.stop_rule()
    x0 = cfg.x0()

    def run(p):
        return solve(ca, cb, p, x0, stop)

    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        traces = list(pool.map(run, params))

    out = args.out or "sweep.csv"
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["gamma", "mu", "lambda", "method", "iterations",
                    "residualA", "residualB", "reason"])
        for p, tr in zip(params, traces):
            ra, rb = tr.final_residuals if tr.steps else (float("nan"),) * 2
            w.writerow([repr(p.gamma), repr(p.mu), repr(p.lam), classify_params(p),
                        tr.iterations, repr(ra), repr(rb), tr.reason.value])
    print(f"{len(cells)} cells -> {out}")
    return 0


def _fixed_set_samples(cutter, rng, count):
    """Certified fixed-set points for audits; None when unobtainable."""
    if isinstance(cutter, ExactCutter):
        return [sample_point_in(rng, cutter.set) for _ in range(count)]
    samples = list(cutter.fix_samples())
    # rejection sampling, then cutter images that verifiably landed inside
    for _ in range(40 * count):
        z = rng.normal(scale=2.0, size=cutter.dim)
        if cutter.fix_contains(z, tol=0.0):
            samples.append(z)
        if len(samples) >= count:
            break
    if len(samples) < count:
        for _ in range(10 * count):
            z = cutter.apply(rng.normal(scale=2.0, size=cutter.dim))
            if cutter.fix_contains(z):
                samples.append(z)
            if len(samples) >= count:
                break
    return samples or None


def cmd_audit(args):
    if args.samples < 1:
        raise CutsolveError("--samples must be >= 1")
    rng = rng_from_seed(args.seed)
    if args.fixture:
        fixture = get_fixture(args.fixture)
        report = fixture.run()
        for line in report.messages:
            print(line)
        print(("PASS" if report.passed else "FAIL") + f" fixture {fixture.name}")
        return 0 if report.passed else 1

    cfg = _load_config(args.config, args.mode)
    ca, cb = cfg.cutters()
    refs = cfg.reference_points()
    gammas = [float(g) for g in args.gammas.split(",")] if args.gammas else list(
        DEFAULT_AUDIT_GAMMAS)
    all_pass = True
    for label, cutter in (("a", ca), ("b", cb)):
        xs = [rng.normal(scale=3.0, size=cutter.dim) for _ in range(args.samples)]
        ys = [r for r in refs if cutter.fix_contains(r)] or _fixed_set_samples(
            cutter, rng, max(4, args.samples // 8))
        if not ys:
            print(f"side {label}: no certified fixed-set points; "
                  "add reference_points to the config")
            all_pass = False
            continue
        sep = cutter_audit(cutter, xs, ys)
        ok = sep.passed
        print(f"side {label}: separating property {'PASS' if ok else 'FAIL'} "
              f"({sep.checked} pairs, worst slack {sep.worst_slack:.3e})")
        if not ok and sep.witness is not None:
            _, wx, wz = sep.witness
            print(f"  violating pair: x={wx.tolist()}, z={wz.tolist()}")
        all_pass &= ok
        for gamma in gammas:
            rep = sqne_audit(cutter, gamma, xs, ys)
            ok = rep.passed
            print(f"side {label}: decrease inequalities at gamma={gamma} "
                  f"{'PASS' if ok else 'FAIL'} ({rep.checked} checks, "
                  f"worst slack {rep.worst_slack:.3e})")
            all_pass &= ok
    return 0 if all_pass else 1


def cmd_run_fixture(args):
    fixture = get_fixture(args.name)
    report = fixture.run(mode=args.mode)
    for line in report.messages:
        print(line)
    outdir = Path(args.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    fmt = args.format or "csv"
    for key, trace in report.traces.items():
        path = outdir / f"{fixture.name}_{key}.{fmt}"
        write_trace(trace, path, fmt)
        print(f"trace -> {path}")
    print(("PASS" if report.passed else "FAIL") + f" fixture {fixture.name}")
    return 0 if report.passed else 1


def cmd_list(args):
    if args.what == "fixtures":
        for name in sorted(FIXTURES):
            print(name)
    else:
        for name in sorted(CATALOG):
            print(name)
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="cutsolve",
        description="Convex feasibility via averaged relaxed cutters.")
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="run one solve from a config file")
    ps.add_argument("config")
    ps.add_argument("--out", help="trace file path (overrides config)")
    ps.add_argument("--format", choices=("csv", "jsonl"))
    ps.add_argument("--mode", choices=("strict", "permissive"))
    ps.set_defaults(func=cmd_solve)

    pw = sub.add_parser("sweep", help="solve over a parameter grid")
    pw.add_argument("config")
    pw.add_argument("--grid", nargs="+", required=True,
                    metavar="KEY=V1,V2", help="gamma=..., mu=..., lambda=...")
    pw.add_argument("--out")
    pw.add_argument("--workers", type=int, default=4)
    pw.add_argument("--mode", choices=("strict", "permissive"))
    pw.set_defaults(func=cmd_sweep)

    pa = sub.add_parser("audit", help="check cutter and decrease inequalities")
    pa.add_argument("config", nargs="?")
    pa.add_argument("--fixture", help="audit a named gallery fixture instead")
    pa.add_argument("--samples", type=int, default=256)
    pa.add_argument("--seed", type=int, default=0)
    pa.add_argument("--gammas", help="comma-separated relaxation values")
    pa.add_argument("--mode", choices=("strict", "permissive"))
    pa.set_defaults(func=cmd_audit)

    pf = sub.add_parser("run-fixture", help="run a named gallery fixture")
    pf.add_argument("name")
    pf.add_argument("--out", help="directory for exported traces")
    pf.add_argument("--format", choices=("csv", "jsonl"))
    pf.add_argument("--mode", choices=("strict", "permissive"))
    pf.set_defaults(func=cmd_run_fixture)

    pl = sub.add_parser("list", help="list fixtures or catalog functions")
    pl.add_argument("what", choices=("fixtures", "functions"))
    pl.set_defaults(func=cmd_list)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "audit" and not args.fixture and not args.config:
        parser.error("audit needs a config file or --fixture NAME")
    try:
        return args.func(args)
    except CutsolveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
