"""Command-line front end.

    python3 -m reinforced_walk <subcommand> [options]

Subcommands: dp, mc, gf-check, density, moments, bridge, bounds, verify.
Exit codes: 0 success, 1 domain error, 2 convergence error, 3 verification failure,
64 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile

import numpy as np

from . import bridge, continuum, discrete, genfunc, moments, verify
from .core import CapacityError, ConvergenceError, DomainError, NumericConfig, SingularityError, make_param

log = logging.getLogger("reinforced_walk")

EXIT_OK, EXIT_DOMAIN, EXIT_CONVERGENCE, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2, 3, 64
MOMENTS_CSV_HEADER = "quantity,k,m,t,method,value,tolerance"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def fmt(v) -> str:
    return discrete.format_number(v)


def write_atomic(path: str | None, text: str) -> None:
    """Write ``text`` to ``path`` (stdout for ``None`` or ``-``) via a temporary file
    in the target directory, so no partial file is ever left behind."""
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def parse_grid(text: str) -> np.ndarray:
    """``min:max:count`` -> ``count`` evenly spaced points (inclusive)."""
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError as exc:
        raise DomainError(f"grid must look like min:max:count, got {text!r}") from exc
    if n < 1 or hi < lo:
        raise DomainError(f"bad grid {text!r}")
    return np.linspace(lo, hi, n)


def numeric_config(args) -> NumericConfig:
    return NumericConfig(
        series_tol=args.series_tol, quad_tol=args.quad_tol, ilt_terms=args.ilt_terms, max_terms=args.max_terms
    )


def _csv(header: str, rows) -> str:
    lines = [header]
    lines += [",".join(fmt(v) if not isinstance(v, str) else v for v in r) for r in rows]
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ subcommands


def cmd_dp(args) -> int:
    make_param(args.delta)
    if args.steps < 1:
        raise DomainError("--steps must be >= 1")
    pmf = discrete.dp_evolve(args.steps, args.delta, mode=args.mode)
    write_atomic(args.out, pmf.to_csv())
    return EXIT_OK


def cmd_mc(args) -> int:
    make_param(args.delta)
    if args.steps < 1 or args.walks < 1:
        raise DomainError("--steps and --walks must be >= 1")
    hist = discrete.mc_simulate(
        args.steps, args.delta, n_walks=args.walks, seed=args.seed, batch_size=args.batch_size, workers=args.workers
    )
    write_atomic(args.out, hist.to_csv())
    return EXIT_OK


def cmd_gf_check(args) -> int:
    make_param(args.delta)
    if args.steps < 1:
        raise DomainError("--steps must be >= 1")
    exact = args.mode != "float64"
    pmfs = genfunc.gf_to_pmfs(args.steps, args.delta, exact=exact, variant=args.variant)
    dp = discrete.dp_init(args.delta, mode="exact" if exact else "float64")
    mismatches = []
    for N in range(1, args.steps + 1):
        if N > 1:
            dp = discrete.dp_step(dp)
        a, b = pmfs[N - 1].table, dp.table
        same = all(x == y for x, y in zip(a.ravel(), b.ravel())) if exact else np.allclose(a, b, rtol=1e-12, atol=1e-15)
        if not same:
            mismatches.append(N)
    rows = genfunc.coefficient_rows(args.steps, args.delta, exact=exact)
    write_atomic(args.out, _csv("a,N,x,coeff", rows))
    if mismatches:
        log.error("generating function and DP differ at N=%s", mismatches)
        return EXIT_VERIFY
    log.info("generating function equals DP for N <= %d", args.steps)
    return EXIT_OK


def cmd_density(args) -> int:
    make_param(args.delta)
    if not args.t > 0:
        raise DomainError("--t must be positive")
    grid = parse_grid(args.grid)
    if args.quantity == "Q" and grid[0] <= 0:
        raise DomainError("Q needs b > 0 on the grid")
    if args.quantity == "P" and grid[0] < 0:
        raise DomainError("P needs y >= 0 on the grid")
    if args.quantity == "joint" and (args.b is None or args.b <= 0):
        raise DomainError("joint needs --b > 0")
    cfg = numeric_config(args)
    rows = list(continuum.density_rows(args.t, args.delta, args.quantity, grid, cfg, b=args.b))
    write_atomic(args.out, _csv(continuum.DENSITY_CSV_HEADER, rows))
    return EXIT_OK


def cmd_moments(args) -> int:
    if not args.t > 0 or args.m < 0 or args.kmax < 0:
        raise DomainError("need t > 0, m >= 0, kmax >= 0")
    cfg = numeric_config(args)
    t, m = args.t, args.m
    rows = []
    for k in range(args.kmax + 1):
        r = moments.max_moment(k, t, m, cfg)
        rows.append(("max_moment", k, m, t, r.method, r.value, r.tolerance))
        a = moments.max_moment_asymptotic(k, t, m)
        rows.append(("max_moment", k, m, t, a.method, a.value, 0.0))
    r = moments.walker_mean(t, m, cfg)
    rows.append(("walker_moment", 1, m, t, r.method, r.value, r.tolerance))
    r = moments.walker_second_moment(t, m, cfg)
    rows.append(("walker_moment", 2, m, t, r.method, r.value, r.tolerance))
    rows.append(("max_dispersion", 1, m, t, "asymptotic", moments.max_dispersion(m), 0.0))
    rows.append(("walker_dispersion", 1, m, t, "asymptotic", moments.walker_dispersion(m), 0.0))
    if m > 0:
        rows.append(("walker_dispersion", 1, m, t, "quadrature", moments.walker_dispersion_exact(m, cfg), cfg.quad_tol))
    write_atomic(args.out, _csv(MOMENTS_CSV_HEADER, rows))
    return EXIT_OK


def cmd_bridge(args) -> int:
    make_param(args.delta)
    try:
        eps = [float(e) for e in args.eps.split(",")]
    except ValueError as exc:
        raise DomainError(f"bad --eps {args.eps!r}") from exc
    if any(e <= 0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
        raise DomainError("--eps must be positive and strictly decreasing")
    if any(bridge.steps_for(args.t, e) < 10 for e in eps):
        raise DomainError("every eps must give at least 10 steps")
    rows = bridge.convergence_report(
        args.t, args.delta, eps, cfg=numeric_config(args), workers=args.workers, mapping=args.mapping
    )
    text = bridge.CONVERGENCE_CSV_HEADER + "\n" + "".join(r.csv() + "\n" for r in rows)
    write_atomic(args.out, text)
    return EXIT_OK if bridge.report_monotone(rows) else EXIT_VERIFY


def cmd_bounds(args) -> int:
    if args.steps < 1:
        raise DomainError("--steps must be >= 1")
    scale = {"printed": 1.0, "corrected": 2.0}[args.band]
    rep = bridge.max_bound_check(args.steps, slack_c=args.slack, scale=scale)
    write_atomic(args.json or args.out, json.dumps(rep, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if rep["passed"] else EXIT_VERIFY


def cmd_verify(args) -> int:
    results = verify.run_suite(args.suite, workers=args.workers)
    for r in results:
        print(r.line(), file=sys.stderr)
    report = {"suite": args.suite, "passed": all(r.passed for r in results), "checks": [r.to_dict() for r in results]}
    target = args.json or args.out
    if target:
        write_atomic(target, json.dumps(report, indent=2) + "\n")
    return EXIT_OK if report["passed"] else EXIT_VERIFY


# ------------------------------------------------------------ parser


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file of option defaults (flags win)")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--workers", type=int, default=None, help="worker threads (default: machine parallelism)")
    common.add_argument("--log-level", default="WARNING")
    num = argparse.ArgumentParser(add_help=False)
    num.add_argument("--series-tol", type=float, default=1e-12)
    num.add_argument("--quad-tol", type=float, default=1e-10)
    num.add_argument("--ilt-terms", type=int, default=32)
    num.add_argument("--max-terms", type=int, default=10000)

    parser = _Parser(prog="reinforced_walk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    subs = {}

    p = sub.add_parser("dp", parents=[common], help="exact joint law of (S_N, A_N)")
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--mode", choices=["auto", "exact", "float64"], default="auto")
    p.set_defaults(func=cmd_dp)
    subs["dp"] = p

    p = sub.add_parser("mc", parents=[common], help="Monte Carlo histogram of (S_N, A_N)")
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--walks", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--batch-size", type=int, default=100000)
    p.set_defaults(func=cmd_mc)
    subs["mc"] = p

    p = sub.add_parser("gf-check", parents=[common], help="generating-function coefficients checked against DP")
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--steps", type=int, default=24)
    p.add_argument("--mode", choices=["exact", "float64"], default="exact")
    p.add_argument("--variant", choices=list(genfunc.VARIANTS), default="corrected")
    p.set_defaults(func=cmd_gf_check)
    subs["gf-check"] = p

    p = sub.add_parser("density", parents=[common, num], help="continuum densities on a grid")
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--quantity", choices=["Q", "P", "joint"], default="Q")
    p.add_argument("--grid", default="0.05:3:60", help="min:max:count")
    p.add_argument("--b", type=float, default=None, help="maximum level for --quantity joint")
    p.set_defaults(func=cmd_density)
    subs["density"] = p

    p = sub.add_parser("moments", parents=[common, num], help="moments of both marginals")
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--kmax", type=int, default=2)
    p.set_defaults(func=cmd_moments)
    subs["moments"] = p

    p = sub.add_parser("bridge", parents=[common, num], help="lattice-to-continuum convergence table")
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--eps", default="0.1,0.05,0.025")
    p.add_argument("--mapping", choices=list(bridge.LIMIT_MAPPINGS), default="corrected")
    p.set_defaults(func=cmd_bridge)
    subs["bridge"] = p

    p = sub.add_parser("bounds", parents=[common], help="large-N bands for a P{A_N = a}")
    p.add_argument("--steps", type=int, default=10000)
    p.add_argument("--slack", type=float, default=bridge.BOUND_SLACK_C)
    p.add_argument("--band", choices=["printed", "corrected"], default="printed")
    p.add_argument("--json", help="report path (alias of --out)")
    p.set_defaults(func=cmd_bounds)
    subs["bounds"] = p

    p = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    p.add_argument("--suite", choices=["all", "fast"], default="all")
    p.add_argument("--json", help="report path (alias of --out)")
    p.set_defaults(func=cmd_verify)
    subs["verify"] = p
    return parser, subs


def _apply_config(argv, parser, subs):
    """Parse ``argv`` with defaults taken from ``--config`` so explicit flags still win."""
    argv = list(sys.argv[1:] if argv is None else argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    command = next((a for a in argv if a in subs), None)
    if known.config and command:
        try:
            with open(known.config, encoding="utf-8") as fh:
                conf = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {known.config!r}: {exc}") from exc
        if not isinstance(conf, dict):
            raise UsageError("config must be a JSON object")
        sp = subs[command]
        conf = {k.replace("-", "_"): v for k, v in conf.items()}
        unknown = sorted(set(conf) - {a.dest for a in sp._actions})
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        for action in sp._actions:
            if action.dest in conf:
                action.required = False
        sp.set_defaults(**conf)
    return parser.parse_args(argv)


def run(argv=None) -> int:
    parser, subs = build_parser()
    try:
        args = _apply_config(argv, parser, subs)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING), stream=sys.stderr)
    if args.workers is None:
        args.workers = discrete.default_workers()
    try:
        return args.func(args)
    except (DomainError, CapacityError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ConvergenceError, SingularityError) as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


def main() -> None:
    sys.exit(run())
