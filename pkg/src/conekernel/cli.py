"""Command-line front end: eval-cone, eval-surface, scan, dump-rule, selftest."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import selftest as _selftest
from .bounds import bound_cone, bound_surface, default_tau_grid, scan
from .geometry import ConeParams, ConePoint, SurfaceParams, SurfacePoint
from .kernels import (
    MIN_TAU,
    heat_cone_integral,
    heat_cone_series,
    heat_surface_integral,
    heat_surface_series,
)
from .orthopoly import BudgetError
from .quadrature import cone_rule, pi_rule, surface_rule

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BUDGET = 3


class _ValidationError(Exception):
    pass


def _parse_point(spec, d, domain, project=False):
    try:
        vals = [float(v) for v in spec.split(",")]
    except ValueError as exc:
        raise _ValidationError(f"cannot parse point {spec!r}: {exc}") from None
    if len(vals) != d + 1:
        raise _ValidationError(f"point {spec!r} must have {d} coordinates plus t (t last)")
    x, t = np.array(vals[:-1]), vals[-1]
    try:
        if domain == "cone":
            return ConePoint(x=x, t=t)
        if project:
            r = float(np.linalg.norm(x))
            x = x * (t / r) if r > 0 else x
        return SurfacePoint(x=x, t=t)
    except ValueError as exc:
        raise _ValidationError(str(exc)) from None


def _threads_from(args):
    if args.threads is not None:
        return args.threads
    env = os.environ.get("CONEKERNEL_THREADS")
    return int(env) if env else 1


def _check_tau(tau, force):
    if not tau > 0.0:
        raise _ValidationError("tau must be > 0")
    if tau < MIN_TAU and not force:
        raise _ValidationError(
            f"tau = {tau} is below the supported minimum {MIN_TAU}; pass --force with raised orders"
        )


def _emit(payload, args):
    text = json.dumps(payload, indent=2) if args.json else _plain(payload)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _plain(payload, indent=0):
    lines = []
    pad = "  " * indent
    for key, val in payload.items():
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.append(_plain(val, indent + 1))
        else:
            lines.append(f"{pad}{key}: {val}")
    return "\n".join(lines)


def _cmd_eval(args, domain):
    if domain == "cone":
        params = ConeParams(d=args.d, mu=args.mu, gamma=args.gamma)
        series_fn, integral_fn, bound_fn = heat_cone_series, heat_cone_integral, bound_cone
    else:
        params = SurfaceParams(d=args.d, gamma=args.gamma)
        series_fn, integral_fn, bound_fn = heat_surface_series, heat_surface_integral, bound_surface
    _check_tau(args.tau, args.force)
    if args.with_bound and args.tau > 4.0:
        raise _ValidationError(
            f"the comparable expression is stated for tau in (0, 4]; got tau = {args.tau}"
        )
    p = _parse_point(args.p, args.d, domain, project=args.project)
    q = _parse_point(args.q, args.d, domain, project=args.project)
    orders = tuple(args.orders) if args.orders else None
    kw = {"tol": args.tol, "orders": orders}
    ser = series_fn(args.tau, params, p, q, **kw)
    integ = integral_fn(args.tau, params, p, q, **kw)
    payload = {
        "schema": 1,
        "domain": domain,
        "tau": args.tau,
        "value": integ.value,
        "error_budget": integ.error_budget,
        "series": {"value": ser.value, "error_budget": ser.error_budget, **ser.meta},
        "integral": {"value": integ.value, "error_budget": integ.error_budget, **integ.meta},
    }
    if args.tau <= 4.0:
        payload["bound"] = bound_fn(args.tau, params, p, q)
        payload["ratio"] = integ.value / payload["bound"]
    else:
        payload["note"] = "tau >= 4 regime: kernel is uniformly comparable to 1"
    _emit(payload, args)
    return EXIT_OK


def _cmd_scan(args):
    if args.domain == "cone":
        params = ConeParams(d=args.d, mu=args.mu, gamma=args.gamma)
    else:
        params = SurfaceParams(d=args.d, gamma=args.gamma)
    threads = _threads_from(args)
    if args.bless:
        windows = _selftest.compute_windows(
            samples_per_stratum=args.samples, seed=args.seed, threads=threads
        )
        path = _selftest.golden_path()
        with open(str(path), "w") as fh:
            json.dump(windows, fh, indent=2)
        print(f"blessed window constants -> {path}", file=sys.stderr)
        return EXIT_OK
    if args.tau_min < MIN_TAU and not args.force:
        raise _ValidationError(
            f"tau-min = {args.tau_min} is below the supported minimum {MIN_TAU}; pass --force"
        )
    tau_grid = default_tau_grid(args.tau_min, args.tau_max, args.tau_steps)
    strata = args.strata.split(",") if args.strata else None
    report = scan(
        args.domain,
        params,
        tau_grid,
        samples_per_stratum=args.samples,
        seed=args.seed,
        strata=strata,
        tol=args.tol,
        threads=threads,
        csv_path=args.csv,
    )
    text = json.dumps(report.to_dict(), indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def _cmd_dump_rule(args):
    if args.kind == "pi":
        rule = pi_rule(args.nu, args.order)
        nodes, weights = rule.nodes, rule.weights
    elif args.kind in ("cone-t", "cone-r"):
        params = ConeParams(d=args.d, mu=args.mu, gamma=args.gamma)
        crule = cone_rule(params, orders=(args.order, args.order, 4))
        if args.kind == "cone-t":
            nodes, weights = crule.t_nodes, crule.t_weights
        else:
            nodes, weights = crule.radial_nodes, crule.radial_weights
    elif args.kind == "surface-t":
        sparams = SurfaceParams(d=args.d, gamma=args.gamma)
        srule = surface_rule(sparams, orders=(args.order, 4))
        nodes, weights = srule.t_nodes, srule.t_weights
    else:
        raise _ValidationError(f"unknown rule kind {args.kind!r}")
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(["node", "weight"])
        for node, weight in zip(nodes, weights):
            writer.writerow([repr(float(node)), repr(float(weight))])
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def _cmd_selftest(args):
    if args.level == "quick":
        results = _selftest.run_quick()
    else:
        results = _selftest.run_full(seed=args.seed, threads=_threads_from(args))
    ok = True
    for res in results:
        status = "PASS" if res["ok"] else "FAIL"
        print(f"[{status}] {res['name']}: {res['detail']}")
        ok = ok and res["ok"]
    return EXIT_OK if ok else 1


def _build_parser():
    parser = argparse.ArgumentParser(prog="conekernel", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_eval(name, domain):
        sp = sub.add_parser(name, help=f"evaluate the heat kernel on the {domain}")
        sp.add_argument("--d", type=int, required=True)
        if domain == "cone":
            sp.add_argument("--mu", type=float, required=True)
        sp.add_argument("--gamma", type=float, required=True)
        sp.add_argument("--tau", type=float, required=True)
        sp.add_argument("--p", required=True, help="comma-separated coordinates, t last")
        sp.add_argument("--q", required=True, help="comma-separated coordinates, t last")
        sp.add_argument("--tol", type=float, default=1e-10)
        sp.add_argument("--orders", type=int, nargs="+", default=None)
        sp.add_argument("--json", action="store_true")
        sp.add_argument("--out", default=None)
        sp.add_argument("--force", action="store_true", help="allow tau below the supported minimum")
        sp.add_argument("--project", action="store_true", help="project surface points onto ||x||=t")
        sp.add_argument(
            "--with-bound",
            action="store_true",
            help="require the comparable-expression contract tau in (0, 4]",
        )
        sp.set_defaults(func=lambda a: _cmd_eval(a, domain))

    add_eval("eval-cone", "cone")
    add_eval("eval-surface", "surface")

    sp = sub.add_parser("scan", help="ratio scan of kernel against the comparable expression")
    sp.add_argument("--domain", choices=("cone", "surface"), required=True)
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--mu", type=float, default=0.0)
    sp.add_argument("--gamma", type=float, default=0.0)
    sp.add_argument("--tau-min", type=float, default=0.05)
    sp.add_argument("--tau-max", type=float, default=4.0)
    sp.add_argument("--tau-steps", type=int, default=16)
    sp.add_argument("--samples", type=int, default=60, help="pairs per stratum")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--strata", default=None, help="comma-separated stratum names")
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--out", default=None)
    sp.add_argument("--csv", default=None)
    sp.add_argument("--force", action="store_true")
    sp.add_argument("--bless", action="store_true", help="recompute and pin the golden windows")
    sp.set_defaults(func=_cmd_scan)

    sp = sub.add_parser("dump-rule", help="emit quadrature nodes/weights as CSV")
    sp.add_argument("--kind", choices=("pi", "cone-t", "cone-r", "surface-t"), default="pi")
    sp.add_argument("--nu", type=float, default=0.0)
    sp.add_argument("--order", type=int, default=60)
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--mu", type=float, default=0.0)
    sp.add_argument("--gamma", type=float, default=0.0)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_dump_rule)

    sp = sub.add_parser("selftest", help="run the invariant suite")
    sp.add_argument("--level", choices=("quick", "full"), default="quick")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threads", type=int, default=None)
    sp.set_defaults(func=_cmd_selftest)
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (_ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
