"""Command-line front end.

Exit codes: 0 success, 2 parse/parameter error, 3 capacity exceeded,
4 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys

from .analysis import robustness_orders, rsp
from .boolean_function import PBF, pbf_of_cascade
from .distribution import phi_C_recursive, phi_closed, phi_enum, phi_incl_excl
from .errors import CapacityError, ParameterError, enum_cap
from .event_calculus import IdentityNotApplicable, identity_cases, identity_sides
from .expr import FilterExpr, describe_closed, parse
from .filter_algebra import Boundary, apply, format_signal, read_signal
from .polynomial import Polynomial
from .simulate import DistributionSpec, MOMENT_NOTE, ks_distance, sample_apply, separator_checks, smoothing_factors

EXIT_OK, EXIT_PARSE, EXIT_CAPACITY, EXIT_MISMATCH = 0, 2, 3, 4

METHODS = ("enum", "ie", "closed", "recursive")


class Mismatch(Exception):
    pass


def _expr(args) -> FilterExpr:
    e = parse(args.expr)
    return e.reversed() if getattr(args, "pipeline", False) else e


def _pbf(filt) -> PBF:
    return filt if isinstance(filt, PBF) else pbf_of_cascade(filt)


def phi_by(method: str, expr: FilterExpr) -> Polynomial:
    filt = expr.to_filter()
    if method == "enum":
        return phi_enum(_pbf(filt))
    if method == "ie":
        return phi_incl_excl(_pbf(filt))
    if method == "closed":
        spec = describe_closed(expr)
        if spec is None:
            raise ParameterError(f"no closed formula for {expr}")
        return phi_closed(*spec)
    if method == "recursive":
        a = expr.atoms
        if len(a) == 1 and a[0].kind == "C":
            return phi_C_recursive(a[0].n)
        if len(a) == 1 and a[0].kind == "F":
            return 1 - phi_C_recursive(a[0].n).reflect()
        raise ParameterError(f"the recursion applies to C<n> and F<n> only, not {expr}")
    raise ParameterError(f"unknown method {method!r}")


def _applicable(expr: FilterExpr) -> list[str]:
    out = ["enum", "ie"]
    if describe_closed(expr) is not None:
        out.append("closed")
    if len(expr.atoms) == 1 and expr.atoms[0].kind in ("C", "F"):
        out.append("recursive")
    return out


def compute_phi(method: str, expr: FilterExpr) -> tuple[Polynomial, dict]:
    """Polynomial plus per-method details; ``all`` requires agreement."""
    if method != "all":
        return phi_by(method, expr), {method: "ok"}
    results: dict[str, Polynomial] = {}
    status: dict[str, str] = {}
    for m in _applicable(expr):
        try:
            results[m] = phi_by(m, expr)
            status[m] = "ok"
        except CapacityError as exc:
            status[m] = f"skipped: {exc}"
    if not results:
        raise CapacityError("every method", 0, 0, "all methods exceeded their caps")
    polys = set(results.values())
    if len(polys) != 1:
        detail = "; ".join(f"{m}: {p}" for m, p in results.items())
        raise Mismatch(f"methods disagree: {detail}")
    return next(iter(results.values())), status


def _emit(args, obj, text: str) -> None:
    if args.json:
        print(json.dumps(obj, indent=2, default=str))
    else:
        print(text)


def cmd_phi(args) -> int:
    expr = _expr(args)
    phi, status = compute_phi(args.method, expr)
    _emit(args, {"filter": str(expr), "phi": phi.to_json_obj(), "methods": status}, phi.pretty())
    return EXIT_OK


def cmd_dnf(args) -> int:
    expr = _expr(args)
    f = _pbf(expr.to_filter())
    _emit(args, {"filter": str(expr), "window": f.w, "dnf": f.value_dnf.to_json_obj()},
          str(f.value_dnf))
    return EXIT_OK


def cmd_rsp(args) -> int:
    expr = _expr(args)
    f = _pbf(expr.to_filter())
    r = rsp(f)
    _emit(args, {"filter": str(expr), "window": f.w, "rsp": r.as_strings()}, ",".join(r.as_strings()))
    return EXIT_OK


def cmd_robustness(args) -> int:
    expr = _expr(args)
    phi, _ = compute_phi(args.method, expr)
    ro = robustness_orders(phi)
    row = {"filter": str(expr), "window": None, "lower": ro.lower, "upper": ro.upper, "rsp": None}
    try:
        f = _pbf(expr.to_filter())
        row["window"] = f.w
        if f.w <= enum_cap():
            row["rsp"] = rsp(f).as_strings()
    except CapacityError:
        pass
    header = f"{'filter':<20} {'window':>6} {'lower':>5} {'upper':>5}  rsp"
    line = (f"{row['filter']:<20} {row['window'] if row['window'] is not None else '-':>6} "
            f"{row['lower']:>5} {row['upper']:>5}  {','.join(row['rsp']) if row['rsp'] else '-'}")
    _emit(args, [row], header + "\n" + line)
    return EXIT_OK


def cmd_apply(args) -> int:
    expr = _expr(args)
    x = read_signal(args.file, dim=expr.dim)
    y = apply(expr.to_filter(), x, Boundary.coerce(args.boundary))
    if args.json:
        print(json.dumps({"filter": str(expr), "boundary": args.boundary, "output": y.tolist()}))
    else:
        sys.stdout.write(format_signal(y))
    return EXIT_OK


def cmd_simulate(args) -> int:
    expr = _expr(args)
    filt = expr.to_filter()
    d = DistributionSpec(args.dist, mu=args.mu, sigma=args.sigma, alpha=args.alpha, x_min=args.x_min)
    phi, _ = compute_phi(args.method, expr)
    e = sample_apply(filt, d, args.count, args.seed, streams=args.streams)
    tail = args.upper_tail if args.upper_tail is not None else (0.9 if d.family == "pareto" else None)
    ks = ks_distance(e, phi, d, upper_tail=tail)
    report = {"filter": str(expr), "distribution": d.describe(), "n": args.count,
              "seed": args.seed, "ks": ks}
    if filt.dim == 1 and args.checks > 0:
        report["axioms"] = separator_checks(filt, samples=args.checks, seed=args.seed).axioms
    if d.family == "uniform":
        sf = smoothing_factors(phi)
        report["variance"] = str(sf["variance"])
        report["variance_ratio"] = str(sf["variance_ratio"])
        report["std_ratio"] = sf["std_ratio"]
        report["note"] = MOMENT_NOTE
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        for k, v in report.items():
            print(f"{k}: {v}")
    if args.ks_limit is not None and ks > args.ks_limit:
        print(f"KS distance {ks:.5f} exceeds limit {args.ks_limit}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_verify(args) -> int:
    bad = 0
    rows = []
    for name, params in identity_cases(args.max_l7, args.max_l8, args.max_r):
        try:
            lhs, rhs = identity_sides(name, **params)
        except IdentityNotApplicable:
            continue
        ok = lhs == rhs
        bad += not ok
        shown = {k: (v.label if hasattr(v, "label") else v) for k, v in params.items()}
        rows.append({"identity": name, "params": shown, "holds": ok})
        if not args.json:
            print(f"{'PASS' if ok else 'FAIL'} {name} {shown}")
    if args.json:
        print(json.dumps({"cases": rows, "failures": bad}, indent=2))
    else:
        print(f"{len(rows) - bad}/{len(rows)} identities hold")
    return EXIT_MISMATCH if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lulu",
        description="Output distributions of stack filters built from erosion/dilation cascades.",
        epilog=("Expressions compose right to left, as in 'L3 U4 L2 U1 U5' (U5 acts first); "
                "--pipeline reads them left to right instead. Atoms: Ln Un Mn Cn Fn Rn,k "
                "maxN minN max{o,...} min{o,...} with offsets i or [i,j]. LULU_ENUM_CAP sets the "
                "enumeration cap (default 26 variables)."),
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, expr=True, method=False):
        p = sub.add_parser(name, help=help_)
        if expr:
            p.add_argument("expr", help="filter expression")
            p.add_argument("--pipeline", action="store_true", help="read atoms in dataflow order")
        if method:
            p.add_argument("--method", choices=METHODS + ("all",), default="enum")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=fn)
        return p

    add("phi", cmd_phi, "print the transfer polynomial", method=True)
    add("dnf", cmd_dnf, "print the value-domain DNF")
    add("rsp", cmd_rsp, "print rank selection probabilities")
    add("robustness", cmd_robustness, "print lower/upper robustness orders", method=True)
    p = add("apply", cmd_apply, "filter a signal file")
    p.add_argument("file")
    p.add_argument("--boundary", choices=[b.value for b in Boundary], default="extend")
    p = add("simulate", cmd_simulate, "Monte-Carlo check of F_SX = phi o F_X", method=True)
    p.add_argument("--dist", default="uniform", choices=["uniform", "gaussian", "pareto"])
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=1.5)
    p.add_argument("--x-min", type=float, default=1.0)
    p.add_argument("--count", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--streams", type=int, default=1)
    p.add_argument("--checks", type=int, default=100, help="random signals for separator checks")
    p.add_argument("--upper-tail", type=float, default=None)
    p.add_argument("--ks-limit", type=float, default=None, help="exit 4 if KS exceeds this")
    p = add("verify", cmd_verify, "check the expansion-calculus identities", expr=False)
    p.add_argument("--max-l7", type=int, default=5)
    p.add_argument("--max-l8", type=int, default=6)
    p.add_argument("--max-r", type=int, default=2)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except Mismatch as exc:
        print(f"verification mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (ParameterError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
