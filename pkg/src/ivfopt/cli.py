"""``ivfopt`` command line.

Exit status: 0 when the tested condition holds, 1 when it fails, 2 on
usage or validation errors.
"""

from __future__ import annotations

import argparse
import csv
import sys
from typing import Callable, Sequence

from .corpus import load_ivf
from .errors import IvfOptError
from .grid import GridSpec, default_points, plot_axis
from .interval import DEFAULT_TOL, parse_interval_vector
from .ivf import as_vector
from .optimality import (
    diff_inclusion_check,
    efficient_check,
    normal_cone_member_check,
    sum_rule_experiment,
    weak_efficient_check,
)
from .report import Report, fmt
from .repro import CASES, run
from .weak_subdiff import (
    DEFAULT_C_LIST,
    WeakCandidate,
    equivalence_report,
    member_check,
    region_1d,
    support_sweep,
)

OK, FAIL, ERROR = 0, 1, 2


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.replace(";", ",").split(",") if x.strip()]


def _grid(args) -> GridSpec:
    return GridSpec(points=args.grid, focal=not args.no_focal)


def _witness(w):
    return None if w is None else list(w)


def cmd_check_member(args) -> tuple[Report, int]:
    f = load_ivf(args.ivf)
    cand = WeakCandidate(parse_interval_vector(args.g), args.c)
    u = as_vector(_floats(args.u), f.dim)
    res = member_check(f, u, cand, _grid(args), args.tol)
    rep = Report("check-member", {"ivf": args.ivf, "u": u, "g": cand.g, "c": cand.c, "tol": args.tol})
    rep.results = {"member": res.member, "witness": _witness(res.witness), "violation": res.violation, "checked": res.checked}
    if not res:
        rep.note("info", "membership fails", _witness(res.witness))
    return rep, OK if res else FAIL


def cmd_region(args) -> tuple[Report, int]:
    f = load_ivf(args.ivf)
    r = region_1d(f, float(args.u), args.c, _grid(args), args.tol)
    rep = Report("region", {"ivf": args.ivf, "u": float(args.u), "c": args.c, "tol": args.tol})
    rep.results = r.as_dict()
    return rep, FAIL if r.empty else OK


def cmd_repro(args) -> tuple[Report, int]:
    results = run(args.case)
    rep = Report("repro", {"case": args.case})
    rep.results = {"cases": results, "passed": all(r["passed"] for r in results)}
    for r in results:
        for p in r["problems"]:
            rep.note("error", f"{r['id']}: {p}")
    return rep, OK if rep.results["passed"] else FAIL


def cmd_efficiency(args) -> tuple[Report, int]:
    f = load_ivf(args.ivf)
    u = as_vector(_floats(args.u), f.dim)
    spec = _grid(args)
    results, holds = {}, True
    if args.mode in ("weak", "both"):
        w = weak_efficient_check(f, u, spec, args.tol)
        results.update(weak_efficient=w.weak_efficient, weak_witness=_witness(w.weak_witness))
        holds &= bool(w.weak_efficient)
    if args.mode in ("strict", "both"):
        e = efficient_check(f, u, spec, args.tol)
        results.update(efficient=e.efficient, efficient_witness=_witness(e.efficient_witness))
        holds &= bool(e.efficient)
    rep = Report("efficiency", {"ivf": args.ivf, "u": u, "mode": args.mode, "tol": args.tol}, results)
    return rep, OK if holds else FAIL


def cmd_sum_rule(args) -> tuple[Report, int]:
    f1, f2 = load_ivf(args.ivf1), load_ivf(args.ivf2)
    cs = _floats(args.c_list)
    r = sum_rule_experiment(f1, f2, float(args.u), cs, _grid(args), tol=args.tol)
    rep = Report("sum-rule", {"ivf1": args.ivf1, "ivf2": args.ivf2, "u": float(args.u), "c_list": cs}, r.as_dict())
    return rep, OK if r.all_equal else FAIL


def cmd_diff_opt(args) -> tuple[Report, int]:
    f1, f2 = load_ivf(args.ivf1), load_ivf(args.ivf2)
    cs = _floats(args.c_list)
    r = diff_inclusion_check(f1, f2, float(args.u), cs, _grid(args), args.tol)
    rep = Report("diff-opt", {"ivf1": args.ivf1, "ivf2": args.ivf2, "u": float(args.u), "c_list": cs}, r.as_dict())
    return rep, OK if r.overall else FAIL


def cmd_normal_cone(args) -> tuple[Report, int]:
    box = tuple((iv.lo, iv.hi) for iv in parse_interval_vector(args.domain))
    cand = WeakCandidate(parse_interval_vector(args.g), args.c)
    u = as_vector(_floats(args.u), len(box))
    res = normal_cone_member_check(box, u, cand, _grid(args), args.tol)
    rep = Report("normal-cone", {"domain": [list(b) for b in box], "u": u, "g": cand.g, "c": cand.c})
    rep.results = {"member": res.member, "witness": _witness(res.witness)}
    return rep, OK if res else FAIL


def cmd_lipschitz(args) -> tuple[Report, int]:
    f = load_ivf(args.ivf)
    u = as_vector(_floats(args.u), f.dim)
    r = equivalence_report(f, u, _grid(args), _floats(args.c_list), args.tol)
    rep = Report("lipschitz", {"ivf": args.ivf, "u": u, "c_list": _floats(args.c_list)}, r.as_dict())
    for c in r.caveats:
        rep.note("caveat", c)
    return rep, OK if r.agree else FAIL


def cmd_plot_data(args, out) -> int:
    f = load_ivf(args.ivf)
    if f.dim != 1:
        raise IvfOptError("plot-data is one-dimensional")
    cand = WeakCandidate(parse_interval_vector(args.g), args.c)
    u = float(args.u)
    ys = plot_axis(*f.domain[0], args.grid or default_points(), None if args.no_focal else u)
    phi_lo, phi_hi, h_lo, h_hi = support_sweep(f, u, cand, ys)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["y", "phi_lo", "phi_hi", "h_lo", "h_hi"])
    for row in zip(ys, phi_lo, phi_hi, h_lo, h_hi):
        writer.writerow([fmt(v) for v in row])
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ivfopt", description="Weak subgradients and optimality checks for interval-valued functions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, tol: bool = True) -> None:
        p.add_argument("--grid", type=int, default=None, help="points per dimension (default 2001 in 1-D, env IVFOPT_GRID)")
        p.add_argument("--no-focal", action="store_true", help="disable the logarithmic refinement around u")
        if tol:
            p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    p = sub.add_parser("check-member", help="test a weak subgradient candidate")
    p.add_argument("--ivf", required=True, help="file path or corpus:<name>")
    p.add_argument("--u", required=True, help="point, comma separated")
    p.add_argument("--g", required=True, help='intervals "lo,hi[;lo,hi...]"')
    p.add_argument("--c", type=float, required=True)
    common(p)

    p = sub.add_parser("region", help="admissible (g_lo, g_hi) for fixed c (1-D)")
    p.add_argument("--ivf", required=True)
    p.add_argument("--u", required=True, type=float)
    p.add_argument("--c", type=float, required=True)
    common(p)

    p = sub.add_parser("repro", help="rerun a golden case")
    p.add_argument("--case", required=True, help=f"all or one of: {', '.join(CASES)}")

    p = sub.add_parser("efficiency", help="(weak) efficiency of u")
    p.add_argument("--ivf", required=True)
    p.add_argument("--u", required=True)
    p.add_argument("--mode", choices=("weak", "strict", "both"), default="both")
    common(p)

    c_default = ",".join(str(c) for c in DEFAULT_C_LIST)
    for name, help_text in (("sum-rule", "compare the sum of subdifferentials with the subdifferential of the sum"),
                            ("diff-opt", "inclusion of subdifferentials for a difference of IVFs")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--ivf1", required=True)
        p.add_argument("--ivf2", required=True)
        p.add_argument("--u", required=True, type=float)
        p.add_argument("--c-list", default=c_default)
        common(p)

    p = sub.add_parser("normal-cone", help="augmented normal cone membership")
    p.add_argument("--domain", required=True, help='box "lo,hi[;lo,hi...]"')
    p.add_argument("--u", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--c", type=float, required=True)
    common(p)

    p = sub.add_parser("lipschitz", help="lower Lipschitz estimate and the three equivalent conditions")
    p.add_argument("--ivf", required=True)
    p.add_argument("--u", required=True)
    p.add_argument("--c-list", default=c_default)
    common(p)

    p = sub.add_parser("plot-data", help="CSV of the IVF and its support function")
    p.add_argument("--ivf", required=True)
    p.add_argument("--u", required=True, type=float)
    p.add_argument("--g", required=True)
    p.add_argument("--c", type=float, required=True)
    common(p, tol=False)
    return parser


HANDLERS: dict[str, Callable] = {
    "check-member": cmd_check_member,
    "region": cmd_region,
    "repro": cmd_repro,
    "efficiency": cmd_efficiency,
    "sum-rule": cmd_sum_rule,
    "diff-opt": cmd_diff_opt,
    "normal-cone": cmd_normal_cone,
    "lipschitz": cmd_lipschitz,
}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "plot-data":
            return cmd_plot_data(args, out)
        report, status = HANDLERS[args.command](args)
    except (IvfOptError, ValueError, KeyError, OSError) as exc:
        message = str(exc) if not isinstance(exc, KeyError) or isinstance(exc, IvfOptError) else f"unknown key {exc}"
        err = Report(args.command, {k: v for k, v in vars(args).items() if k != "command"})
        err.note("error", f"{type(exc).__name__}: {message}")
        out.write(err.to_json())
        print(f"ivfopt: error: {message}", file=sys.stderr)
        return ERROR
    out.write(report.to_json())
    return status


if __name__ == "__main__":
    sys.exit(main())
