"""Golden reproduction cases for the worked examples.

Each case computes a small payload and compares it with a golden JSON file
``golden/<id>.json`` of the form ``{"id", "expected", "tolerance"}``, where
``tolerance`` holds ``default`` plus optional per-field overrides keyed by
dotted path.
"""

from __future__ import annotations

import json
import math
from importlib import resources
from typing import Any, Callable

import numpy as np

from .corpus import corpus_get
from .errors import UnknownCorpusEntry
from .grid import default_points, plot_axis
from .interval import Interval, IntervalVector
from .optimality import (
    diff_inclusion_check,
    efficient_check,
    gh_diff_ivf,
    region_subset,
    sum_rule_experiment,
    weak_efficient_check,
    zero_optimality_check,
)
from .report import normalize
from .weak_subdiff import (
    WeakCandidate,
    equivalence_report,
    member_check,
    region_1d,
    regions_1d,
    support_ivf_eval,
    support_sweep,
)

Payload = dict[str, Any]


def _bounds(region) -> Payload:
    return {"g_lo": [region.glo_min, region.glo_max], "g_hi": [region.ghi_min, region.ghi_max]}


def _example_3_1(u: float) -> Payload:
    f = corpus_get("example_3_1")
    return {"regions": [{"c": r.c, "empty": r.empty, **_bounds(r)} for r in regions_1d(f, u, (0.0, 0.5, 1.0))]}


def case_example_3_1_u0() -> Payload:
    return _example_3_1(0.0)


def case_example_3_1_u1() -> Payload:
    return _example_3_1(1.0)


def case_figure_1_member() -> Payload:
    f = corpus_get("figure_1")
    cand = WeakCandidate.of(0.5, (0.25, 1.5))
    ys = plot_axis(*f.domain[0], default_points(), 1.0)
    phi_lo, phi_hi, h_lo, h_hi = support_sweep(f, 1.0, cand, ys)
    return {
        "member": member_check(f, 1.0, cand).member,
        "H_at_u": support_ivf_eval(f, 1.0, cand, 1.0),
        "H_at_2": support_ivf_eval(f, 1.0, cand, 2.0),
        "phi_at_2": f.eval(2.0),
        "support_below_phi": bool(np.all(h_lo <= phi_lo + 1e-9) and np.all(h_hi <= phi_hi + 1e-9)),
        "region_c_0_5": _bounds(region_1d(f, 1.0, 0.5)),
    }


def case_sum_rule_counterexample() -> Payload:
    f1, f2 = corpus_get("sum_rule_phi1"), corpus_get("sum_rule_phi2")
    report = sum_rule_experiment(f1, f2, 0.0, (0.0, 0.5))
    per_c = []
    for e in report.per_c:
        per_c.append({
            "c": e.c,
            "equal": e.equal,
            "sum_of_parts": {"g_lo": list(e.parts_g_lo), "g_hi": list(e.parts_g_hi)},
            "region_of_sum": _bounds(e.region_of_sum),
            "witness_kind": None if e.witness is None else e.witness.kind,
        })
    from .ivf import ivf_sum

    g1, g2 = Interval(-1.0, 0.3), Interval(-1.0, 0.0)
    fixed = {
        "g": [-2.0, 0.3],
        "c": 0.0,
        "member_f1_part": member_check(f1, 0.0, WeakCandidate(IntervalVector([g1]), 0.0)).member,
        "member_f2_part": member_check(f2, 0.0, WeakCandidate(IntervalVector([g2]), 0.0)).member,
        "member_sum": member_check(ivf_sum(f1, f2), 0.0, WeakCandidate.of(0.0, (-2.0, 0.3))).member,
    }
    return {"per_c": per_c, "fixed_witness": fixed}


def _inclusion(name1: str, name2: str, cs) -> Payload:
    f1, f2 = corpus_get(name1), corpus_get(name2)
    rep = diff_inclusion_check(f1, f2, 0.0, cs)
    return {
        "per_c": [
            {
                "c": e.c,
                "subset": e.subset,
                "reverse_subset": region_subset(e.region_b, e.region_a),
                "f1": _bounds(e.region_a),
                "f2": _bounds(e.region_b),
            }
            for e in rep.per_c
        ],
        "context": {
            "weak_eff_at_u": rep.weak_eff_at_u,
            "values_equal_at_u": rep.values_equal_at_u,
            "width_condition": rep.width_condition.value,
        },
        "efficient_at_u": efficient_check(gh_diff_ivf(f1, f2), 0.0).efficient,
    }


def case_note_4_1() -> Payload:
    return _inclusion("note_4_1_phi1", "note_4_1_phi2", (0.0, 0.5, 1.0))


def case_note_4_2() -> Payload:
    out = _inclusion("note_4_2_phi1", "note_4_2_phi2", (2.0, 3.0))
    d = gh_diff_ivf(corpus_get("note_4_2_phi1"), corpus_get("note_4_2_phi2"))
    out["difference_at"] = {"0.5": d.eval(0.5), "-0.5": d.eval(-0.5)}
    return out


def case_remark_4_1() -> Payload:
    return _inclusion("remark_4_1_phi1", "remark_4_1_phi2", (2.0, 3.0))


def case_log_lipschitz() -> Payload:
    f = corpus_get("log_example")
    rows = []
    for u in (1.0, 1.5, math.e):
        rep = equivalence_report(f, min(u, f.domain[0][1]))
        rows.append({
            "u": u,
            "a": rep.weak_subdiff_nonempty,
            "b": rep.lower_lipschitz,
            "c": rep.certificate_exists,
            "global_L_le_2": rep.lipschitz.global_L is not None and rep.lipschitz.global_L <= 2.0,
        })
    return {"points": rows}


def case_theorem_4_3_demo() -> Payload:
    rows = []
    for name, u in (("abs_cone", 0.0), ("linear_boundary_min", 0.0), ("abs_cone", 0.5), ("example_3_1", 0.5)):
        f = corpus_get(name)
        rows.append({
            "ivf": name,
            "u": u,
            "zero_in_sum": zero_optimality_check(f, u).optimal,
            "weak_efficient": weak_efficient_check(f, u).weak_efficient,
        })
    return {"points": rows}


CASES: dict[str, Callable[[], Payload]] = {
    "example_3_1_u0": case_example_3_1_u0,
    "example_3_1_u1": case_example_3_1_u1,
    "figure_1_member": case_figure_1_member,
    "sum_rule_counterexample": case_sum_rule_counterexample,
    "note_4_1": case_note_4_1,
    "note_4_2": case_note_4_2,
    "remark_4_1": case_remark_4_1,
    "log_lipschitz": case_log_lipschitz,
    "theorem_4_3_demo": case_theorem_4_3_demo,
}


class UnknownCase(UnknownCorpusEntry):
    pass


def load_golden(case_id: str) -> dict:
    if case_id not in CASES:
        raise UnknownCase(f"unknown repro case {case_id!r}; known: {', '.join(CASES)}")
    text = resources.files(__package__).joinpath("golden", f"{case_id}.json").read_text(encoding="utf-8")
    return json.loads(text)


def _tol_for(path: str, tolerance: dict) -> float:
    fields = tolerance.get("fields", {})
    best, best_len = tolerance.get("default", 1e-9), -1
    for key, value in fields.items():
        if (path == key or path.startswith(key + ".")) and len(key) > best_len:
            best, best_len = value, len(key)
    return best


def compare(actual: Any, expected: Any, tolerance: dict, path: str = "") -> list[str]:
    """Differences between a computed payload and its golden payload."""
    where = path or "<root>"
    if isinstance(expected, dict):
        if not isinstance(actual, dict):
            return [f"{where}: expected an object"]
        out = []
        if set(actual) != set(expected):
            out.append(f"{where}: keys {sorted(actual)} != {sorted(expected)}")
        for k in sorted(set(actual) & set(expected)):
            out += compare(actual[k], expected[k], tolerance, f"{path}.{k}" if path else k)
        return out
    if isinstance(expected, list):
        if not isinstance(actual, list) or len(actual) != len(expected):
            return [f"{where}: expected a list of length {len(expected)}"]
        out = []
        for i, (a, e) in enumerate(zip(actual, expected)):
            out += compare(a, e, tolerance, f"{path}.{i}")
        return out
    if isinstance(expected, bool) or expected is None or isinstance(expected, str):
        return [] if actual == expected else [f"{where}: {actual!r} != {expected!r}"]
    if isinstance(actual, bool) or not isinstance(actual, (int, float)):
        return [f"{where}: {actual!r} is not a number (expected {expected!r})"]
    tol = _tol_for(path, tolerance)
    return [] if abs(actual - expected) <= tol else [f"{where}: {actual!r} differs from {expected!r} by more than {tol}"]


def run_case(case_id: str) -> dict:
    golden = load_golden(case_id)
    actual = normalize(CASES[case_id]())
    problems = compare(actual, golden["expected"], golden.get("tolerance", {}))
    return {"id": case_id, "passed": not problems, "problems": problems, "payload": actual}


def run(selection: str = "all") -> list[dict]:
    ids = list(CASES) if selection == "all" else [selection]
    return [run_case(i) for i in ids]
