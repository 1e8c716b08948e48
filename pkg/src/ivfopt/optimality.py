"""Efficiency tests, sum-rule and difference-of-IVF inclusion experiments, zero-inclusion optimality."""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, OutOfDomain, PreconditionError
from .grid import GridSpec
from .interval import DEFAULT_TOL, Interval, IntervalVector, add, family_inf_sup, gh_sub, inner_product
from .ivf import Box, Ivf, as_vector, constant_ivf, frechet_residual, gh_difference, ivf_sum
from .weak_subdiff import (
    DEFAULT_C_LIST,
    MemberResult,
    Region1D,
    WeakCandidate,
    _member_on,
    _region_on,
    _Sweep,
    member_check,
    regions_1d,
)

REGION_TOL = 1e-6
FRACTIONS = (0.0, 0.25, 0.5, 0.75, 1.0)


def gh_diff_ivf(f1: Ivf, f2: Ivf) -> Ivf:
    """The objective ``y ↦ f2(y) ⊖gH f1(y)`` of a difference-of-IVFs problem."""
    return gh_difference(f2, f1)


def sum_ivf(f1: Ivf, f2: Ivf) -> Ivf:
    return ivf_sum(f1, f2)


# ---------------------------------------------------------------- efficiency


@dataclass(frozen=True)
class EfficiencyVerdict:
    weak_efficient: bool | None = None
    efficient: bool | None = None
    weak_witness: tuple[float, ...] | None = None
    efficient_witness: tuple[float, ...] | None = None

    def as_dict(self) -> dict:
        return {
            "weak_efficient": self.weak_efficient,
            "efficient": self.efficient,
            "weak_witness": None if self.weak_witness is None else list(self.weak_witness),
            "efficient_witness": None if self.efficient_witness is None else list(self.efficient_witness),
        }


def _values(f: Ivf, u, grid: GridSpec | None):
    uv = as_vector(u, f.dim)
    if not f.contains(uv.reshape(1, -1))[0]:
        raise OutOfDomain(uv, f.name)
    pts = f.grid(grid, focal=uv)
    lo, hi = f.endpoints(pts)
    return uv, f.eval(uv), pts, lo, hi


def weak_efficient_check(f: Ivf, u, grid: GridSpec | None = None, tol: float = DEFAULT_TOL) -> EfficiencyVerdict:
    """``f(u) ⪯ f(y)`` for every grid ``y``; the witness is the worst offender."""
    _, fu, pts, lo, hi = _values(f, u, grid)
    excess = np.maximum(fu.lo - lo, fu.hi - hi)
    k = int(np.argmax(excess))
    if excess[k] > tol:
        return EfficiencyVerdict(weak_efficient=False, weak_witness=tuple(float(v) for v in pts[k]))
    return EfficiencyVerdict(weak_efficient=True)


def efficient_check(f: Ivf, u, grid: GridSpec | None = None, tol: float = DEFAULT_TOL) -> EfficiencyVerdict:
    """No grid ``y`` with ``f(y) ≺ f(u)``.

    As in the weak check, ``tol`` favours the property: a violator must be
    below ``f(u)`` exactly and strictly below by more than ``tol``.
    """
    _, fu, pts, lo, hi = _values(f, u, grid)
    below = (lo <= fu.lo) & (hi <= fu.hi)
    strict = (lo < fu.lo - tol) | (hi < fu.hi - tol)
    bad = np.flatnonzero(below & strict)
    if bad.size:
        return EfficiencyVerdict(efficient=False, efficient_witness=tuple(float(v) for v in pts[bad[0]]))
    return EfficiencyVerdict(efficient=True)


def efficiency(f: Ivf, u, grid: GridSpec | None = None, tol: float = DEFAULT_TOL) -> EfficiencyVerdict:
    """Both notions, each from its own sweep."""
    w = weak_efficient_check(f, u, grid, tol)
    e = efficient_check(f, u, grid, tol)
    return EfficiencyVerdict(w.weak_efficient, e.efficient, w.weak_witness, e.efficient_witness)


# ---------------------------------------------------------------- helpers on regions


def _box_points(region: Region1D, fractions: Sequence[float] = FRACTIONS) -> list[Interval]:
    """Lattice of admissible ``[g_lo, g_hi]`` inside a region (infinite sides capped)."""
    if region.empty:
        return []
    a, b, c, d = region.capped()
    out = []
    for s in fractions:
        for t in fractions:
            lo, hi = a + s * (b - a), c + t * (d - c)
            if lo <= hi:
                out.append(Interval(lo, hi))
    return out


def region_subset(a: Region1D, b: Region1D, tol: float = REGION_TOL) -> bool:
    """Box inclusion of the admissible sets (after ``g_lo <= g_hi``)."""
    if a.empty:
        return True
    if b.empty:
        return False
    a1, a2, a3, a4 = a.effective()
    b1, b2, b3, b4 = b.effective()
    return a1 >= b1 - tol and a2 <= b2 + tol and a3 >= b3 - tol and a4 <= b4 + tol


def _same_box(f1: Ivf, f2: Ivf) -> None:
    from .ivf import _same_domain

    _same_domain(f1, f2)
    if f1.dim != 1:
        raise DimensionError("this experiment is one-dimensional")


# ---------------------------------------------------------------- sum rule


@dataclass(frozen=True)
class SumWitness:
    g: Interval
    c: float
    g1: Interval
    c1: float
    g2: Interval
    c2: float
    in_f1: bool
    in_f2: bool
    in_sum: bool

    @property
    def kind(self) -> str:
        if self.in_f1 and self.in_f2 and not self.in_sum:
            return "parts_only"
        if self.in_sum and not (self.in_f1 and self.in_f2):
            return "sum_only"
        return "unconfirmed"

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "g": [self.g.lo, self.g.hi],
            "c": self.c,
            "split": {"g1": [self.g1.lo, self.g1.hi], "c1": self.c1, "g2": [self.g2.lo, self.g2.hi], "c2": self.c2},
            "member_f1": self.in_f1,
            "member_f2": self.in_f2,
            "member_sum": self.in_sum,
        }


@dataclass(frozen=True)
class SumRuleEntry:
    c: float
    parts_g_lo: tuple[float, float]
    parts_g_hi: tuple[float, float]
    region_of_sum: Region1D
    equal: bool
    sum_inside_parts: bool
    witness: SumWitness | None

    def as_dict(self) -> dict:
        return {
            "c": self.c,
            "sum_of_parts": {"g_lo": list(self.parts_g_lo), "g_hi": list(self.parts_g_hi)},
            "region_of_sum": self.region_of_sum.as_dict(),
            "equal": self.equal,
            "sum_inside_parts": self.sum_inside_parts,
            "witness": None if self.witness is None else self.witness.as_dict(),
        }


@dataclass(frozen=True)
class SumRuleReport:
    per_c: tuple[SumRuleEntry, ...]

    @property
    def all_equal(self) -> bool:
        return all(e.equal for e in self.per_c)

    def as_dict(self) -> dict:
        return {"per_c": [e.as_dict() for e in self.per_c], "all_equal": self.all_equal}


def sum_rule_experiment(
    f1: Ivf,
    f2: Ivf,
    u: float,
    c_list: Sequence[float] = DEFAULT_C_LIST,
    grid: GridSpec | None = None,
    splits: int = 11,
    tol: float = DEFAULT_TOL,
) -> SumRuleReport:
    """Compare ``∂ʷf1(u) ⊕ ∂ʷf2(u)`` with ``∂ʷ(f1 ⊕ f2)(u)`` slice by slice in ``c``.

    Candidates add as ``(G1, c1) ⊕ (G2, c2) = (G1 ⊕ G2, c1 + c2)``; the slice
    at ``c`` sweeps ``c1`` over ``splits`` values in ``[0, c]``.
    """
    _same_box(f1, f2)
    spec = grid or GridSpec()
    fs = sum_ivf(f1, f2)
    uval = float(as_vector(u, 1)[0])
    s1, s2, ss = (_Sweep.build(g, uval, spec) for g in (f1, f2, fs))
    step = spec.min_step()
    entries = []
    for c in c_list:
        c = float(c)
        rs = _region_on(ss, uval, c, tol, step)
        splits_c = np.linspace(0.0, c, splits) if c > 0 else np.array([0.0])
        boxes = []
        for c1 in splits_c:
            c1 = float(c1)
            c2 = max(c - c1, 0.0)
            r1, r2 = _region_on(s1, uval, c1, tol, step), _region_on(s2, uval, c2, tol, step)
            if r1.empty or r2.empty:
                continue
            boxes.append((c1, c2, r1, r2))
        if boxes:
            sums = [tuple(x + y for x, y in zip(r1.effective(), r2.effective())) for _, _, r1, r2 in boxes]
            parts = (min(s[0] for s in sums), max(s[1] for s in sums), min(s[2] for s in sums), max(s[3] for s in sums))
        else:
            parts = (math.inf, -math.inf, math.inf, -math.inf)
        sum_eff = rs.effective() if not rs.empty else (math.inf, -math.inf, math.inf, -math.inf)
        equal = (not boxes) == rs.empty and all(
            (x == y) or abs(x - y) <= REGION_TOL for x, y in zip(parts, sum_eff)
        )
        inside = rs.empty or (
            bool(boxes)
            and sum_eff[0] >= parts[0] - REGION_TOL
            and sum_eff[1] <= parts[1] + REGION_TOL
            and sum_eff[2] >= parts[2] - REGION_TOL
            and sum_eff[3] <= parts[3] + REGION_TOL
        )
        witness = None if equal else _sum_witness(boxes, rs, c, s1, s2, ss, tol)
        entries.append(SumRuleEntry(c, parts[:2], parts[2:], rs, bool(equal), bool(inside), witness))
    return SumRuleReport(tuple(entries))


def _sum_witness(boxes, rs: Region1D, c: float, s1: _Sweep, s2: _Sweep, ss: _Sweep, tol: float) -> SumWitness | None:
    """Search the part lattices for a sum that is not a member of the sum's subdifferential,
    then the sum lattice for a member that no sampled split reproduces. Every flag is
    recomputed by a membership sweep."""
    best, best_gap = None, tol
    for c1, c2, r1, r2 in boxes:
        for g1, g2 in itertools.product(_box_points(r1), _box_points(r2)):
            g = add(g1, g2)
            res = _member_on(ss, WeakCandidate(IntervalVector([g]), c), tol)
            if not res.member and res.violation > best_gap:
                best, best_gap = (g, c1, g1, c2, g2), res.violation
    if best is not None:
        g, c1, g1, c2, g2 = best
        return _verified(g, c, g1, c1, g2, c2, s1, s2, ss, tol)
    for g in _box_points(rs):
        for c1, c2, r1, r2 in boxes:
            split = _split(g, r1, r2)
            if split is not None:
                break
        else:
            c1, c2 = boxes[0][:2] if boxes else (0.0, c)
            return _verified(g, c, Interval(0.0, 0.0), c1, g, c2, s1, s2, ss, tol)
    return None


def _split(g: Interval, r1: Region1D, r2: Region1D) -> tuple[Interval, Interval] | None:
    """Find ``g = g1 ⊕ g2`` with each part in its region, if the endpoint ranges allow it."""
    a1, b1, c1, d1 = r1.effective()
    a2, b2, c2, d2 = r2.effective()
    lo1 = min(max(g.lo - b2, a1), b1)
    hi1 = min(max(g.hi - d2, c1), d1)
    lo2, hi2 = g.lo - lo1, g.hi - hi1
    if not (a2 - REGION_TOL <= lo2 <= b2 + REGION_TOL and c2 - REGION_TOL <= hi2 <= d2 + REGION_TOL):
        return None
    if lo1 > hi1 or lo2 > hi2:
        return None
    return Interval(lo1, hi1), Interval(lo2, hi2)


def _verified(g, c, g1, c1, g2, c2, s1, s2, ss, tol) -> SumWitness:
    m1 = _member_on(s1, WeakCandidate(IntervalVector([g1]), c1), tol).member
    m2 = _member_on(s2, WeakCandidate(IntervalVector([g2]), c2), tol).member
    ms = _member_on(ss, WeakCandidate(IntervalVector([g]), c), tol).member
    return SumWitness(g, c, g1, c1, g2, c2, m1, m2, ms)


# ---------------------------------------------------------------- difference of IVFs


class WidthCondition(str, enum.Enum):
    FIRST_WIDER = "w1>=w2"
    SECOND_WIDER = "w2>=w1"
    EQUAL = "equal"
    NONE = "none"


def width_condition(f1: Ivf, f2: Ivf, grid: GridSpec | None = None, tol: float = DEFAULT_TOL) -> WidthCondition:
    pts = f1.grid(grid)
    lo1, hi1 = f1.endpoints(pts)
    lo2, hi2 = f2.endpoints(pts)
    d = (hi1 - lo1) - (hi2 - lo2)
    first, second = bool(np.all(d >= -tol)), bool(np.all(d <= tol))
    if first and second:
        return WidthCondition.EQUAL
    if first:
        return WidthCondition.FIRST_WIDER
    if second:
        return WidthCondition.SECOND_WIDER
    return WidthCondition.NONE


@dataclass(frozen=True)
class InclusionEntry:
    c: float
    region_a: Region1D
    region_b: Region1D
    subset: bool
    witness: WeakCandidate | None

    def as_dict(self) -> dict:
        w = None
        if self.witness is not None:
            w = {"g": [[x.lo, x.hi] for x in self.witness.g], "c": self.witness.c}
        return {
            "c": self.c,
            "region_f1": self.region_a.as_dict(),
            "region_f2": self.region_b.as_dict(),
            "subset": self.subset,
            "witness": w,
        }


@dataclass(frozen=True)
class InclusionReport:
    per_c: tuple[InclusionEntry, ...]
    weak_eff_at_u: bool
    values_equal_at_u: bool
    width_condition: WidthCondition

    @property
    def overall(self) -> bool:
        return all(e.subset for e in self.per_c)

    @property
    def hypotheses(self) -> dict:
        return {
            "values_equal_branch": self.weak_eff_at_u and self.values_equal_at_u,
            "width_branch": self.weak_eff_at_u and self.width_condition is not WidthCondition.NONE,
        }

    def as_dict(self) -> dict:
        return {
            "per_c": [e.as_dict() for e in self.per_c],
            "overall": self.overall,
            "context": {
                "weak_eff_at_u": self.weak_eff_at_u,
                "values_equal_at_u": self.values_equal_at_u,
                "width_condition": self.width_condition.value,
            },
            "hypotheses": self.hypotheses,
        }


def diff_inclusion_check(
    f1: Ivf,
    f2: Ivf,
    u: float,
    c_list: Sequence[float] = DEFAULT_C_LIST,
    grid: GridSpec | None = None,
    tol: float = DEFAULT_TOL,
) -> InclusionReport:
    """Report ``∂ʷf1(u) ⊆ ∂ʷf2(u)`` per ``c`` next to the hypotheses that are supposed to imply it.

    Nothing is enforced: a false conclusion under false hypotheses is data.
    """
    _same_box(f1, f2)
    spec = grid or GridSpec()
    uval = float(as_vector(u, 1)[0])
    ra_list = regions_1d(f1, uval, c_list, spec, tol)
    rb_list = regions_1d(f2, uval, c_list, spec, tol)
    s1, s2 = _Sweep.build(f1, uval, spec), _Sweep.build(f2, uval, spec)
    entries = []
    for c, ra, rb in zip(c_list, ra_list, rb_list):
        subset = region_subset(ra, rb)
        witness = None
        if not subset:
            for g in _box_points(ra):
                cand = WeakCandidate(IntervalVector([g]), float(c))
                if _member_on(s1, cand, tol) and not _member_on(s2, cand, tol):
                    witness = cand
                    break
        entries.append(InclusionEntry(float(c), ra, rb, subset, witness))
    weak = weak_efficient_check(gh_diff_ivf(f1, f2), uval, spec, tol).weak_efficient
    v1, v2 = f1.eval(uval), f2.eval(uval)
    equal = abs(v1.lo - v2.lo) <= tol and abs(v1.hi - v2.hi) <= tol
    return InclusionReport(tuple(entries), bool(weak), bool(equal), width_condition(f1, f2, spec, tol))


# ---------------------------------------------------------------- normal cone and zero inclusion


def normal_cone_member_check(
    domain: Box, u, cand: WeakCandidate, grid: GridSpec | None = None, tol: float = DEFAULT_TOL
) -> MemberResult:
    """``Gᵀ⊙(y-u) ⊖gH [c‖y-u‖, c‖y-u‖] ⪯ [0, 0]`` for every grid ``y`` in the box."""
    box = tuple((float(a), float(b)) for a, b in domain)
    zero = constant_ivf(Interval(0.0, 0.0), box, name="zero")
    return member_check(zero, u, cand, grid, tol)


@dataclass(frozen=True)
class ZeroOptimality:
    optimal: bool
    in_subdiff: bool
    normal_cone_part: WeakCandidate | None
    witness: tuple[float, ...] | None

    def as_dict(self) -> dict:
        part = None
        if self.normal_cone_part is not None:
            part = {"g": [[x.lo, x.hi] for x in self.normal_cone_part.g], "c": self.normal_cone_part.c}
        return {
            "optimal": self.optimal,
            "in_subdiff": self.in_subdiff,
            "normal_cone_part": part,
            "witness": None if self.witness is None else list(self.witness),
        }


def zero_optimality_check(f: Ivf, u, grid: GridSpec | None = None, tol: float = DEFAULT_TOL) -> ZeroOptimality:
    """``(0, 0) ∈ ∂ʷf(u) ⊕ N_Y(u)`` with ``Y`` the domain box, via the split ``(0,0) ⊕ (0,0)``.

    Uses membership sweeps only, so it is an independent route to weak efficiency.
    """
    zero = WeakCandidate(IntervalVector.zeros(f.dim), 0.0)
    member = member_check(f, u, zero, grid, tol)
    if not member:
        return ZeroOptimality(False, False, None, member.witness)
    cone = normal_cone_member_check(f.domain, u, zero, grid, tol)
    return ZeroOptimality(bool(cone), True, zero if cone else None, cone.witness)


# ---------------------------------------------------------------- supremum identity


@dataclass(frozen=True)
class SupFormResult:
    sup: Interval
    evaluated: int
    caveats: tuple[str, ...]

    def as_dict(self) -> dict:
        return {"sup": [self.sup.lo, self.sup.hi], "evaluated": self.evaluated, "caveats": list(self.caveats)}


def sup_form_check(
    f: Ivf,
    u: float,
    y: float,
    c_list: Sequence[float] = DEFAULT_C_LIST,
    grid: GridSpec | None = None,
    samples: int = 50,
    derivative: IntervalVector | None = None,
    residual_tol: float = 1e-6,
    seed: int = 0,
) -> SupFormResult:
    """Supremum of ``Gᵀ⊙(y-u) ⊖gH c‖y-u‖`` over sampled members ``(G, c)`` of ``∂ʷf(u)``.

    ``derivative`` certifies differentiability at ``u``; it is required.
    """
    if derivative is None:
        raise PreconditionError("a derivative at u is required to certify differentiability")
    if f.dim != 1:
        raise DimensionError("sup_form_check is one-dimensional")
    residuals = frechet_residual(f, u, derivative)
    if not residuals or residuals[-1] > residual_tol:
        raise PreconditionError(f"the supplied derivative does not linearise {f.name} at u={u}")
    if not weak_efficient_check(f, u, grid).weak_efficient:
        raise PreconditionError(f"u={u} is not weak efficient for {f.name}")
    caveats = []
    if not f.is_interior(u):
        caveats.append("u lies on the boundary of the domain; the identity is only expected at interior points")
    uval = float(as_vector(u, 1)[0])
    t = float(as_vector(y, 1)[0]) - uval
    rng = np.random.default_rng(seed)
    values = []
    for region in regions_1d(f, uval, c_list, grid):
        members = region.corners() + region.sample(rng, samples)
        for g in members:
            values.append(gh_sub(inner_product([t], IntervalVector([g])), Interval(region.c * abs(t), region.c * abs(t))))
    if not values:
        raise PreconditionError("every probed region is empty")
    _, sup = family_inf_sup(values)
    return SupFormResult(sup, len(values), tuple(caveats))
