import math

import numpy as np
import pytest

from ivfopt.corpus import corpus_get, corpus_names
from ivfopt.errors import DimensionError, OutOfDomain, PreconditionError
from ivfopt.grid import GridSpec
from ivfopt.interval import Interval, IntervalVector
from ivfopt.ivf import frechet_residual, linear_ivf, negate
from ivfopt.weak_subdiff import (
    WeakCandidate,
    _Sweep,
    equivalence_report,
    frechet_lower_member_check,
    lower_lipschitz_estimate,
    member_check,
    member_check_scalar,
    region_1d,
    regions_1d,
    support_ivf_eval,
    weak_from_frechet,
)

C = WeakCandidate.of
V = IntervalVector.of

# smooth entries with their derivative at a few interior points
SMOOTH = [
    ("linear_2_3", 0.5, V((2, 3))),
    ("quad_shift", 0.0, V((0, 0))),
    ("quad_shift", 0.5, V((1, 1))),
]


# ---------------------------------------------------------------- membership


def test_member_examples():
    f = corpus_get("example_3_1")
    assert member_check(f, 0, C(0, (0, 0)))
    assert member_check(f, 0, C(0.5, (-1, 1)))
    res = member_check(f, 0, C(0, (2, 2)))
    assert not res and res.witness is not None and res.violation > 0
    assert member_check(corpus_get("figure_1"), 1, C(0.5, (0.25, 1.5)))


def test_member_errors():
    f = corpus_get("example_3_1")
    with pytest.raises(DimensionError):
        member_check(f, 0, C(0, (0, 0), (0, 0)))
    with pytest.raises(OutOfDomain):
        member_check(f, 5, C(0, (0, 0)))
    with pytest.raises(ValueError):
        C(-1, (0, 0))


def test_member_in_two_dimensions():
    f = corpus_get("example_2_1_2d")
    u = f.grid(GridSpec(points=5, focal=False))[12]
    huge = C(1e6, (0, 0), (0, 0))
    assert member_check(f, u, huge, GridSpec(points=21))


@pytest.mark.parametrize("name", ["example_3_1", "figure_1", "log_example", "note_4_2_phi1", "step"])
def test_vectorised_matches_scalar_reference(name):
    f = corpus_get(name)
    spec = GridSpec(points=61, focal=False)
    pts = f.grid(spec)
    rng = np.random.default_rng(7)
    for _ in range(15):
        u = pts[rng.integers(len(pts))][0]
        a, b = sorted(rng.uniform(-3, 3, size=2))
        cand = C(float(rng.uniform(0, 2)), (a, b))
        fast = member_check(f, u, cand, spec, tol=1e-9)
        if abs(fast.violation) < 1e-6 and not fast:
            continue  # borderline: both answers are defensible
        assert bool(fast) == member_check_scalar(f, u, cand, pts)


# ---------------------------------------------------------------- regions


@pytest.mark.parametrize("c", [0.0, 0.5, 1.0])
def test_region_example_u0(c):
    r = region_1d(corpus_get("example_3_1"), 0, c)
    assert not r.empty
    assert (r.glo_min, r.glo_max) == pytest.approx((-1 - c, c), abs=1e-3)
    assert (r.ghi_min, r.ghi_max) == pytest.approx((-c, 1 + c), abs=1e-3)


@pytest.mark.parametrize("c", [0.0, 0.5, 1.0])
def test_region_example_u1(c):
    r = region_1d(corpus_get("example_3_1"), 1, c)
    assert r.glo_min == pytest.approx(1 - c, abs=1e-3) and r.glo_max == math.inf
    assert r.ghi_min == pytest.approx(2 - c, abs=1e-3) and r.ghi_max == math.inf
    assert not r.bounded


def test_region_for_note_function_with_unit_c():
    r = region_1d(corpus_get("note_4_1_phi2"), 0, 1)
    assert (r.glo_min, r.glo_max, r.ghi_min, r.ghi_max) == pytest.approx((-2, 2, -2, 2), abs=1e-3)


def test_region_can_be_empty():
    r = region_1d(corpus_get("sqrt_cusp"), 0, 0)
    assert r.empty and r.corners() == [] and r.sample(np.random.default_rng(0), 3) == []


def test_regions_share_one_sweep():
    f = corpus_get("figure_1")
    many = regions_1d(f, 1, [0, 0.5])
    assert [r.as_dict() for r in many] == [region_1d(f, 1, c).as_dict() for c in (0, 0.5)]


def test_region_is_one_dimensional():
    with pytest.raises(DimensionError):
        region_1d(corpus_get("example_2_1_2d"), (0, 0), 0)


@pytest.mark.parametrize("name, u", [("example_3_1", 0.0), ("example_3_1", 0.5), ("figure_1", 1.0), ("note_4_2_phi2", 0.0), ("log_example", 1.5)])
@pytest.mark.parametrize("c", [1.0, 1.5])
def test_region_soundness(name, u, c):
    f = corpus_get(name)
    r = region_1d(f, u, c)
    assert not r.empty
    rng = np.random.default_rng(11)
    for g in r.sample(rng, 100):
        assert member_check(f, u, WeakCandidate(IntervalVector([g]), c), tol=1e-9)
    a, _, lo_hi, _ = r.capped()
    makers = []
    if math.isfinite(r.glo_min):
        makers.append(lambda d: Interval(r.glo_min - d, lo_hi))
    if math.isfinite(r.glo_max):
        makers.append(lambda d: Interval(r.glo_max + d, max(r.glo_max + d, lo_hi)))
    if math.isfinite(r.ghi_min):
        makers.append(lambda d: Interval(min(a, r.ghi_min - d), r.ghi_min - d))
    if math.isfinite(r.ghi_max):
        makers.append(lambda d: Interval(a, r.ghi_max + d))
    assert makers
    for k, delta in enumerate(rng.uniform(0.2, 2, size=100)):
        g = makers[k % len(makers)](delta)
        assert not member_check(f, u, WeakCandidate(IntervalVector([g]), c))


# ---------------------------------------------------------------- support IVF


def test_support_values():
    f, cand = corpus_get("figure_1"), C(0.5, (0.25, 1.5))
    assert support_ivf_eval(f, 1, cand, 1) == f.eval(1)
    h = support_ivf_eval(f, 1, cand, 2)
    assert (h.lo, h.hi) == pytest.approx((-0.25, 1.0))
    assert h.lo <= f.eval(2).lo and h.hi <= f.eval(2).hi
    with pytest.raises(OutOfDomain):
        support_ivf_eval(f, 1, cand, 3)


# ---------------------------------------------------------------- Fréchet lower subgradients


def test_frechet_lower_examples():
    assert frechet_lower_member_check(corpus_get("quad_shift"), 0, V((0, 0)))
    assert frechet_lower_member_check(corpus_get("linear_2_3"), 0.5, V((2, 3)))
    assert not frechet_lower_member_check(corpus_get("neg_abs"), 0, V((0, 0)))
    assert not frechet_lower_member_check(corpus_get("example_3_1"), 0, V((1, 2)))


def test_weak_from_frechet_example():
    cert = weak_from_frechet(corpus_get("quad_shift"), 0, V((0, 0)), 0.1)
    assert cert.candidate.c == 0.1 and cert.radius > 0 and cert.membership


def test_weak_from_frechet_requires_precondition():
    with pytest.raises(PreconditionError):
        weak_from_frechet(corpus_get("example_3_1"), 0, V((1, 2)), 0.1)


@pytest.mark.parametrize("name, u, g", SMOOTH + [("example_3_1", 0.0, V((0, 1))), ("figure_1", 1.0, V((0, 2)))])
@pytest.mark.parametrize("eps", [0.01, 0.1, 1.0])
def test_certified_frechet_gives_weak_member(name, u, g, eps):
    f = corpus_get(name)
    if not frechet_lower_member_check(f, u, g):
        pytest.skip("not certified")
    cert = weak_from_frechet(f, u, g, eps)
    assert cert.membership.member


@pytest.mark.parametrize("name, u, g", SMOOTH)
def test_negated_derivative_is_frechet_lower(name, u, g):
    f = corpus_get(name)
    assert max(frechet_residual(f, u, g)[-2:]) < 1e-6
    neg_g = IntervalVector(Interval(-x.hi, -x.lo) for x in g)
    assert frechet_lower_member_check(negate(f), u, neg_g)


# ---------------------------------------------------------------- derivative as weak subgradient


@pytest.mark.parametrize("name, u, g", SMOOTH)
@pytest.mark.parametrize("c", [0.0, 0.5, 1.0])
def test_derivative_is_weak_subgradient(name, u, g, c):
    assert member_check(corpus_get(name), u, WeakCandidate(g, c))


def test_derivative_fails_for_concave_entry():
    # the derivative of the log entry at an interior point is not a weak
    # subgradient with c = 0: the function bends below its tangent
    f, u = corpus_get("log_example"), 1.5
    g = V((1 / u, 2 / u))
    assert max(frechet_residual(f, u, g)[-2:]) < 1e-5
    assert not member_check(f, u, WeakCandidate(g, 0.0))


def _linearisation(f, u, g):
    (lo, hi), = f.domain
    return linear_ivf(g, ((lo - u, hi - u),))


@pytest.mark.parametrize("name, u, g", SMOOTH)
def test_subdifferential_matches_linearisation(name, u, g):
    f = corpus_get(name)
    lin = _linearisation(f, u, g)
    steps = np.arange(-2, 3.25, 0.25)
    for c in (0.0, 0.5, 1.0):
        for a in steps:
            for b in steps[steps >= a]:
                cand = C(c, (g[0].lo + a, g[0].hi + b))
                assert bool(member_check(f, u, cand)) == bool(member_check(lin, 0, cand))


def test_linearisation_disagrees_for_concave_entry():
    f, u = corpus_get("log_example"), 1.5
    g = V((1 / u, 2 / u))
    lin = _linearisation(f, u, g)
    cand = WeakCandidate(g, 0.0)
    assert member_check(lin, 0, cand) and not member_check(f, u, cand)


# ---------------------------------------------------------------- lower Lipschitz data


def test_lipschitz_examples():
    assert lower_lipschitz_estimate(corpus_get("constant"), 0.2).global_L == 0
    assert lower_lipschitz_estimate(corpus_get("example_3_1"), 0).global_L == pytest.approx(0, abs=1e-12)
    log = lower_lipschitz_estimate(corpus_get("log_example"), 1.5)
    assert 0 < log.global_L <= 2
    cusp = lower_lipschitz_estimate(corpus_get("sqrt_cusp"), 0)
    assert cusp.diverging and cusp.global_L is None


def test_equivalence_examples():
    rep = equivalence_report(corpus_get("example_3_1"), 0)
    assert rep.weak_subdiff_nonempty and rep.lower_lipschitz and rep.certificate_exists
    cusp = equivalence_report(corpus_get("sqrt_cusp"), 0)
    assert not (cusp.weak_subdiff_nonempty or cusp.lower_lipschitz or cusp.certificate_exists)
    assert cusp.agree and cusp.caveats
    d = rep.as_dict()
    assert d["agree"] and d["witness"]["kind"] == "region"


@pytest.mark.parametrize("name", [n for n in corpus_names() if corpus_get(n).dim == 1])
def test_equivalence_agrees_at_midpoint(name):
    f = corpus_get(name)
    (lo, hi), = f.domain
    hi = min(hi, lo + 10)
    assert equivalence_report(f, (lo + hi) / 2).agree


def test_point_within_rounding_of_u_is_ignored():
    f = corpus_get("quad_shift")
    u = 0.17
    near = np.array([[u + 4e-17], [u + 5.551115123125783e-17], [0.5], [-0.5]])
    r = region_1d(f, u, 0.0, GridSpec(points=401))
    assert not r.empty and r.glo_min == pytest.approx(2 * u, abs=1e-6)
    assert member_check_scalar(f, u, C(0, (2 * u, 2 * u)), near[2:])
    assert _Sweep.build(f, u, points=near).t.shape[0] == 2
