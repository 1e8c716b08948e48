import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import _lemmas as lem
from ivfopt.errors import DimensionError, EmptyFamily, ExtendedArithmetic, InvalidInterval
from ivfopt.interval import (
    NEG_INF,
    POS_INF,
    ZERO,
    Dominance,
    Interval,
    IntervalVector,
    add,
    dominance,
    family_inf_sup,
    gh_sub,
    inner_product,
    moore_sub,
    mul,
    norm,
    parse_interval,
    parse_interval_vector,
    preceq,
    scalar_mul,
    strictly_preceq,
    subseteq,
    vec_elementwise,
    vec_norm,
    vec_preceq,
    width,
)

I = Interval
reals = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@st.composite
def intervals(draw):
    a, b = draw(reals), draw(reals)
    return I(min(a, b), max(a, b))


# ---------------------------------------------------------------- construction


def test_rejects_inverted_and_nan():
    with pytest.raises(InvalidInterval):
        I(1, 0)
    with pytest.raises(InvalidInterval):
        I(math.nan, 1)


def test_arithmetic_on_infinite_interval_is_an_error():
    with pytest.raises(ExtendedArithmetic):
        add(POS_INF, I(0, 1))
    with pytest.raises(ExtendedArithmetic):
        gh_sub(I(0, 1), NEG_INF)


def test_parse_interval_forms():
    assert parse_interval("0.25,1.5") == I(0.25, 1.5)
    assert parse_interval("[-1, 2]") == I(-1, 2)
    assert parse_interval("3") == I(3, 3)
    assert parse_interval_vector("0,1;2,3") == IntervalVector.of((0, 1), (2, 3))
    with pytest.raises(InvalidInterval):
        parse_interval("1,0")


# ---------------------------------------------------------------- worked values


@pytest.mark.parametrize(
    "op, x, y, expected",
    [
        (add, I(1, 2), I(0, 1), I(1, 3)),
        (add, I(-1, 2), I(-2, -1), I(-3, 1)),
        (moore_sub, I(1, 2), I(0, 1), I(0, 2)),
        (moore_sub, I(1, 1), I(1, 1), I(0, 0)),
        (mul, I(-1, 2), I(3, 4), I(-4, 8)),
        (mul, I(0, 0), I(-3, 5), I(0, 0)),
        (gh_sub, I(5, 7), I(1, 2), I(4, 5)),
        (gh_sub, I(1, 5), I(2, 3), I(-1, 2)),
    ],
)
def test_binary_examples(op, x, y, expected):
    assert op(x, y) == expected


def test_scalar_mul_examples():
    assert scalar_mul(-1, I(2, 5)) == I(-5, -2)
    assert scalar_mul(0, I(-3, 4)) == ZERO
    assert scalar_mul(2, I(-1, 3)) == I(-2, 6)


def test_dominance_examples():
    assert dominance(I(0, 1), I(1, 2)) is Dominance.STRICTLY_DOMINATES
    assert dominance(I(0, 3), I(1, 2)) is Dominance.NOT_COMPARABLE
    assert dominance(I(-1, 4), I(-1, 4)) is Dominance.EQUAL
    assert strictly_preceq(I(0, 1), I(1, 2))
    assert not strictly_preceq(I(1, 2), I(1, 2))


def test_dominance_with_infinite_extremes():
    assert preceq(NEG_INF, I(0, 1))
    assert preceq(I(0, 1), POS_INF)


def test_preceq_and_subseteq_examples():
    assert preceq(I(0, 1), I(0, 1))
    assert preceq(I(0, 1 + 1e-12), I(0, 1), 1e-9)
    assert not preceq(I(0, 2), I(0, 1))
    assert subseteq(I(1, 2), I(0, 3))
    assert not subseteq(I(0, 3), I(1, 2))


def test_width_and_norms():
    assert width(I(1, 4)) == 3
    assert width(I(-2, 2)) == 4
    assert norm(I(-3, 2)) == 3
    assert vec_norm(IntervalVector.of((-3, 2), (0, 1))) == 4


def test_inner_product_examples():
    assert inner_product([1, -1], IntervalVector.of((1, 2), (0, 3))) == I(-2, 2)
    assert inner_product([0, 0], IntervalVector.of((1, 2), (0, 3))) == ZERO
    assert inner_product([2], IntervalVector.of((-1, 1))) == I(-2, 2)
    with pytest.raises(DimensionError):
        inner_product([1, 2], IntervalVector.of((0, 1)))


def test_family_inf_sup_examples():
    assert family_inf_sup([I(0, 2), I(1, 1)]) == (I(0, 1), I(1, 2))
    assert family_inf_sup([I(-1, 0), I(0, 3), I(2, 2)]) == (I(-1, 0), I(2, 3))
    with pytest.raises(EmptyFamily):
        family_inf_sup([])


def test_vec_elementwise():
    p = IntervalVector.of((5, 7), (1, 1))
    assert vec_elementwise("⊖gH", p, p) == IntervalVector.zeros(2)
    assert vec_elementwise("⊕", IntervalVector.of((0, 1)), IntervalVector.of((1, 2))) == IntervalVector.of((1, 3))
    assert vec_elementwise("gh_sub", IntervalVector.of((5, 7)), IntervalVector.of((1, 2))) == IntervalVector.of((4, 5))
    with pytest.raises(DimensionError):
        vec_elementwise("add", p, IntervalVector.of((0, 1)))
    assert vec_preceq(IntervalVector.of((0, 1)), IntervalVector.of((0, 2)))


# ---------------------------------------------------------------- algebraic laws


@given(intervals())
def test_gh_self_difference_is_zero(x):
    assert gh_sub(x, x) == ZERO


@given(intervals(), intervals())
def test_addition_commutes(x, y):
    assert add(x, y) == add(y, x)


@given(intervals(), intervals())
def test_gh_difference_antisymmetric(x, y):
    assert gh_sub(y, x) == scalar_mul(-1, gh_sub(x, y))


@given(intervals(), intervals())
def test_gh_difference_inside_moore_difference(x, y):
    assert subseteq(gh_sub(x, y), moore_sub(x, y), 1e-12)


@given(intervals(), intervals())
def test_gh_difference_recovers_wider_operand(x, y):
    wide, narrow = (x, y) if width(x) >= width(y) else (y, x)
    back = add(narrow, gh_sub(wide, narrow))
    assert lem.is_close_interval(back, wide, 1e-12)


@given(intervals(), intervals())
def test_norm_triangle_inequality(x, y):
    assert norm(add(x, y)) <= norm(x) + norm(y) + 1e-12


@given(intervals(), intervals(), intervals())
def test_dominance_is_transitive(x, y, z):
    if preceq(x, y) and preceq(y, z):
        assert preceq(x, z)


@given(intervals(), intervals())
def test_equal_iff_mutual_domination(x, y):
    assert (dominance(x, y) is Dominance.EQUAL) == (preceq(x, y) and preceq(y, x))


@given(intervals(), intervals())
def test_dominance_classification_is_consistent(x, y):
    d = dominance(x, y)
    if d in (Dominance.STRICTLY_DOMINATES, Dominance.DOMINATES):
        assert preceq(x, y)
    if d is Dominance.NOT_COMPARABLE:
        assert not preceq(x, y) and not preceq(y, x)


@given(st.lists(intervals(), min_size=1, max_size=8))
def test_inf_sup_bound_the_family(items):
    inf, sup = family_inf_sup(items)
    assert all(preceq(inf, x) and preceq(x, sup) for x in items)


@given(intervals(), intervals(), reals)
def test_scalar_mul_distributes_over_add(x, y, k):
    left = scalar_mul(k, add(x, y))
    right = add(scalar_mul(k, x), scalar_mul(k, y))
    assert lem.is_close_interval(left, right, 1e-11)


# ---------------------------------------------------------------- appendix identities (small runs; the
# 10 000-sample versions live in the acceptance suite)


@given(intervals(), intervals(), intervals(), st.floats(0, 10))
def test_eps_shift(w, y, z, eps):
    assume(lem.eps_shift(w, y, z, eps) is not None)
    assert lem.eps_shift(w, y, z, eps)


@given(intervals(), intervals(), intervals(), intervals())
def test_sum_difference_inclusion(x, y, z, w):
    assert lem.sum_difference_inclusion(x, y, z, w)


@given(intervals(), intervals(), intervals())
def test_negation_identity(w, y, z):
    assert lem.negation_identity(w, y, z)


@settings(max_examples=200)
@given(intervals(), intervals(), intervals(), intervals(), reals)
def test_conditional_parts(x, y, z, w, k):
    for outcome in (lem.part_i(x, y, z), lem.part_ii(x, y, z, w), lem.part_iii(x, y, k), lem.part_iv(x, y, k), lem.part_v(x, y, z)):
        assert outcome in (None, True)


@given(st.lists(reals, min_size=1, max_size=4), st.data())
def test_norm_bound(ys, data):
    c = IntervalVector(data.draw(intervals()) for _ in ys)
    assert lem.norm_bound(np.array(ys), c)
