"""Closed real intervals with Moore arithmetic, the gH-difference and dominance.

Intervals are immutable.  Endpoints may be infinite so that the completed
space can be ordered, but arithmetic only accepts finite operands.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionError, EmptyFamily, ExtendedArithmetic, InvalidInterval

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self) -> None:
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise InvalidInterval(f"NaN endpoint in [{lo}, {hi}]")
        if lo > hi:
            raise InvalidInterval(f"lower endpoint {lo!r} exceeds upper endpoint {hi!r}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, k: float) -> "Interval":
        return cls(k, k)

    def finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    def __iter__(self):
        yield self.lo
        yield self.hi

    def __repr__(self) -> str:
        return f"[{self.lo!r}, {self.hi!r}]"

    # operator sugar; the named functions below are the reference implementations
    def __add__(self, other: "Interval") -> "Interval":
        return add(self, other)

    def __sub__(self, other: "Interval") -> "Interval":
        return moore_sub(self, other)

    def __mul__(self, other: "Interval | float") -> "Interval":
        if isinstance(other, Interval):
            return mul(self, other)
        return scalar_mul(other, self)

    __rmul__ = __mul__

    def __neg__(self) -> "Interval":
        return scalar_mul(-1.0, self)


ZERO = Interval(0.0, 0.0)
POS_INF = Interval(math.inf, math.inf)
NEG_INF = Interval(-math.inf, -math.inf)


class Dominance(enum.Enum):
    EQUAL = "Equal"
    DOMINATES = "Dominates"
    STRICTLY_DOMINATES = "StrictlyDominates"
    DOMINATED_BY = "DominatedBy"
    STRICTLY_DOMINATED_BY = "StrictlyDominatedBy"
    NOT_COMPARABLE = "NotComparable"


def _require_finite(*xs: Interval) -> None:
    for x in xs:
        if not x.finite():
            raise ExtendedArithmetic(f"arithmetic on non-finite interval {x!r}")


def add(x: Interval, y: Interval) -> Interval:
    _require_finite(x, y)
    return Interval(x.lo + y.lo, x.hi + y.hi)


def moore_sub(x: Interval, y: Interval) -> Interval:
    _require_finite(x, y)
    return Interval(x.lo - y.hi, x.hi - y.lo)


def mul(x: Interval, y: Interval) -> Interval:
    _require_finite(x, y)
    products = (x.lo * y.lo, x.lo * y.hi, x.hi * y.lo, x.hi * y.hi)
    return Interval(min(products), max(products))


def scalar_mul(k: float, x: Interval) -> Interval:
    _require_finite(x)
    k = float(k)
    if k >= 0:
        # 0 * x gives +0.0/-0.0; normalise so ZERO compares cleanly
        return Interval(k * x.lo + 0.0, k * x.hi + 0.0)
    return Interval(k * x.hi, k * x.lo)


def gh_sub(p: Interval, q: Interval) -> Interval:
    """Generalized Hukuhara difference ``p ⊖gH q``."""
    _require_finite(p, q)
    a = p.lo - q.lo
    b = p.hi - q.hi
    return Interval(min(a, b), max(a, b))


def preceq(z: Interval, w: Interval, tol: float = 0.0) -> bool:
    """``z ⪯ w`` up to an absolute slack ``tol`` on each endpoint."""
    return z.lo <= w.lo + tol and z.hi <= w.hi + tol


def dominance(z: Interval, w: Interval) -> Dominance:
    """Classify ``z`` against ``w`` under the endpoint-wise order.

    Infinite degenerate intervals behave as the extremes of the completed
    space: every finite interval strictly dominates ``[+inf, +inf]`` and is
    strictly dominated by ``[-inf, -inf]``; plain float comparison already
    gives that.
    """
    forward = z.lo <= w.lo and z.hi <= w.hi
    backward = w.lo <= z.lo and w.hi <= z.hi
    if forward and backward:
        return Dominance.EQUAL
    if forward:
        strict = z.lo < w.lo or z.hi < w.hi
        return Dominance.STRICTLY_DOMINATES if strict else Dominance.DOMINATES
    if backward:
        strict = w.lo < z.lo or w.hi < z.hi
        return Dominance.STRICTLY_DOMINATED_BY if strict else Dominance.DOMINATED_BY
    return Dominance.NOT_COMPARABLE


def strictly_preceq(z: Interval, w: Interval) -> bool:
    return dominance(z, w) is Dominance.STRICTLY_DOMINATES


def subseteq(x: Interval, y: Interval, tol: float = 0.0) -> bool:
    return y.lo <= x.lo + tol and x.hi <= y.hi + tol


def width(a: Interval) -> float:
    _require_finite(a)
    return a.hi - a.lo


def norm(x: Interval) -> float:
    _require_finite(x)
    return max(abs(x.lo), abs(x.hi))


class IntervalVector(tuple):
    """An element of I(R)^n, stored as a tuple of :class:`Interval`."""

    def __new__(cls, items: Iterable[Interval]):
        items = tuple(items)
        if not items:
            raise DimensionError("an interval vector needs at least one component")
        for it in items:
            if not isinstance(it, Interval):
                raise TypeError(f"expected Interval, got {type(it).__name__}")
        return super().__new__(cls, items)

    @classmethod
    def of(cls, *pairs: Sequence[float]) -> "IntervalVector":
        return cls(Interval(lo, hi) for lo, hi in pairs)

    @classmethod
    def zeros(cls, n: int) -> "IntervalVector":
        return cls([ZERO] * n)

    @property
    def dim(self) -> int:
        return len(self)

    def __repr__(self) -> str:
        return "(" + ", ".join(repr(x) for x in self) + ")"

    def pairs(self) -> list[tuple[float, float]]:
        return [(x.lo, x.hi) for x in self]


def vec_norm(v: IntervalVector) -> float:
    return sum(norm(x) for x in v)


def inner_product(v: Sequence[float], g: IntervalVector) -> Interval:
    """``gᵀ ⊙ v`` for a real vector ``v``."""
    if len(v) != len(g):
        raise DimensionError(f"length mismatch: vector has {len(v)} entries, interval vector {len(g)}")
    acc = ZERO
    for vi, gi in zip(v, g):
        acc = add(acc, scalar_mul(vi, gi))
    return acc


_VEC_OPS = {"add": add, "sub": moore_sub, "gh_sub": gh_sub, "⊕": add, "⊖": moore_sub, "⊖gH": gh_sub}


def vec_elementwise(op: str, a: IntervalVector, b: IntervalVector) -> IntervalVector:
    try:
        fn = _VEC_OPS[op]
    except KeyError:
        raise ValueError(f"unknown element-wise operation {op!r}") from None
    if len(a) != len(b):
        raise DimensionError(f"length mismatch: {len(a)} vs {len(b)}")
    return IntervalVector(fn(x, y) for x, y in zip(a, b))


def vec_preceq(a: IntervalVector, b: IntervalVector, tol: float = 0.0) -> bool:
    if len(a) != len(b):
        raise DimensionError(f"length mismatch: {len(a)} vs {len(b)}")
    return all(preceq(x, y, tol) for x, y in zip(a, b))


def vec_scalar_mul(k: float, a: IntervalVector) -> IntervalVector:
    return IntervalVector(scalar_mul(k, x) for x in a)


def family_inf_sup(family: Iterable[Interval]) -> tuple[Interval, Interval]:
    """Endpoint-wise infimum and supremum of a nonempty family."""
    items = list(family)
    if not items:
        raise EmptyFamily("infimum/supremum of an empty family")
    inf = Interval(min(x.lo for x in items), min(x.hi for x in items))
    sup = Interval(max(x.lo for x in items), max(x.hi for x in items))
    return inf, sup


def parse_interval(text: str) -> Interval:
    """Parse ``"lo,hi"`` (brackets optional) into an interval."""
    body = text.strip().strip("[]()")
    parts = [p.strip() for p in body.split(",")]
    if len(parts) == 1:
        value = float(parts[0])
        return Interval(value, value)
    if len(parts) != 2:
        raise InvalidInterval(f"cannot parse interval from {text!r}")
    return Interval(float(parts[0]), float(parts[1]))


def parse_interval_vector(text: str) -> IntervalVector:
    return IntervalVector(parse_interval(chunk) for chunk in text.split(";") if chunk.strip())
