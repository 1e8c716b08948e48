"""gH-weak subgradients: membership, exact 1-D regions, Fréchet-lower links, lower Lipschitz data.

A pair ``(G, c)`` is a weak subgradient of ``f`` at ``u`` when, for every
``y`` in the domain,

    Gᵀ ⊙ (y-u) ⊖gH [c‖y-u‖, c‖y-u‖]  ⪯  f(y) ⊖gH f(u).

Everything here sweeps a finite grid in place of "every y".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError, OutOfDomain, PreconditionError, TheoremViolation
from .grid import GridSpec
from .interval import DEFAULT_TOL, Interval, IntervalVector, add, gh_sub, inner_product, preceq
from .ivf import DEFAULT_RADII, Ivf, as_vector, shell_points

LIMIT_TOL = 1e-6


@dataclass(frozen=True)
class WeakCandidate:
    g: IntervalVector
    c: float

    def __post_init__(self) -> None:
        if not isinstance(self.g, IntervalVector):
            object.__setattr__(self, "g", IntervalVector(self.g))
        if not self.c >= 0 or math.isinf(self.c):
            raise ValueError(f"c must be a finite non-negative real, got {self.c!r}")
        object.__setattr__(self, "c", float(self.c))

    @classmethod
    def of(cls, c: float, *pairs: Sequence[float]) -> "WeakCandidate":
        return cls(IntervalVector.of(*pairs), c)

    @property
    def dim(self) -> int:
        return len(self.g)


@dataclass
class _Sweep:
    """Grid differences around ``u`` shared by the membership-style checks."""

    points: np.ndarray
    t: np.ndarray
    dist: np.ndarray
    d_lo: np.ndarray
    d_hi: np.ndarray
    base: Interval
    scale: float = 0.0

    @classmethod
    def build(cls, f: Ivf, u, grid: GridSpec | None = None, points: np.ndarray | None = None) -> "_Sweep":
        uv = as_vector(u, f.dim)
        if not f.contains(uv.reshape(1, -1))[0]:
            raise OutOfDomain(uv, f.name)
        pts = f.grid(grid, focal=uv) if points is None else np.asarray(points, dtype=float).reshape(-1, f.dim)
        t = pts - uv
        dist = np.linalg.norm(t, axis=1)
        # points within rounding of u carry no information and wreck the quotients
        keep = dist > 64 * np.finfo(float).eps * max(1.0, float(np.linalg.norm(uv)))
        pts, t, dist = pts[keep], t[keep], dist[keep]
        base_lo, base_hi = f.endpoints(uv.reshape(1, -1))
        lo, hi = f.endpoints(pts)
        a, b = lo - base_lo[0], hi - base_hi[0]
        scale = float(max(np.max(np.abs(lo), initial=0.0), np.max(np.abs(hi), initial=0.0), abs(base_lo[0]), abs(base_hi[0])))
        base = Interval(float(base_lo[0]), float(base_hi[0]))
        return cls(pts, t, dist, np.minimum(a, b), np.maximum(a, b), base, scale)

    def linear(self, g: IntervalVector) -> tuple[np.ndarray, np.ndarray]:
        if len(g) != self.t.shape[1]:
            raise DimensionError(f"candidate has dimension {len(g)}, function has {self.t.shape[1]}")
        glo = np.array([x.lo for x in g])
        ghi = np.array([x.hi for x in g])
        a, b = self.t * glo, self.t * ghi
        return np.minimum(a, b).sum(axis=1), np.maximum(a, b).sum(axis=1)

    def restrict(self, mask: np.ndarray) -> "_Sweep":
        return _Sweep(self.points[mask], self.t[mask], self.dist[mask], self.d_lo[mask], self.d_hi[mask], self.base, self.scale)

    def quotient_slack(self) -> float:
        """Rounding error of ``Δ/t`` at the closest grid point."""
        if self.dist.size == 0:
            return 0.0
        return 8 * np.finfo(float).eps * max(self.scale, 1.0) / float(np.min(self.dist))


@dataclass(frozen=True)
class MemberResult:
    member: bool
    witness: tuple[float, ...] | None = None
    violation: float = 0.0
    checked: int = 0

    def __bool__(self) -> bool:
        return self.member


def _member_on(sweep: _Sweep, cand: WeakCandidate, tol: float) -> MemberResult:
    l_lo, l_hi = sweep.linear(cand.g)
    shift = cand.c * sweep.dist
    excess = np.maximum((l_lo - shift) - sweep.d_lo, (l_hi - shift) - sweep.d_hi)
    if excess.size == 0:
        return MemberResult(True, checked=0)
    k = int(np.argmax(excess))
    if excess[k] > tol:
        return MemberResult(False, tuple(float(v) for v in sweep.points[k]), float(excess[k]), excess.size)
    return MemberResult(True, violation=float(max(excess[k], 0.0)), checked=excess.size)


def member_check(f: Ivf, u, cand: WeakCandidate, grid: GridSpec | None = None, tol: float = DEFAULT_TOL) -> MemberResult:
    """Test ``cand ∈ ∂ʷf(u)`` on the grid; on failure the worst violating ``y`` is returned."""
    if cand.dim != f.dim:
        raise DimensionError(f"candidate has dimension {cand.dim}, {f.name} has {f.dim}")
    return _member_on(_Sweep.build(f, u, grid), cand, tol)


def member_checker(f: Ivf, u, grid: GridSpec | None = None, tol: float = DEFAULT_TOL):
    """``member_check`` with the grid sweep built once, for testing many candidates at one ``u``."""
    sweep = _Sweep.build(f, u, grid)

    def check(cand: WeakCandidate) -> MemberResult:
        if cand.dim != f.dim:
            raise DimensionError(f"candidate has dimension {cand.dim}, {f.name} has {f.dim}")
        return _member_on(sweep, cand, tol)

    return check


def member_check_scalar(f: Ivf, u, cand: WeakCandidate, points) -> bool:
    """Reference membership test built from the scalar interval operations (slow)."""
    uv = as_vector(u, f.dim)
    fu = f.eval(uv)
    for y in np.asarray(points, dtype=float).reshape(-1, f.dim):
        t = y - uv
        d = float(np.linalg.norm(t))
        if d == 0:
            continue
        left = gh_sub(inner_product(t, cand.g), Interval(cand.c * d, cand.c * d))
        if not preceq(left, gh_sub(f.eval(y), fu), DEFAULT_TOL):
            return False
    return True


# ---------------------------------------------------------------- 1-D regions


@dataclass(frozen=True)
class Region1D:
    """Admissible ``(g_lo, g_hi)`` for a fixed ``c`` in one dimension.

    ``glo_min <= g_lo <= glo_max`` and ``ghi_min <= g_hi <= ghi_max``,
    intersected with ``g_lo <= g_hi``.  Bounds may be infinite.
    """

    glo_min: float
    glo_max: float
    ghi_min: float
    ghi_max: float
    empty: bool
    c: float
    u: float
    min_step: float | None = None
    # collapsed coordinates (bounds crossed by rounding only) are pinned to one value
    glo_pin: float | None = None
    ghi_pin: float | None = None

    @property
    def g_lo(self) -> Interval | None:
        return Interval(self.glo_min, self.glo_max) if self.glo_min <= self.glo_max else None

    @property
    def g_hi(self) -> Interval | None:
        return Interval(self.ghi_min, self.ghi_max) if self.ghi_min <= self.ghi_max else None

    @property
    def bounded(self) -> bool:
        return all(math.isfinite(v) for v in (self.glo_min, self.glo_max, self.ghi_min, self.ghi_max))

    def effective(self) -> tuple[float, float, float, float]:
        """Bounds after pinning and imposing ``g_lo <= g_hi``."""
        a, b = (self.glo_pin, self.glo_pin) if self.glo_pin is not None else (self.glo_min, self.glo_max)
        c, d = (self.ghi_pin, self.ghi_pin) if self.ghi_pin is not None else (self.ghi_min, self.ghi_max)
        return a, min(b, d), max(c, a), d

    def contains(self, g: Interval, tol: float = 0.0) -> bool:
        if self.empty:
            return False
        return (
            self.glo_min - tol <= g.lo <= self.glo_max + tol
            and self.ghi_min - tol <= g.hi <= self.ghi_max + tol
        )

    def capped(self, pad: float = 1.0) -> tuple[float, float, float, float]:
        """Effective bounds with infinite sides replaced by finite stand-ins."""
        a, b, c, d = self.effective()
        finite = [v for v in (a, b, c, d) if math.isfinite(v)] or [0.0]
        low, high = min(finite) - pad, max(finite) + pad
        fix = lambda v: low if v == -math.inf else high if v == math.inf else v  # noqa: E731
        return fix(a), fix(b), fix(c), fix(d)

    def corners(self, pad: float = 1.0) -> list[Interval]:
        if self.empty:
            return []
        a, b, c, d = self.capped(pad)
        out = []
        for lo in (a, b):
            for hi in (c, d):
                if lo <= hi:
                    out.append(Interval(lo, hi))
        return out

    def sample(self, rng: np.random.Generator, n: int, pad: float = 1.0) -> list[Interval]:
        """Uniform samples from the (capped) admissible set."""
        if self.empty:
            return []
        a, b, c, d = self.capped(pad)
        out: list[Interval] = []
        while len(out) < n:
            lo = rng.uniform(a, b, size=4 * n)
            hi = rng.uniform(c, d, size=4 * n)
            ok = lo <= hi
            out.extend(Interval(x, y) for x, y in zip(lo[ok], hi[ok]))
            if not np.any(ok):  # degenerate sliver: fall back to corners
                out.extend(self.corners(pad))
        return out[:n]

    def as_dict(self) -> dict:
        return {
            "c": self.c,
            "u": self.u,
            "g_lo": [self.glo_min, self.glo_max],
            "g_hi": [self.ghi_min, self.ghi_max],
            "empty": self.empty,
            "min_step": self.min_step,
        }


def _region_on(sweep: _Sweep, u: float, c: float, tol: float, min_step: float | None) -> Region1D:
    t = sweep.t[:, 0]
    pos, neg = t > 0, t < 0
    inf = math.inf
    glo_max = float(np.min(sweep.d_lo[pos] / t[pos] + c)) if np.any(pos) else inf
    ghi_max = float(np.min(sweep.d_hi[pos] / t[pos] + c)) if np.any(pos) else inf
    s = -t[neg]
    glo_min = float(np.max((sweep.d_hi[neg] + c * s) / t[neg])) if np.any(neg) else -inf
    ghi_min = float(np.max((sweep.d_lo[neg] + c * s) / t[neg])) if np.any(neg) else -inf
    # the bounds are difference quotients, so cancellation error grows like eps/t
    tol = tol + sweep.quotient_slack()
    empty = glo_min > glo_max + tol or ghi_min > ghi_max + tol or glo_min > ghi_max + tol
    glo_pin = ghi_pin = None
    if not empty:
        if glo_min > glo_max:
            glo_pin = _pin(t, c, sweep.d_lo, sweep.d_hi, glo_max, glo_min)
        if ghi_min > ghi_max:
            ghi_pin = _pin(t, c, sweep.d_hi, sweep.d_lo, ghi_max, ghi_min)
    return Region1D(glo_min, glo_max, ghi_min, ghi_max, bool(empty), float(c), float(u), min_step, glo_pin, ghi_pin)


def _pin(t: np.ndarray, c: float, d_pos: np.ndarray, d_neg: np.ndarray, a: float, b: float) -> float:
    """Value in ``[a, b]`` with the smallest worst-case constraint excess.

    For ``t > 0`` the constraint is ``g t - c|t| <= d_pos``, for ``t < 0`` it is
    ``g t - c|t| <= d_neg``; the excess is convex in ``g``.
    """
    cands = np.linspace(a, b, 65)
    rhs = np.where(t > 0, d_pos, d_neg) + c * np.abs(t)
    excess = np.max(cands[:, None] * t[None, :] - rhs[None, :], axis=1)
    return float(cands[int(np.argmin(excess))])


def region_1d(f: Ivf, u: float, c: float, grid: GridSpec | None = None, tol: float = DEFAULT_TOL) -> Region1D:
    """All ``(g_lo, g_hi)`` with ``([g_lo, g_hi], c) ∈ ∂ʷf(u)`` on the grid, for one fixed ``c``."""
    if f.dim != 1:
        raise DimensionError("exact regions are only available in one dimension")
    if c < 0:
        raise ValueError("c must be non-negative")
    uval = float(as_vector(u, 1)[0])
    spec = grid or GridSpec()
    sweep = _Sweep.build(f, uval, spec)
    return _region_on(sweep, uval, c, tol, spec.min_step())


def regions_1d(f: Ivf, u: float, cs: Sequence[float], grid: GridSpec | None = None, tol: float = DEFAULT_TOL) -> list[Region1D]:
    if f.dim != 1:
        raise DimensionError("exact regions are only available in one dimension")
    uval = float(as_vector(u, 1)[0])
    spec = grid or GridSpec()
    sweep = _Sweep.build(f, uval, spec)
    return [_region_on(sweep, uval, float(c), tol, spec.min_step()) for c in cs]


# ---------------------------------------------------------------- support IVF


def support_ivf_eval(f: Ivf, u, cand: WeakCandidate, y) -> Interval:
    """``f(u) ⊕ Gᵀ⊙(y-u) ⊖gH [c‖y-u‖, c‖y-u‖]``."""
    uv = as_vector(u, f.dim)
    yv = as_vector(y, f.dim)
    if not f.contains(yv.reshape(1, -1))[0]:
        raise OutOfDomain(yv, f.name)
    t = yv - uv
    d = float(np.linalg.norm(t))
    return gh_sub(add(f.eval(uv), inner_product(t, cand.g)), Interval(cand.c * d, cand.c * d))


def support_sweep(f: Ivf, u, cand: WeakCandidate, points: np.ndarray):
    """Vectorised support IVF; returns ``(phi_lo, phi_hi, h_lo, h_hi)`` on ``points``."""
    uv = as_vector(u, f.dim)
    pts = np.asarray(points, dtype=float).reshape(-1, f.dim)
    phi_lo, phi_hi = f.endpoints(pts)
    base = f.eval(uv)
    t = pts - uv
    d = np.linalg.norm(t, axis=1)
    glo = np.array([x.lo for x in cand.g])
    ghi = np.array([x.hi for x in cand.g])
    a, b = t * glo, t * ghi
    h_lo = base.lo + np.minimum(a, b).sum(axis=1) - cand.c * d
    h_hi = base.hi + np.maximum(a, b).sum(axis=1) - cand.c * d
    return phi_lo, phi_hi, h_lo, h_hi


# ---------------------------------------------------------------- Fréchet lower subdifferential


@dataclass(frozen=True)
class FrechetLowerResult:
    member: bool
    infima: tuple[Interval, ...]
    radii: tuple[float, ...]

    def __bool__(self) -> bool:
        return self.member


def _quotient_shell(f: Ivf, uv: np.ndarray, g: IntervalVector, pts: np.ndarray, base) -> tuple[np.ndarray, np.ndarray]:
    lo, hi = f.endpoints(pts)
    a, b = lo - base.lo, hi - base.hi
    d_lo, d_hi = np.minimum(a, b), np.maximum(a, b)
    t = pts - uv
    glo = np.array([x.lo for x in g])
    ghi = np.array([x.hi for x in g])
    p, q = t * glo, t * ghi
    l_lo, l_hi = np.minimum(p, q).sum(axis=1), np.maximum(p, q).sum(axis=1)
    e1, e2 = d_lo - l_lo, d_hi - l_hi
    dist = np.linalg.norm(t, axis=1)
    return np.minimum(e1, e2) / dist, np.maximum(e1, e2) / dist


def frechet_lower_member_check(
    f: Ivf, u, g: IntervalVector, radii: Sequence[float] = DEFAULT_RADII, tol: float = LIMIT_TOL
) -> FrechetLowerResult:
    """``0 ⪯ liminf (1/‖y-u‖) ⊙ ((f(y) ⊖gH f(u)) ⊖gH gᵀ⊙(y-u))``.

    The liminf is the endpoint-wise infimum over each shell ``‖y-u‖ = r``,
    followed by the limit along ``radii``; the two smallest radii decide.
    """
    uv = as_vector(u, f.dim)
    if len(g) != f.dim:
        raise DimensionError(f"G has dimension {len(g)}, {f.name} has {f.dim}")
    base = f.eval(uv)
    infima, used = [], []
    for r in radii:
        pts = shell_points(f, uv, r)
        if pts.shape[0] == 0:
            continue
        q_lo, q_hi = _quotient_shell(f, uv, g, pts, base)
        infima.append(Interval(float(np.min(q_lo)), float(np.min(q_hi))))
        used.append(float(r))
    if len(infima) < 2:
        return FrechetLowerResult(False, tuple(infima), tuple(used))
    ok = all(inf.lo >= -tol for inf in infima[-2:])
    return FrechetLowerResult(bool(ok), tuple(infima), tuple(used))


@dataclass(frozen=True)
class FrechetCertificate:
    candidate: WeakCandidate
    radius: float
    membership: MemberResult


def weak_from_frechet(
    f: Ivf,
    u,
    g: IntervalVector,
    eps: float,
    grid: GridSpec | None = None,
    tol: float = DEFAULT_TOL,
    limit_tol: float = LIMIT_TOL,
) -> FrechetCertificate:
    """Turn a Fréchet lower subgradient into the weak subgradient ``(g, eps)`` near ``u``.

    The ball is the largest grid radius on which the residual quotient stays
    above ``-eps``; membership is then re-checked on that ball.
    """
    if eps < 0:
        raise ValueError("eps must be non-negative")
    if not frechet_lower_member_check(f, u, g, tol=limit_tol):
        raise PreconditionError(f"G={g!r} is not a Fréchet lower subgradient of {f.name} at u={u}")
    sweep = _Sweep.build(f, u, grid)
    l_lo, l_hi = sweep.linear(g)
    e1, e2 = sweep.d_lo - l_lo, sweep.d_hi - l_hi
    low = np.minimum(e1, e2)
    bad = low < -eps * sweep.dist - tol
    radius = float(np.min(sweep.dist[bad])) if np.any(bad) else math.inf
    ball = sweep.restrict(sweep.dist < radius)
    cand = WeakCandidate(g, eps)
    result = _member_on(ball, cand, tol)
    if not result:
        raise TheoremViolation(
            f"(G, {eps}) failed membership at y={result.witness} inside the certified ball of radius {radius}"
        )
    return FrechetCertificate(cand, radius, result)


# ---------------------------------------------------------------- lower Lipschitz


@dataclass(frozen=True)
class LipschitzReport:
    local_L: float | None
    global_L: float | None
    certificate: tuple[float, Interval] | None
    diverging: bool = False
    shell_ratios: tuple[float, ...] = field(default=())

    def as_dict(self) -> dict:
        cert = None
        if self.certificate is not None:
            p, q = self.certificate
            cert = {"p": p, "Q": [q.lo, q.hi]}
        return {
            "local_L": self.local_L,
            "global_L": self.global_L,
            "certificate": cert,
            "diverging": self.diverging,
            "shell_ratios": list(self.shell_ratios),
        }


def _diverges(ratios: Sequence[float]) -> bool:
    # a lower-Lipschitz ratio settles as y -> u; a blow-up keeps growing per decade
    if len(ratios) < 3:
        return False
    last, earlier = ratios[-1], ratios[-3]
    return last > 1.0 and last >= 2.0 * earlier


def lower_lipschitz_estimate(f: Ivf, u, grid: GridSpec | None = None) -> LipschitzReport:
    """Smallest L with ``-L‖y-u‖ ⪯ f(y) ⊖gH f(u)`` on the grid, plus a growth certificate."""
    spec = grid or GridSpec()
    uv = as_vector(u, f.dim)
    sweep = _Sweep.build(f, uv, spec)
    if sweep.dist.size == 0:
        return LipschitzReport(0.0, 0.0, (0.0, sweep.base))
    ratio = np.maximum(0.0, -sweep.d_lo / sweep.dist)
    offsets = spec.focal_offsets()
    shells = []
    for r in offsets:
        on = np.isclose(sweep.dist, r, rtol=1e-6, atol=0.0)
        if np.any(on):
            shells.append(float(np.max(ratio[on])))
    if _diverges(shells):
        return LipschitzReport(None, None, None, True, tuple(shells))
    reach = offsets[0] if offsets else 0.1
    near = sweep.dist <= reach * (1 + 1e-9)
    local = float(np.max(ratio[near])) if np.any(near) else 0.0
    global_l = float(np.max(ratio))
    unorm = float(np.linalg.norm(uv))
    q = gh_sub(sweep.base, Interval(global_l * unorm, global_l * unorm))
    return LipschitzReport(local, global_l, (global_l, q), False, tuple(shells))


def certificate_holds(f: Ivf, p: float, q: Interval, grid: GridSpec | None = None, focal=None, tol: float = DEFAULT_TOL) -> bool:
    """Sweep ``[-p‖y‖, -p‖y‖] ⊕ Q ⪯ f(y)``."""
    pts = f.grid(grid, focal=focal)
    lo, hi = f.endpoints(pts)
    ny = np.linalg.norm(pts, axis=1)
    return bool(np.all(q.lo - p * ny <= lo + tol) and np.all(q.hi - p * ny <= hi + tol))


@dataclass(frozen=True)
class EquivalenceReport:
    weak_subdiff_nonempty: bool
    lower_lipschitz: bool
    certificate_exists: bool
    lipschitz: LipschitzReport
    witness: dict | None
    caveats: tuple[str, ...]

    @property
    def agree(self) -> bool:
        return self.weak_subdiff_nonempty == self.lower_lipschitz == self.certificate_exists

    def as_dict(self) -> dict:
        return {
            "weak_subdiff_nonempty": self.weak_subdiff_nonempty,
            "lower_lipschitz": self.lower_lipschitz,
            "certificate_exists": self.certificate_exists,
            "agree": self.agree,
            "lipschitz": self.lipschitz.as_dict(),
            "witness": self.witness,
            "caveats": list(self.caveats),
        }


DEFAULT_C_LIST = (0.0, 0.25, 0.5, 1.0, 2.0)


def equivalence_report(
    f: Ivf, u, grid: GridSpec | None = None, c_probe: Sequence[float] = DEFAULT_C_LIST, tol: float = DEFAULT_TOL
) -> EquivalenceReport:
    """Evaluate the three equivalent conditions independently:
    (a) a weak subgradient exists, (b) f is lower Lipschitz at u,
    (c) f is locally lower Lipschitz with an affine-in-‖y‖ minorant."""
    spec = grid or GridSpec()
    uv = as_vector(u, f.dim)
    lip = lower_lipschitz_estimate(f, uv, spec)
    caveats = ["finite grid: a lower Lipschitz constant always exists on finitely many points; "
               "divergence is judged from the growth of the ratio over the focal shells"]
    if not spec.focal:
        caveats.append("focal refinement disabled: divergence near u cannot be detected")

    probes = list(dict.fromkeys(float(c) for c in c_probe))
    if lip.global_L is not None and lip.global_L not in probes:
        probes.append(lip.global_L)

    witness = None
    if f.dim == 1:
        for region in regions_1d(f, uv[0], probes, spec, tol):
            if not region.empty:
                witness = {"kind": "region", **region.as_dict()}
                break
    else:
        sweep = _Sweep.build(f, uv, spec)
        for c in probes:
            cand = WeakCandidate(IntervalVector.zeros(f.dim), c)
            if _member_on(sweep, cand, tol):
                witness = {"kind": "candidate", "g": [[0.0, 0.0]] * f.dim, "c": c}
                break
    a = witness is not None
    b = lip.global_L is not None
    c_flag = False
    if lip.certificate is not None and lip.local_L is not None:
        p, q = lip.certificate
        c_flag = certificate_holds(f, p, q, spec, focal=uv, tol=tol)
    return EquivalenceReport(a, b, c_flag, lip, witness, tuple(caveats))
