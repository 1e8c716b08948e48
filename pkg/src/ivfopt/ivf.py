"""Interval-valued functions over boxes, their text format and calculus probes."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DomainCoverageError,
    DomainMismatch,
    EndpointOrderViolation,
    ExpressionDomainError,
    IvfSyntaxError,
    OutOfDomain,
)
from .expr import Expr, parse_expr
from .grid import GridSpec, build_grid, finite_window
from .interval import Interval, IntervalVector, gh_sub, norm

ORDER_SLACK = 1e-12
AGREEMENT_TOL = 1e-9
DEFAULT_RADII = tuple(10.0 ** -k for k in range(1, 9))

Box = tuple[tuple[float, float], ...]


def as_points(y, dim: int) -> np.ndarray:
    arr = np.asarray(y, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(1, -1) if arr.shape[0] == dim else arr.reshape(-1, 1)
    if arr.shape[1] != dim:
        from .errors import DimensionError

        raise DimensionError(f"expected points of dimension {dim}, got {arr.shape[1]}")
    return arr


def as_vector(u, dim: int | None = None) -> np.ndarray:
    vec = np.atleast_1d(np.asarray(u, dtype=float)).reshape(-1)
    if dim is not None and vec.shape[0] != dim:
        from .errors import DimensionError

        raise DimensionError(f"expected a point of dimension {dim}, got {vec.shape[0]}")
    return vec


class Ivf:
    """Base class: an IVF on an axis-aligned box.

    Subclasses implement :meth:`_endpoints` for points already known to lie
    in the domain.
    """

    name: str
    dim: int
    domain: Box

    def contains(self, points: np.ndarray) -> np.ndarray:
        mask = np.ones(points.shape[0], dtype=bool)
        for i, (lo, hi) in enumerate(self.domain):
            mask &= (points[:, i] >= lo) & (points[:, i] <= hi)
        return mask

    def endpoints(self, points) -> tuple[np.ndarray, np.ndarray]:
        pts = as_points(points, self.dim)
        inside = self.contains(pts)
        if not np.all(inside):
            raise OutOfDomain(pts[int(np.argmin(inside))], self.name)
        return self._endpoints(pts)

    def _endpoints(self, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def eval(self, y) -> Interval:
        lo, hi = self.endpoints(as_vector(y, self.dim).reshape(1, -1))
        return Interval(float(lo[0]), float(hi[0]))

    __call__ = eval

    def is_interior(self, u) -> bool:
        vec = as_vector(u, self.dim)
        return all(lo < x < hi for x, (lo, hi) in zip(vec, self.domain))

    def grid(self, spec: GridSpec | None = None, focal=None) -> np.ndarray:
        spec = spec or GridSpec()
        return build_grid(self.domain, spec, None if focal is None else as_vector(focal, self.dim))


@dataclass(frozen=True)
class Region:
    """Axis-aligned box; each side may be open."""

    bounds: Box
    open_lo: tuple[bool, ...]
    open_hi: tuple[bool, ...]

    def contains(self, points: np.ndarray) -> np.ndarray:
        mask = np.ones(points.shape[0], dtype=bool)
        for i, (lo, hi) in enumerate(self.bounds):
            col = points[:, i]
            mask &= (col > lo) if self.open_lo[i] else (col >= lo)
            mask &= (col < hi) if self.open_hi[i] else (col <= hi)
        return mask


@dataclass(frozen=True)
class Piece:
    region: Region
    lower: Expr
    upper: Expr
    lower_text: str = ""
    upper_text: str = ""


@dataclass(frozen=True, eq=False)
class PiecewiseIvf(Ivf):
    name: str
    dim: int
    domain: Box
    pieces: tuple[Piece, ...]
    source: str = field(default="", repr=False)

    def _endpoints(self, points):
        lo = np.full(points.shape[0], np.nan)
        hi = np.full(points.shape[0], np.nan)
        pending = np.ones(points.shape[0], dtype=bool)
        for piece in self.pieces:
            hit = pending & piece.region.contains(points)
            if np.any(hit):
                sub = points[hit]
                lo[hit] = piece.lower.eval(sub)
                hi[hit] = piece.upper.eval(sub)
                pending &= ~hit
            if not np.any(pending):
                break
        if np.any(pending):
            raise DomainCoverageError(f"{self.name}: no piece covers y={tuple(points[int(np.argmax(pending))])}")
        return lo, hi

    def validate(self, spec: GridSpec | None = None) -> None:
        """Check coverage, endpoint order and agreement on piece overlaps."""
        spec = spec or GridSpec(focal=False)
        pts = _validation_grid(self, spec)
        covered = np.zeros(pts.shape[0], dtype=bool)
        first_lo = np.full(pts.shape[0], np.nan)
        first_hi = np.full(pts.shape[0], np.nan)
        for piece in self.pieces:
            hit = piece.region.contains(pts)
            if not np.any(hit):
                continue
            sub = pts[hit]
            try:
                lo = piece.lower.eval(sub)
                hi = piece.upper.eval(sub)
            except ExpressionDomainError as exc:
                raise ExpressionDomainError(f"{self.name}: {exc}") from None
            bad = lo > hi + ORDER_SLACK
            if np.any(bad):
                k = int(np.argmax(bad))
                raise EndpointOrderViolation(sub[k], float(lo[k]), float(hi[k]), self.name)
            seen = covered[hit]
            if np.any(seen):
                prev_lo = first_lo[hit][seen]
                prev_hi = first_hi[hit][seen]
                gap = np.maximum(np.abs(prev_lo - lo[seen]), np.abs(prev_hi - hi[seen]))
                if np.any(gap > AGREEMENT_TOL):
                    k = int(np.argmax(gap))
                    raise DomainCoverageError(
                        f"{self.name}: overlapping pieces disagree by {gap[k]:.3g} at y={tuple(sub[seen][k])}"
                    )
            fresh = hit.copy()
            fresh[hit] = ~seen
            first_lo[fresh] = lo[~seen]
            first_hi[fresh] = hi[~seen]
            covered |= hit
        if not np.all(covered):
            k = int(np.argmin(covered))
            raise DomainCoverageError(f"{self.name}: domain point y={tuple(pts[k])} is not covered by any piece")


def _validation_grid(f: PiecewiseIvf, spec: GridSpec) -> np.ndarray:
    pts = build_grid(f.domain, spec)
    # add every finite piece boundary so shared edges are exercised
    extra_axes = []
    for i, (dlo, dhi) in enumerate(f.domain):
        cuts = {b for p in f.pieces for b in p.region.bounds[i] if math.isfinite(b) and dlo <= b <= dhi}
        extra_axes.append(sorted(cuts))
    if f.dim == 1 and extra_axes[0]:
        pts = np.unique(np.concatenate([pts[:, 0], extra_axes[0]])).reshape(-1, 1)
    return pts


@dataclass(frozen=True, eq=False)
class DerivedIvf(Ivf):
    """IVF defined by a vectorised endpoint function over another IVF's box."""

    name: str
    dim: int
    domain: Box
    fn: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]] = field(repr=False)

    def _endpoints(self, points):
        return self.fn(points)


# ---------------------------------------------------------------- text format

_BOX_TOKEN = re.compile(r"([\[(])\s*([^,\s\])]+)\s*,\s*([^,\s\])]+)\s*([\])])")
_HEADER = re.compile(r"ivf\s+(\S+)\s+dim\s*=\s*(\d+)\s*$")


def _number(token: str, line: int) -> float:
    tok = token.strip()
    try:
        if "/" in tok:
            num, den = tok.split("/", 1)
            return float(num) / float(den)
        return float(tok)
    except (ValueError, ZeroDivisionError):
        raise IvfSyntaxError(f"invalid bound {token!r}", line) from None


def _region(text: str, dim: int, line: int) -> Region:
    text = text.strip()
    bounds, open_lo, open_hi = [], [], []
    if "[" in text or "(" in text:
        matches = list(_BOX_TOKEN.finditer(text))
        leftover = _BOX_TOKEN.sub("", text).strip()
        if leftover or len(matches) != dim:
            raise IvfSyntaxError(f"expected {dim} bracketed ranges in piece region, got {text!r}", line)
        for m in matches:
            bounds.append((_number(m.group(2), line), _number(m.group(3), line)))
            open_lo.append(m.group(1) == "(")
            open_hi.append(m.group(4) == ")")
    else:
        toks = text.split()
        if len(toks) != 2 * dim:
            raise IvfSyntaxError(f"expected {2 * dim} bounds, got {len(toks)}", line)
        for i in range(dim):
            bounds.append((_number(toks[2 * i], line), _number(toks[2 * i + 1], line)))
            open_lo.append(False)
            open_hi.append(False)
    for lo, hi in bounds:
        if lo > hi:
            raise IvfSyntaxError(f"empty range [{lo}, {hi}]", line)
    return Region(tuple(bounds), tuple(open_lo), tuple(open_hi))


def parse_ivf(text: str, validate: bool = True) -> PiecewiseIvf:
    """Parse the line-oriented IVF format.

    ::

        ivf <name> dim=<n>
        domain <lo1> <hi1> [...]
        piece <lo1> <hi1> [...] :: <lower-expr> :: <upper-expr>

    Piece ranges may also be written ``[lo,hi)``-style to mark open sides.
    The first piece containing a point defines the value there.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if body.strip():
            lines.append((lineno, raw, body))
    if not lines:
        raise IvfSyntaxError("empty document", 1, 1)

    lineno, _, body = lines[0]
    m = _HEADER.fullmatch(body.strip())
    if m is None:
        raise IvfSyntaxError("first line must read 'ivf <name> dim=<n>'", lineno, 1)
    name, dim = m.group(1), int(m.group(2))
    if dim < 1:
        raise IvfSyntaxError("dim must be at least 1", lineno)

    if len(lines) < 2 or not lines[1][2].strip().startswith("domain"):
        raise IvfSyntaxError("second line must be a 'domain' declaration", lines[1][0] if len(lines) > 1 else lineno + 1, 1)
    lineno, _, body = lines[1]
    toks = body.split()[1:]
    if len(toks) != 2 * dim:
        raise IvfSyntaxError(f"domain needs {2 * dim} bounds, got {len(toks)}", lineno)
    domain = tuple((_number(toks[2 * i], lineno), _number(toks[2 * i + 1], lineno)) for i in range(dim))
    for lo, hi in domain:
        if lo > hi or (math.isinf(lo) and lo == hi):
            raise IvfSyntaxError(f"invalid domain range [{lo}, {hi}]", lineno)

    pieces = []
    for lineno, raw, body in lines[2:]:
        stripped = body.lstrip()
        if not stripped.startswith("piece"):
            raise IvfSyntaxError(f"expected 'piece', found {stripped.split()[0]!r}", lineno, len(body) - len(stripped) + 1)
        parts = body.split("::")
        if len(parts) != 3:
            raise IvfSyntaxError("piece needs the form 'piece <box> :: <lower> :: <upper>'", lineno)
        region_text = parts[0].lstrip()[len("piece"):]
        region = _region(region_text, dim, lineno)
        col_lower = len(parts[0]) + 3
        col_upper = col_lower + len(parts[1]) + 2
        lower = parse_expr(parts[1], dim, lineno, col_lower - 1)
        upper = parse_expr(parts[2], dim, lineno, col_upper - 1)
        pieces.append(Piece(region, lower, upper, parts[1].strip(), parts[2].strip()))
    if not pieces:
        raise IvfSyntaxError("an ivf needs at least one piece", lines[-1][0] + 1)

    f = PiecewiseIvf(name, dim, domain, tuple(pieces), text)
    if validate:
        f.validate()
    return f


# ---------------------------------------------------------------- combinators


def _same_domain(f1: Ivf, f2: Ivf) -> None:
    if f1.dim != f2.dim or tuple(f1.domain) != tuple(f2.domain):
        raise DomainMismatch(f"{f1.name} has domain {f1.domain}, {f2.name} has domain {f2.domain}")


def gh_difference(f2: Ivf, f1: Ivf, name: str | None = None) -> DerivedIvf:
    """Pointwise ``f2(y) ⊖gH f1(y)``."""
    _same_domain(f1, f2)

    def fn(points):
        a_lo, a_hi = f2._endpoints(points)
        b_lo, b_hi = f1._endpoints(points)
        d1, d2 = a_lo - b_lo, a_hi - b_hi
        return np.minimum(d1, d2), np.maximum(d1, d2)

    return DerivedIvf(name or f"({f2.name} gh- {f1.name})", f1.dim, f1.domain, fn)


def ivf_sum(f1: Ivf, f2: Ivf, name: str | None = None) -> DerivedIvf:
    """Pointwise ``f1(y) ⊕ f2(y)``."""
    _same_domain(f1, f2)

    def fn(points):
        a_lo, a_hi = f1._endpoints(points)
        b_lo, b_hi = f2._endpoints(points)
        return a_lo + b_lo, a_hi + b_hi

    return DerivedIvf(name or f"({f1.name} + {f2.name})", f1.dim, f1.domain, fn)


def negate(f: Ivf) -> DerivedIvf:
    """Pointwise ``-1 ⊙ f(y)``."""

    def fn(points):
        lo, hi = f._endpoints(points)
        return -hi, -lo

    return DerivedIvf(f"-{f.name}", f.dim, f.domain, fn)


def linear_ivf(g: IntervalVector, domain: Box | None = None, name: str = "linear") -> DerivedIvf:
    """``h ↦ gᵀ ⊙ h``; defaults to the whole space."""
    n = len(g)
    domain = domain or tuple((-math.inf, math.inf) for _ in range(n))
    glo = np.array([x.lo for x in g])
    ghi = np.array([x.hi for x in g])

    def fn(points):
        a = points * glo
        b = points * ghi
        return np.minimum(a, b).sum(axis=1), np.maximum(a, b).sum(axis=1)

    return DerivedIvf(name, n, tuple(domain), fn)


def constant_ivf(value: Interval, domain: Box, name: str = "constant") -> DerivedIvf:
    def fn(points):
        m = points.shape[0]
        return np.full(m, value.lo), np.full(m, value.hi)

    return DerivedIvf(name, len(domain), tuple(domain), fn)


# ---------------------------------------------------------------- calculus probes


def shell_offsets(dim: int, radius: float, n_random: int = 16) -> np.ndarray:
    """Offsets of Euclidean length ``radius``: the signed axes plus fixed random directions."""
    if dim == 1:
        return np.array([[-radius], [radius]])
    eye = np.eye(dim)
    dirs = [eye, -eye]
    rng = np.random.default_rng(20240607)
    rnd = rng.normal(size=(n_random, dim))
    rnd /= np.linalg.norm(rnd, axis=1, keepdims=True)
    dirs.append(rnd)
    return radius * np.vstack(dirs)


def shell_points(f: Ivf, u: np.ndarray, radius: float) -> np.ndarray:
    pts = u + shell_offsets(f.dim, radius)
    return pts[f.contains(pts)]


@dataclass(frozen=True)
class ConcavityResult:
    concave: bool
    witness: tuple | None = None
    endpoint: str | None = None
    defect: float = 0.0

    def __bool__(self) -> bool:
        return self.concave


def concavity_check(f: Ivf, grid: GridSpec | None = None, tol: float = 1e-9, max_pairs: int = 200_000) -> ConcavityResult:
    """Midpoint concavity of both endpoint functions on sampled pairs.

    By the endpoint characterisation an IVF on a box is concave exactly when
    its lower and upper functions are.
    """
    spec = grid or GridSpec(points=201 if f.dim == 1 else 11, focal=False)
    pts = build_grid(f.domain, spec)
    m = pts.shape[0]
    if m * (m - 1) // 2 <= max_pairs:
        ii, jj = np.triu_indices(m, k=1)
    else:
        rng = np.random.default_rng(7)
        ii = rng.integers(0, m, size=max_pairs)
        jj = rng.integers(0, m, size=max_pairs)
    a, b = pts[ii], pts[jj]
    mid = 0.5 * (a + b)
    a_lo, a_hi = f.endpoints(a)
    b_lo, b_hi = f.endpoints(b)
    m_lo, m_hi = f.endpoints(mid)
    for label, fa, fb, fm in (("lower", a_lo, b_lo, m_lo), ("upper", a_hi, b_hi, m_hi)):
        defect = 0.5 * (fa + fb) - fm
        k = int(np.argmax(defect))
        if defect[k] > tol:
            return ConcavityResult(False, (tuple(a[k]), tuple(b[k])), label, float(defect[k]))
    return ConcavityResult(True)


@dataclass(frozen=True)
class ContinuityResult:
    continuous: bool
    estimates: tuple[float, ...]
    radii: tuple[float, ...]

    def __bool__(self) -> bool:
        return self.continuous


def gh_continuity_check(f: Ivf, u, radii: Sequence[float] = DEFAULT_RADII, tol: float = 1e-6) -> ContinuityResult:
    """Probe ``‖f(u+d) ⊖gH f(u)‖ → 0`` along shrinking shells."""
    uv = as_vector(u, f.dim)
    f_lo, f_hi = f.endpoints(uv.reshape(1, -1))
    estimates = []
    used = []
    for r in radii:
        pts = shell_points(f, uv, r)
        if pts.shape[0] == 0:
            continue
        lo, hi = f.endpoints(pts)
        d1, d2 = lo - f_lo[0], hi - f_hi[0]
        estimates.append(float(np.max(np.maximum(np.abs(d1), np.abs(d2)))))
        used.append(float(r))
    if len(estimates) < 2:
        return ContinuityResult(False, tuple(estimates), tuple(used))
    ok = estimates[-1] <= tol and estimates[-2] <= max(tol, 10 * estimates[-1] + tol)
    return ContinuityResult(bool(ok), tuple(estimates), tuple(used))


@dataclass(frozen=True)
class DerivativeEstimate:
    value: Interval
    converged: bool
    quotients: tuple[Interval, ...]


def directional_derivative_estimate(
    f: Ivf, u, h, betas: Sequence[float] = DEFAULT_RADII, tol: float = 1e-6
) -> DerivativeEstimate:
    """Limit of ``(1/β) ⊙ (f(u+βh) ⊖gH f(u))`` as β ↓ 0, Richardson-extrapolated."""
    uv = as_vector(u, f.dim)
    hv = as_vector(h, f.dim)
    if not np.any(hv):
        raise ValueError("direction h must be nonzero")
    base = f.eval(uv)
    quotients = []
    steps = []
    for beta in betas:
        if beta <= 0:
            raise ValueError("step sizes must be positive")
        y = uv + beta * hv
        if not f.contains(y.reshape(1, -1))[0]:
            raise OutOfDomain(y, f.name)
        d = gh_sub(f.eval(y), base)
        quotients.append(Interval(d.lo / beta, d.hi / beta))
        steps.append(beta)
    if len(quotients) == 1:
        return DerivativeEstimate(quotients[0], False, tuple(quotients))
    q1, q2 = quotients[-2], quotients[-1]
    b1, b2 = steps[-2], steps[-1]
    # first-order error model q(β) ≈ q0 + κβ
    w = b2 / (b1 - b2)
    lo = q2.lo + (q2.lo - q1.lo) * w
    hi = q2.hi + (q2.hi - q1.hi) * w
    value = Interval(min(lo, hi), max(lo, hi))
    converged = norm(gh_sub(q2, q1)) <= tol
    return DerivativeEstimate(value, bool(converged), tuple(quotients))


def frechet_residual(f: Ivf, u, g: IntervalVector, radii: Sequence[float] = DEFAULT_RADII) -> list[float]:
    """Per radius, ``max (1/‖h‖) ‖(f(u+h) ⊖gH f(u)) ⊖gH gᵀ⊙h‖`` over a shell."""
    uv = as_vector(u, f.dim)
    base_lo, base_hi = f.endpoints(uv.reshape(1, -1))
    glo = np.array([x.lo for x in g])
    ghi = np.array([x.hi for x in g])
    out = []
    for r in radii:
        pts = shell_points(f, uv, r)
        if pts.shape[0] == 0:
            continue
        lo, hi = f.endpoints(pts)
        d1, d2 = lo - base_lo[0], hi - base_hi[0]
        dlo, dhi = np.minimum(d1, d2), np.maximum(d1, d2)
        t = pts - uv
        a, b = t * glo, t * ghi
        llo, lhi = np.minimum(a, b).sum(axis=1), np.maximum(a, b).sum(axis=1)
        e1, e2 = dlo - llo, dhi - lhi
        res = np.maximum(np.abs(e1), np.abs(e2)) / np.linalg.norm(t, axis=1)
        out.append(float(np.max(res)))
    return out
