"""Finite sample sets standing in for "for all y in Y"."""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

DEFAULT_POINTS = 2001
DEFAULT_POINTS_ND = 41
DEFAULT_FOCAL_DEPTH = 8
# half-lines are sampled on a window of this length past the finite end
HALF_LINE_WINDOW = 10.0


def default_points() -> int:
    raw = os.environ.get("IVFOPT_GRID")
    if raw:
        n = int(raw)
        if n < 2:
            raise ValueError("IVFOPT_GRID must be at least 2")
        return n
    return DEFAULT_POINTS


@dataclass(frozen=True)
class GridSpec:
    """Per-dimension sample count plus optional logarithmic refinement.

    With ``focal`` enabled, every axis also receives the offsets
    ``u ± 10**-k`` for ``k = 1 .. depth`` around the focal point.
    """

    points: int | None = None
    focal: bool = True
    depth: int = DEFAULT_FOCAL_DEPTH

    def __post_init__(self) -> None:
        if self.points is not None and self.points < 2:
            raise ValueError("a grid needs at least 2 points per dimension")
        if self.depth < 0:
            raise ValueError("focal depth must be non-negative")

    def count(self, dim: int) -> int:
        if self.points is not None:
            return self.points
        return default_points() if dim == 1 else DEFAULT_POINTS_ND

    def focal_offsets(self) -> list[float]:
        return [10.0 ** -k for k in range(1, self.depth + 1)] if self.focal else []

    def min_step(self) -> float | None:
        offsets = self.focal_offsets()
        return offsets[-1] if offsets else None


def finite_window(lo: float, hi: float, anchor: float | None = None) -> tuple[float, float]:
    """Clip a possibly infinite coordinate range to a finite sampling window."""
    if math.isfinite(lo) and math.isfinite(hi):
        return lo, hi
    centre = anchor
    if centre is None:
        centre = lo if math.isfinite(lo) else hi if math.isfinite(hi) else 0.0
    a = lo if math.isfinite(lo) else min(centre, hi if math.isfinite(hi) else centre) - HALF_LINE_WINDOW
    b = hi if math.isfinite(hi) else max(centre, a) + HALF_LINE_WINDOW
    return a, b


def axis_samples(lo: float, hi: float, count: int, focal: float | None, offsets: Sequence[float]) -> np.ndarray:
    a, b = finite_window(lo, hi, focal)
    base = np.linspace(a, b, count) if a < b else np.array([a])
    extra = []
    if focal is not None:
        extra.append(focal)
        for d in offsets:
            for cand in (focal - d, focal + d):
                if lo <= cand <= hi:
                    extra.append(cand)
    return np.unique(np.concatenate([base, np.asarray(extra, dtype=float)]))


def build_grid(domain: Sequence[tuple[float, float]], spec: GridSpec, focal: Sequence[float] | None = None) -> np.ndarray:
    """Cartesian sample grid over a box, shape ``(m, n)``."""
    dim = len(domain)
    count = spec.count(dim)
    offsets = spec.focal_offsets()
    axes = []
    for i, (lo, hi) in enumerate(domain):
        centre = None if focal is None else float(focal[i])
        axes.append(axis_samples(lo, hi, count, centre, offsets))
    if dim == 1:
        return axes[0].reshape(-1, 1)
    return np.array(list(itertools.product(*axes)), dtype=float)


def plot_axis(lo: float, hi: float, count: int, focal: float | None) -> np.ndarray:
    """Exactly ``count`` uniform points, with an interior point snapped onto ``focal``."""
    a, b = finite_window(lo, hi, focal)
    xs = np.linspace(a, b, count)
    if focal is not None and count > 2 and a < focal < b and not np.any(xs == focal):
        inner = xs[1:-1]
        j = int(np.argmin(np.abs(inner - focal))) + 1
        xs[j] = focal
    return xs
