"""Caustic envelopes of the replication rays and ridge extraction from patterns.

The (n, s) term of the free series carries the phase
``xi(k) = k (x - e) s' - k^2 t / 2`` measured from an edge ``e``. Treating
``k`` as continuous, the envelope of the ray family ``xi = c`` follows from
``d xi / dk = 0``: ``k* = |x - e| / t`` and ``xi* = (x - e)^2 / (2t)``, i.e. the
parabola ``(x - e)^2 = 2 c t`` with apex at the edge. For the SL(2) map the
same elimination gives ``(A x - e)^2 = -2 c A B``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import gaussian_filter1d

from .errors import DomainError, ValidationError

__all__ = [
    "CausticFamily",
    "RidgeSet",
    "caustic_parabola",
    "caustic_sl2",
    "ridge_extract",
    "ray_spacing_smoothing",
    "fit_parabola",
    "fit_ray",
]


def _check_side(side):
    if side not in (1, -1):
        raise DomainError(f"side must be +1 or -1, got {side}")


def caustic_parabola(edge, side, level, t):
    """Position ``edge + side * sqrt(2 level t)`` of a free caustic."""
    _check_side(side)
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0) or not level > 0:
        raise DomainError("caustic_parabola needs t > 0 and level > 0")
    return edge + side * np.sqrt(2.0 * level * t)


def caustic_sl2(edge, side, level, co):
    """Caustic of the linear map: ``x = (edge + side sqrt(-2 level A B)) / A``.

    Requires ``A B < 0``, the sign the oscillator map has before its first
    focus.
    """
    _check_side(side)
    ab = co.A * co.B
    if not level > 0 or not ab < 0:
        raise DomainError("caustic_sl2 needs level > 0 and A*B < 0")
    return (edge + side * np.sqrt(-2.0 * level * ab)) / co.A


@dataclass(frozen=True)
class CausticFamily:
    edge: float
    side: int
    levels: tuple

    def __post_init__(self):
        _check_side(self.side)
        levels = np.asarray(self.levels, dtype=float)
        if levels.size == 0 or np.any(levels <= 0) or np.any(np.diff(levels) <= 0):
            raise ValidationError("levels must be positive and strictly ascending")
        object.__setattr__(self, "levels", tuple(levels))

    def positions(self, t):
        """Array of shape (len(levels), len(t)) of caustic positions."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return np.array([caustic_parabola(self.edge, self.side, c, t) for c in self.levels])


@dataclass(frozen=True, eq=False)
class RidgeSet:
    """Ragged ridge positions: ``positions[offsets[i]:offsets[i+1]]`` belong to ``times[i]``."""

    times: np.ndarray
    positions: np.ndarray
    counts: np.ndarray

    @property
    def offsets(self):
        return np.concatenate(([0], np.cumsum(self.counts)))

    def row(self, i):
        o = self.offsets
        return self.positions[o[i]:o[i + 1]]

    def __len__(self):
        return len(self.times)

    def nearest_to(self, edge):
        """Single-ridge trajectory: per row, the ridge closest to ``edge``.

        Rows without ridges are dropped.
        """
        ts, xs = [], []
        for i, t in enumerate(self.times):
            r = self.row(i)
            if r.size:
                ts.append(t)
                xs.append(r[np.argmin(np.abs(r - edge))])
        counts = np.ones(len(ts), dtype=int)
        return RidgeSet(np.array(ts), np.array(xs), counts)


def ray_spacing_smoothing(t):
    """Coarse-graining length ``pi t``: half the spacing ``2 pi t`` between
    neighbouring rays, which averages out crest-to-crest interference
    while leaving the ``sqrt(t)``-wide caustic lobes intact."""
    return np.pi * t


def ridge_extract(pattern, window, smoothing=None):
    """Strict local maxima of each intensity row inside ``window``.

    Parameters
    ----------
    pattern : SpaceTimeIntensity
    window : (float, float)
        Only maxima whose two neighbours also lie in the window count, so a
        maximum sitting on the window boundary is not reported.
    smoothing : None, float or callable
        Optional Gaussian coarse-graining length applied to each row before
        the search; a callable is evaluated at the row's time.

    Positions are refined to sub-grid accuracy with a three-point parabola.
    """
    lo, hi = window
    grid = pattern.grid
    if not (grid.x_min <= lo < hi <= grid.x_max):
        raise ValidationError(f"window {window} outside grid [{grid.x_min}, {grid.x_max}]")
    x = grid.x
    dx = grid.dx
    # grid points are x_min + i dx; absorb its rounding so mirrored windows
    # select mirrored samples
    tol = 1e-9 * dx
    inside = (x >= lo - tol) & (x <= hi + tol)
    positions, counts = [], []
    for t, row in zip(pattern.times, pattern.values):
        if smoothing is not None:
            width = smoothing(t) if callable(smoothing) else smoothing
            if width > 0:
                row = gaussian_filter1d(row, width / dx, mode="nearest")
        left, mid, right = row[:-2], row[1:-1], row[2:]
        peak = (mid > left) & (mid > right) & inside[:-2] & inside[1:-1] & inside[2:]
        idx = np.nonzero(peak)[0] + 1
        curv = row[idx - 1] - 2 * row[idx] + row[idx + 1]
        shift = np.where(curv != 0, 0.5 * (row[idx - 1] - row[idx + 1]) / np.where(curv != 0, curv, 1), 0.0)
        pos = np.clip(x[idx] + shift * dx, grid.x_min, grid.x_max)
        positions.append(pos)
        counts.append(pos.size)
    flat = np.concatenate(positions) if positions else np.empty(0)
    return RidgeSet(np.array(pattern.times), flat, np.array(counts, dtype=int))


def _single_track(ridge, edge):
    if np.any(ridge.counts != 1):
        ridge = ridge.nearest_to(edge)
    t = np.asarray(ridge.times, dtype=float)
    x = np.asarray(ridge.positions, dtype=float)
    if t.size < 5:
        raise ValidationError("a fit needs at least 5 ridge points")
    if np.ptp(t) == 0:
        raise ValidationError("degenerate fit: all times equal")
    return t, x


def fit_parabola(ridge, edge, side):
    """Least-squares level ``c`` of ``(x - edge)^2 = 2 c t`` and its R^2.

    A ridge set with several maxima per row is reduced to the one nearest
    the edge. R^2 is computed on ``(x - edge)^2``.
    """
    _check_side(side)
    t, x = _single_track(ridge, edge)
    y = (x - edge) ** 2
    design = 2.0 * t
    level = float(np.dot(design, y) / np.dot(design, design))
    resid = y - level * design
    total = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - np.sum(resid ** 2) / total if total > 0 else 1.0
    return level, float(r2)


def fit_ray(ridge, edge, side):
    """Classical straight ray from the edge, ``x = edge + side v t``.

    Returns ``(v, ss_ray, ss_parabola)``: the fitted speed and the squared
    position residuals of the ray and of the best caustic parabola.
    """
    t, x = _single_track(ridge, edge)
    d = side * (x - edge)
    v = float(np.dot(t, d) / np.dot(t, t))
    ss_ray = float(np.sum((d - v * t) ** 2))
    level, _ = fit_parabola(RidgeSet(t, x, np.ones(t.size, dtype=int)), edge, side)
    ss_par = float(np.sum((x - caustic_parabola(edge, side, level, t)) ** 2))
    return v, ss_ray, ss_par
