"""Grids, discontinuous initial conditions and the containers every solver shares."""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ResolutionError, ValidationError

__all__ = [
    "SpaceGrid",
    "Profile",
    "PulseSpec",
    "InitialCondition",
    "WaveField",
    "SpaceTimeIntensity",
    "assemble",
    "intensity",
    "l2_distance",
    "sample_pattern",
]

MIN_POINTS = 8
MIN_SAMPLES_PER_PULSE = 16
# half-widths (in units of smoothing or sigma) beyond which a smooth
# profile is below double-precision resolution
_TANH_TAIL = 20.0
_GAUSS_TAIL = 8.0


@dataclass(frozen=True)
class SpaceGrid:
    """Uniform one-dimensional grid.

    In the default (closed) mode both end points are samples and
    ``dx = (x_max - x_min) / (n_points - 1)``. In periodic mode ``x_max``
    is identified with ``x_min`` and ``dx = (x_max - x_min) / n_points``.
    """

    x_min: float
    x_max: float
    n_points: int
    periodic: bool = False

    def __post_init__(self):
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)):
            raise ValidationError("grid bounds must be finite")
        if not self.x_min < self.x_max:
            raise ValidationError(f"need x_min < x_max, got {self.x_min}, {self.x_max}")
        if int(self.n_points) != self.n_points or self.n_points < MIN_POINTS:
            raise ValidationError(f"n_points must be an integer >= {MIN_POINTS}")

    @property
    def length(self):
        return self.x_max - self.x_min

    @property
    def dx(self):
        if self.periodic:
            return self.length / self.n_points
        return self.length / (self.n_points - 1)

    @property
    def x(self):
        return self.x_min + self.dx * np.arange(self.n_points)

    def contains(self, a, b):
        return self.x_min <= a and b <= self.x_max


class Profile(str, Enum):
    SQUARE = "square"
    GAUSSIAN = "gaussian"
    TRIANGULAR = "triangular"


@dataclass(frozen=True)
class PulseSpec:
    """A single localized pulse.

    ``smoothing`` only affects the square profile, which becomes
    ``(tanh((x - a)/eps) - tanh((x - b)/eps)) / 2`` for ``eps > 0``.
    The Gaussian has standard deviation ``width / 6``; the triangle falls
    linearly from 1 at the center to 0 at ``center +- width/2``.
    """

    center: float = 0.0
    width: float = 1.0
    profile: Profile = Profile.SQUARE
    smoothing: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "profile", Profile(self.profile))
        if not (np.isfinite(self.width) and self.width > 0):
            raise ValidationError(f"pulse width must be positive, got {self.width}")
        if not (np.isfinite(self.smoothing) and self.smoothing >= 0):
            raise ValidationError(f"smoothing must be >= 0, got {self.smoothing}")
        if not np.isfinite(self.center):
            raise ValidationError("pulse center must be finite")

    @property
    def ideal(self):
        return self.profile is not Profile.SQUARE or self.smoothing == 0.0

    @property
    def edges(self):
        half = 0.5 * self.width
        return self.center - half, self.center + half

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        u = x - self.center
        half = 0.5 * self.width
        if self.profile is Profile.SQUARE:
            if self.smoothing > 0:
                eps = self.smoothing
                return 0.5 * (np.tanh((u + half) / eps) - np.tanh((u - half) / eps))
            au = np.abs(u)
            return np.where(au < half, 1.0, np.where(au == half, 0.5, 0.0))
        if self.profile is Profile.GAUSSIAN:
            sigma = self.width / 6.0
            return np.exp(-0.5 * (u / sigma) ** 2)
        return np.maximum(0.0, 1.0 - np.abs(u) / half)

    def pieces(self):
        """Intervals on which the profile is smooth and outside which it is negligible."""
        a, b = self.edges
        if self.profile is Profile.SQUARE:
            if self.smoothing > 0:
                pad = _TANH_TAIL * self.smoothing
                return [(a - pad, b + pad)]
            return [(a, b)]
        if self.profile is Profile.GAUSSIAN:
            reach = _GAUSS_TAIL * self.width / 6.0
            return [(self.center - reach, self.center + reach)]
        return [(a, self.center), (self.center, b)]


@dataclass(frozen=True)
class InitialCondition:
    """Superposition of pulses with complex amplitudes."""

    pulses: tuple
    amplitudes: tuple = None

    def __post_init__(self):
        pulses = tuple(self.pulses)
        if not pulses:
            raise ValidationError("an initial condition needs at least one pulse")
        amps = self.amplitudes
        amps = (1.0 + 0j,) * len(pulses) if amps is None else tuple(complex(a) for a in amps)
        if len(amps) != len(pulses):
            raise ValidationError("one amplitude per pulse is required")
        if not any(a != 0 for a in amps):
            raise ValidationError("initial condition has zero norm")
        object.__setattr__(self, "pulses", pulses)
        object.__setattr__(self, "amplitudes", amps)
        order = sorted(range(len(pulses)), key=lambda j: pulses[j].edges[0])
        for i, j in zip(order, order[1:]):
            p, q = pulses[i], pulses[j]
            if p.edges[1] > q.edges[0] and (p.ideal or q.ideal):
                raise ValidationError(
                    f"pulses at {p.center} and {q.center} overlap; only smoothed pulses may overlap"
                )

    @classmethod
    def square(cls, width=1.0, center=0.0, smoothing=0.0):
        return cls((PulseSpec(center, width, Profile.SQUARE, smoothing),))

    @property
    def support(self):
        lo = min(p.edges[0] for p in self.pulses)
        hi = max(p.edges[1] for p in self.pulses)
        return lo, hi

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for amp, pulse in zip(self.amplitudes, self.pulses):
            out = out + amp * pulse(x)
        return out


@dataclass(frozen=True, eq=False)
class WaveField:
    """Complex samples of a wavefunction on a grid."""

    grid: SpaceGrid
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        s = np.array(self.samples, dtype=complex)
        if s.shape != (self.grid.n_points,):
            raise ValidationError(
                f"expected {self.grid.n_points} samples, got shape {s.shape}"
            )
        if not np.all(np.isfinite(s)):
            raise ValidationError("wave field samples must be finite")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)
        if self.norm2 == 0.0:
            raise ValidationError("wave field has zero norm")

    @property
    def x(self):
        return self.grid.x

    @property
    def norm2(self):
        return float(np.sum(np.abs(self.samples) ** 2) * self.grid.dx)

    @property
    def norm(self):
        return np.sqrt(self.norm2)

    def with_samples(self, samples):
        return WaveField(self.grid, samples)


@dataclass(frozen=True, eq=False)
class SpaceTimeIntensity:
    """Probability density ``|psi(x, t)|^2`` on a (time, space) lattice."""

    times: np.ndarray
    grid: SpaceGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        values = np.array(self.values, dtype=float)
        if times.ndim != 1 or times.size == 0:
            raise ValidationError("times must be a non-empty 1-D array")
        if np.any(np.diff(times) <= 0):
            raise ValidationError("times must be strictly increasing")
        if values.shape != (times.size, self.grid.n_points):
            raise ValidationError(
                f"values shape {values.shape} does not match "
                f"({times.size}, {self.grid.n_points})"
            )
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise ValidationError("intensities must be finite and non-negative")
        times.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)


def assemble(ic, grid):
    """Sample an initial condition on a grid.

    Raises ResolutionError when a pulse is covered by fewer than 16 samples
    or sticks out of the grid.
    """
    for pulse in ic.pulses:
        if pulse.width / grid.dx < MIN_SAMPLES_PER_PULSE:
            raise ResolutionError(
                f"pulse of width {pulse.width} needs dx <= {pulse.width / MIN_SAMPLES_PER_PULSE}, "
                f"grid has dx = {grid.dx}"
            )
    lo, hi = ic.support
    if not grid.contains(lo, hi):
        raise ResolutionError(f"grid [{grid.x_min}, {grid.x_max}] does not cover [{lo}, {hi}]")
    return WaveField(grid, ic(grid.x))


def intensity(field):
    return np.abs(field.samples) ** 2


def l2_distance(a, b):
    if a.grid != b.grid:
        raise ValidationError("l2_distance needs fields on identical grids")
    diff = a.samples - b.samples
    return float(np.sqrt(np.sum(np.abs(diff) ** 2) * a.grid.dx))


def sample_pattern(psi, times, grid):
    """Build a SpaceTimeIntensity from a callable ``psi(x, t)``."""
    x = grid.x
    values = np.array([np.abs(psi(x, t)) ** 2 for t in times])
    return SpaceTimeIntensity(np.asarray(times, dtype=float), grid, values)
