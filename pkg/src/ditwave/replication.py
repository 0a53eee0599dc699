"""Replication expansions: a wave written as a sum of affine copies of a block.

Every expansion here starts from the Fourier series of the periodic
square wave that equals 1 on the pulse,

    theta(1/2 - |x|) = 1/2 + sum_{n, s=+-} (-i/k_n) exp(i s k_n (x + s/2)),
    k_n = pi (2n + 1),

and conjugates it with the evolution: ``x -> x_hat(t)``. When ``x_hat`` is
an SL(2) combination ``A x + B p`` the exponentials factorize exactly by
Baker-Campbell-Hausdorff (``[x, p] = i``),

    exp(i s k (A x + B p)) = exp(i s k A x) exp(i s k B p) exp(+i k^2 A B / 2),

so each term is a phase times a translated copy of the block. The reversed
Heisenberg picture of the free particle is ``x_hat = x - t p``, i.e.
``A = 1, B = -t``; the oscillator has ``A = cos(wt), B = -sin(wt)/w``.

Terms are summed over a *block*: the initial profile (the short-time
"mother wave" form) or any evolved profile, which turns the same term list
into an exact identity.
"""

from dataclasses import dataclass, field

import numpy as np

from .domain import InitialCondition, Profile, PulseSpec, WaveField
from .errors import DomainError, ExpansionOverflow, ValidationError
from .exact import exact_square_packet, harmonic_from_free

__all__ = [
    "AffineTerm",
    "ReplicationExpansion",
    "SL2Coeffs",
    "wavenumbers",
    "fejer_weight",
    "step_series_partial",
    "free_terms",
    "sl2_terms",
    "squeeze_terms",
    "multi_pulse_terms",
    "evaluate",
    "evolved_block",
    "harmonic_block",
]


@dataclass(frozen=True)
class AffineTerm:
    """``coeff * amp_scale * exp(i(phase_offset + phase_slope x)) * ref(arg_scale x + arg_shift)``"""

    coeff: complex
    phase_offset: float = 0.0
    phase_slope: float = 0.0
    amp_scale: float = 1.0
    arg_scale: float = 1.0
    arg_shift: float = 0.0

    def __post_init__(self):
        values = (self.coeff, self.phase_offset, self.phase_slope,
                  self.amp_scale, self.arg_scale, self.arg_shift)
        if not all(np.isfinite(v) for v in values):
            raise ValidationError(f"non-finite affine term {self}")
        if not self.arg_scale > 0:
            raise ValidationError("arg_scale must be positive")

    def __call__(self, x, ref):
        x = np.asarray(x, dtype=float)
        phase = np.exp(1j * (self.phase_offset + self.phase_slope * x))
        return self.coeff * self.amp_scale * phase * ref(self.arg_scale * x + self.arg_shift)


@dataclass(frozen=True)
class ReplicationExpansion:
    """A truncated replication series.

    ``terms`` holds the oscillating pairs in the order (n=0,+), (n=0,-),
    (n=1,+), ...; ``dc_terms`` holds the constant part of the step series,
    one term per pulse.
    """

    terms: tuple
    dc_terms: tuple
    n_max: int
    reference: PulseSpec = field(default_factory=PulseSpec)
    map_kind: str = "free"

    def __post_init__(self):
        if self.n_max < 0:
            raise ValidationError("n_max must be >= 0")
        if len(self.terms) % (2 * (self.n_max + 1)):
            raise ValidationError("terms must come in +- pairs for every n <= n_max")

    @property
    def dc_term(self):
        return sum(t.coeff for t in self.dc_terms)

    def order(self, index):
        """Series index n of ``terms[index]``."""
        return (index // 2) % (self.n_max + 1)

    def __call__(self, x, block=None, fejer=False):
        return _sum_terms(self, np.asarray(x, dtype=float), block, fejer)


@dataclass(frozen=True)
class SL2Coeffs:
    """Linear canonical map ``x_hat = A x + B p``, ``p_hat = C x + D p``."""

    A: float
    B: float
    C: float
    D: float

    def __post_init__(self):
        det = self.A * self.D - self.B * self.C
        if abs(det - 1.0) > 1e-10:
            raise ValidationError(f"AD - BC = {det!r}, not 1")

    @classmethod
    def free(cls, t):
        return cls(1.0, -float(t), 0.0, 1.0)

    @classmethod
    def harmonic(cls, omega, t):
        if omega == 0:
            return cls.free(t)
        wt = omega * t
        return cls(np.cos(wt), -np.sin(wt) / omega, omega * np.sin(wt), np.cos(wt))


def wavenumbers(n_max, width=1.0):
    """``pi (2n + 1) / width`` for ``n = 0 .. n_max``."""
    return np.pi * (2 * np.arange(n_max + 1) + 1) / width


def step_series_partial(x, n_max):
    """Partial sum ``1/2 + (2/pi) sum_{n<=n_max} sin(pi(2n+1)(x+1/2)) / (2n+1)``."""
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    x = np.asarray(x, dtype=float)
    total = np.full(x.shape, 0.5)
    for n in range(n_max + 1):
        m = 2 * n + 1
        total = total + (2.0 / np.pi) * np.sin(np.pi * m * (x + 0.5)) / m
    return total


def _sl2_pulse_terms(co, n_max, width, center, amplitude, quadratic_sign):
    # In the unit-cell variable u = (x - center)/width the step series has
    # wavenumbers pi(2n+1); in x they are K = pi(2n+1)/width.
    terms = []
    for k_unit in wavenumbers(n_max):
        big_k = k_unit / width
        coeff = amplitude * (-1j / k_unit)
        for s in (1, -1):
            a = s * big_k * co.A
            b = s * big_k * co.B
            offset = 0.5 * k_unit - s * big_k * center + quadratic_sign * 0.5 * a * b
            # block argument: (x + b - center) / width
            terms.append(AffineTerm(coeff, offset, a, 1.0, 1.0 / width, (b - center) / width))
    dc = AffineTerm(0.5 * amplitude, 0.0, 0.0, 1.0, 1.0 / width, -center / width)
    return terms, dc


def sl2_terms(co, n_max, *, quadratic_sign=1):
    """Replication series for the linear map ``x_hat = A x + B p``.

    Term ``(n, s)`` is ``(-i/k) exp(i(k/2 + q k^2 A B / 2 + s k A x)) ref(x + s k B)``.
    ``quadratic_sign`` (q) is +1 by BCH; -1 reproduces the printed
    ``exp(-i k^2 A B / 2)`` and is kept only to demonstrate that it is wrong.
    """
    if quadratic_sign not in (1, -1):
        raise ValidationError("quadratic_sign must be +1 or -1")
    terms, dc = _sl2_pulse_terms(co, n_max, 1.0, 0.0, 1.0, quadratic_sign)
    return ReplicationExpansion(tuple(terms), (dc,), n_max, PulseSpec(), "sl2")


def free_terms(t, n_max, *, quadratic_sign=1):
    """Free-particle replication series: ``sl2_terms`` with ``A = 1, B = -t``.

    The (n, +) block moves right with velocity k_n and carries the phase
    ``exp(i k_n (x + 1/2) - i k_n^2 t / 2)``; the (n, -) block mirrors it.
    """
    if t < 0:
        raise DomainError("free_terms requires t >= 0")
    exp = sl2_terms(SL2Coeffs.free(t), n_max, quadratic_sign=quadratic_sign)
    return ReplicationExpansion(exp.terms, exp.dc_terms, n_max, exp.reference, "free")


def squeeze_terms(t, n_max, *, phase="reduced"):
    """Wavelet-like series of the squeeze map ``x_hat = x + (t/2){x, p}``.

    Term ``(n, s)`` is ``((-1)^n / k_n) e^{s k_n t/2} exp(i slope x) ref(e^{s k_n t/2} x)``,
    so consecutive scales differ by the constant ratio ``e^{pi t}``. With
    ``phase="printed"`` the slope is ``-pi (e^{s k_n t} - 1) / t``; with the
    default ``phase="reduced"`` it is ``-(e^{s k_n t} - 1) / t``, the only
    choice of the two whose ``t -> 0`` limit is the step series.
    """
    t = float(t)
    if not t > 0:
        raise DomainError(f"squeeze_terms requires t > 0, got {t}")
    if phase not in ("reduced", "printed"):
        raise ValidationError(f"unknown phase convention {phase!r}")
    factor = np.pi if phase == "printed" else 1.0
    terms = []
    for n, k in enumerate(wavenumbers(n_max)):
        coeff = (-1) ** n / k
        for s in (1, -1):
            scale = np.exp(0.5 * s * k * t)
            slope = -factor * np.expm1(s * k * t) / t
            terms.append(AffineTerm(coeff, 0.0, slope, scale, scale, 0.0))
    dc = AffineTerm(0.5)
    return ReplicationExpansion(tuple(terms), (dc,), n_max, PulseSpec(), "squeeze")


def multi_pulse_terms(ic, t, n_max, *, quadratic_sign=1):
    """Free replication series of a train of disjoint ideal pulses.

    Each pulse of width ``l`` centred at ``c`` contributes the unit series
    rescaled by ``x -> (x - c)/l``; the reference block is the unit pulse
    of the shared profile.
    """
    if not isinstance(ic, InitialCondition):
        raise ValidationError("multi_pulse_terms needs an InitialCondition")
    if t < 0:
        raise DomainError("multi_pulse_terms requires t >= 0")
    profiles = {p.profile for p in ic.pulses}
    if len(profiles) != 1:
        raise ValidationError("all pulses must share one profile")
    if any(p.profile is Profile.SQUARE and p.smoothing > 0 for p in ic.pulses):
        raise ValidationError("replication series need ideal (unsmoothed) pulses")
    co = SL2Coeffs.free(t)
    terms, dcs = [], []
    for amp, pulse in zip(ic.amplitudes, ic.pulses):
        part, dc = _sl2_pulse_terms(co, n_max, pulse.width, pulse.center, amp, quadratic_sign)
        terms.extend(part)
        dcs.append(dc)
    ref = PulseSpec(0.0, 1.0, profiles.pop())
    return ReplicationExpansion(tuple(terms), tuple(dcs), n_max, ref, "free")


def fejer_weight(n, n_max):
    """Cesaro weight of harmonic ``2n + 1`` among harmonics ``1 .. 2 n_max + 1``.

    These are the weights of the Fejer mean of the full trigonometric series
    (the even harmonics being zero), a positive kernel, so a step never
    overshoots.
    """
    return 1.0 - (2 * n + 1) / (2 * (n_max + 1))


def _sum_terms(exp, x, block, fejer):
    ref = exp.reference if block is None else block
    total = np.zeros(x.shape, dtype=complex)
    for term in exp.dc_terms:
        total = total + term(x, ref)
    # overflow is reported by the explicit check below, not by warnings
    with np.errstate(over="ignore", invalid="ignore"):
        for i, term in enumerate(exp.terms):
            value = term(x, ref)
            if fejer:
                value = value * fejer_weight(exp.order(i), exp.n_max)
            total = total + value
            if not np.all(np.isfinite(total)):
                raise ExpansionOverflow(i)
    return total


def evaluate(exp, grid, *, block=None, fejer=False):
    """Sum a replication expansion on a grid.

    Parameters
    ----------
    exp : ReplicationExpansion
    grid : SpaceGrid
    block : callable, optional
        Replaces the reference profile; ``evolved_block(t)`` turns the
        short-time series into the exact replication identity.
    fejer : bool
        Weight order n by ``fejer_weight(n, n_max)`` to suppress Gibbs ringing.
    """
    return WaveField(grid, _sum_terms(exp, grid.x, block, fejer))


def evolved_block(t):
    """The unit square packet freely evolved to time ``t``, as a block."""
    if t == 0:
        return PulseSpec()
    return lambda y: exact_square_packet(y, t)


def harmonic_block(omega, t):
    """The unit square packet evolved in the oscillator, as a block."""
    return lambda y: harmonic_from_free(y, t, omega)
