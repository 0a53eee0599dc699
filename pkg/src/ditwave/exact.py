"""Closed-form square-packet solutions and the propagator quadrature oracle."""

from dataclasses import dataclass

import numpy as np

from .domain import InitialCondition, PulseSpec
from .errors import AccuracyError, DomainError
from .specfun import erf_complex

__all__ = [
    "PropagatorParams",
    "kernel",
    "exact_square_packet",
    "propagator_quadrature",
    "harmonic_from_free",
]

_SQRT_I = np.exp(-0.25j * np.pi)
FOCAL_TOL = 1e-9


@dataclass(frozen=True)
class PropagatorParams:
    """Which Gaussian kernel to use and for how long.

    ``kind`` is ``"free"`` or ``"harmonic"``; ``omega`` is only read for the
    harmonic kernel, whose focal times ``omega * t = m * pi`` are rejected.
    """

    kind: str = "free"
    t: float = 1.0
    omega: float = 0.0

    def __post_init__(self):
        if self.kind not in ("free", "harmonic"):
            raise DomainError(f"unknown propagator kind {self.kind!r}")
        if not (np.isfinite(self.t) and self.t > 0):
            raise DomainError(f"propagation time must be positive, got {self.t}")
        if self.kind == "harmonic":
            if not (np.isfinite(self.omega) and self.omega > 0):
                raise DomainError(f"harmonic kernel needs omega > 0, got {self.omega}")
            phase = self.omega * self.t / np.pi
            if abs(phase - round(phase)) * np.pi < FOCAL_TOL:
                raise DomainError(f"omega*t = {self.omega * self.t} is a focal time")


def _harmonic_prefactor(omega, t):
    # sqrt(omega / (2 pi i sin(omega t))) continued through the foci:
    # each focus passed adds a Maslov phase of -pi/2
    s = np.sin(omega * t)
    foci = np.floor(omega * t / np.pi)
    phase = -0.25 * np.pi - 0.5 * np.pi * foci
    return np.sqrt(omega / (2 * np.pi * abs(s))) * np.exp(1j * phase)


def kernel(params, x, xp):
    """Propagator ``K(x, x'; t, 0)`` for the free particle or oscillator."""
    x = np.asarray(x, dtype=float)
    xp = np.asarray(xp, dtype=float)
    t = params.t
    if params.kind == "free":
        pref = np.sqrt(1.0 / (2j * np.pi * t))
        return pref * np.exp(0.5j * (x - xp) ** 2 / t)
    w = params.omega
    s, c = np.sin(w * t), np.cos(w * t)
    pref = _harmonic_prefactor(w, t)
    return pref * np.exp(0.5j * w * ((x * x + xp * xp) * c - 2 * x * xp) / s)


def exact_square_packet(x, t):
    """Free evolution of the unit square packet ``theta(1/2 - |x|)``.

    ``psi = Erf[-e^{-i pi/4}(x - 1/2)/sqrt(2t)]/2 - Erf[-e^{-i pi/4}(x + 1/2)/sqrt(2t)]/2``
    """
    t = float(t)
    if not t > 0:
        raise DomainError(f"exact_square_packet requires t > 0, got {t}")
    x = np.asarray(x, dtype=float)
    scale = -_SQRT_I / np.sqrt(2.0 * t)
    out = 0.5 * erf_complex(scale * (x - 0.5)) - 0.5 * erf_complex(scale * (x + 0.5))
    return out[()] if np.ndim(out) == 0 else out


def _phase_gradient(params, x, a, b):
    """Upper bound of |d/dx' phase| of the kernel over x' in [a, b]."""
    ax = np.max(np.abs(x)) if np.size(x) else 0.0
    reach = ax + max(abs(a), abs(b))
    if params.kind == "free":
        return reach / params.t
    w = params.omega
    return w * reach * (1 + abs(np.cos(w * params.t))) / abs(np.sin(w * params.t))


def _midpoint(f, a, b, n):
    h = (b - a) / n
    nodes = a + h * (np.arange(n) + 0.5)
    return h * f(nodes)


def _romberg_midpoint(integrand, a, b, n0, tol, max_levels):
    """Richardson-extrapolated composite midpoint rule.

    ``integrand(nodes)`` returns an (n_x, n_nodes) array; the result is an
    (n_x,) array converged to ``tol`` in absolute terms.
    """
    table = []
    n = n0
    prev = None
    err = np.inf
    for level in range(max_levels):
        row = [np.sum(_midpoint(integrand, a, b, n), axis=-1)]
        for m in range(1, level + 1):
            factor = 4.0 ** m
            row.append(row[m - 1] + (row[m - 1] - table[-1][m - 1]) / (factor - 1))
        table.append(row)
        best = row[-1]
        if prev is not None:
            err = float(np.max(np.abs(best - prev)))
            if err <= tol:
                return best, err
        prev = best
        n *= 2
    raise AccuracyError("propagator quadrature did not converge", err)


def _as_sources(ic):
    """Normalize the supported initial-condition inputs to (amplitude, profile, pieces)."""
    if isinstance(ic, InitialCondition):
        return [(amp, p, p.pieces()) for amp, p in zip(ic.amplitudes, ic.pulses)]
    if isinstance(ic, PulseSpec):
        return [(1.0, ic, ic.pieces())]
    func, pieces = ic
    return [(1.0, func, list(pieces))]


def propagator_quadrature(ic, params, x, *, tol=1e-9, max_levels=14, chunk=256):
    """Brute-force ``int K(x, x'; t) psi0(x') dx'`` over the support of ``psi0``.

    Parameters
    ----------
    ic : InitialCondition, PulseSpec, or (callable, pieces)
        The initial wave. A callable must be accompanied by a list of
        ``(a, b)`` intervals covering its support on each of which it is
        smooth.
    params : PropagatorParams
    x : float or array_like
        Observation points.
    tol : float
        Absolute convergence tolerance of the Richardson table.

    Raises
    ------
    AccuracyError
        If the table has not settled after ``max_levels`` halvings.
    """
    x = np.asarray(x, dtype=float)
    flat = np.atleast_1d(x).ravel()
    out = np.zeros(flat.shape, dtype=complex)
    sources = _as_sources(ic)
    for start in range(0, flat.size, chunk):
        xs = flat[start:start + chunk]
        acc = np.zeros(xs.shape, dtype=complex)
        for amp, profile, pieces in sources:
            for a, b in pieces:
                grad = _phase_gradient(params, xs, a, b)
                cycles = (b - a) * grad / (2 * np.pi)
                n0 = 32
                while n0 < 4 * cycles:
                    n0 *= 2
                smooth = getattr(profile, "smoothing", 0.0)
                if smooth:
                    while (b - a) / n0 > smooth / 4:
                        n0 *= 2

                def integrand(nodes, xs=xs, profile=profile):
                    return kernel(params, xs[:, None], nodes[None, :]) * profile(nodes)[None, :]

                val, _ = _romberg_midpoint(integrand, a, b, n0, tol, max_levels)
                acc = acc + amp * val
        out[start:start + chunk] = acc
    out = out.reshape(x.shape)
    return out[()] if out.ndim == 0 else out


def harmonic_from_free(x, t, omega):
    """Square packet in the oscillator ``V = omega^2 x^2 / 2`` from the free solution.

    Both propagators are Gaussian, which gives the lens relation

        psi_h(x, t) = e^{i phi} |A|^{-1/2} exp(i C x^2 / (2A)) psi_free(x/A, B/A)

    with ``A = cos(omega t)``, ``B = sin(omega t)/omega``, ``C = -omega sin(omega t)``
    and ``phi`` the Maslov phase difference of the two kernel prefactors.
    A negative effective time ``B/A`` is handled through time reversal of
    the real initial packet.
    """
    t = float(t)
    omega = float(omega)
    x = np.asarray(x, dtype=float)
    if omega == 0.0:
        return exact_square_packet(x, t)
    if not t > 0:
        raise DomainError(f"harmonic_from_free requires t > 0, got {t}")
    wt = omega * t
    a = np.cos(wt)
    if abs(a) < FOCAL_TOL:
        raise DomainError(f"cos(omega t) = {a:.2e}: focal singularity of the lens relation")
    b = np.sin(wt) / omega
    c = -omega * np.sin(wt)
    tau = b / a
    y = x / a
    if abs(tau) < 1e-13:
        # exact revival: omega t is a multiple of pi
        foci = round(wt / np.pi)
        phase = -0.5 * np.pi * foci
        free = PulseSpec()(y).astype(complex)
    else:
        foci = np.floor(wt / np.pi)
        phase_h = -0.25 * np.pi - 0.5 * np.pi * foci
        phase_f = -0.25 * np.pi if tau > 0 else 0.25 * np.pi
        phase = phase_h - phase_f
        free = exact_square_packet(y, abs(tau))
        if tau < 0:
            free = np.conj(free)
    out = np.exp(1j * phase) / np.sqrt(abs(a)) * np.exp(0.5j * c * x * x / a) * free
    return out[()] if np.ndim(out) == 0 else out
