"""Complex error-function kernels.

The Faddeeva function ``w(z) = exp(-z**2) erfc(-iz)`` is the numerically
stable primitive; the complex error function and the Moshinsky shutter
function are expressed through it so that the exponentials that appear
stay bounded on the rays ``arg z = +-pi/4`` where the free-particle
solutions live.
"""

import numpy as np
from scipy import special

from .errors import DomainError

__all__ = ["faddeeva", "erf_complex", "erfc_complex", "moshinsky"]

_TWO_OVER_SQRT_PI = 2.0 / np.sqrt(np.pi)
# |z| below which the Maclaurin series is used for erf; 1 - exp(-z^2) w(iz)
# loses relative accuracy there.
_SERIES_RADIUS = 0.5
_SERIES_TERMS = 24
_SQRT_I = np.exp(-0.25j * np.pi)


def _as_complex(z, name="z"):
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    return arr


def _unwrap(arr):
    return arr[()] if arr.ndim == 0 else arr


def faddeeva(z):
    """Faddeeva function ``w(z) = exp(-z^2) erfc(-i z)``.

    Accepts scalars or arrays. Backed by the region-split algorithm in
    ``scipy.special.wofz`` (continued fraction far from the origin, Taylor
    and Chebyshev-type expansions near it).
    """
    arr = _as_complex(z)
    return _unwrap(special.wofz(arr))


def _erf_series(z):
    z2 = z * z
    term = z.copy()
    total = z.copy()
    for n in range(1, _SERIES_TERMS):
        term = term * (-z2) / n
        total = total + term / (2 * n + 1)
    return _TWO_OVER_SQRT_PI * total


def erf_complex(z):
    """Error function of complex argument.

    Uses ``erf(z) = 1 - exp(-z^2) w(iz)`` on the half plane ``Re z >= 0``
    and the odd reflection elsewhere, so ``w`` is only ever evaluated in
    the closed upper half plane where it is bounded. Small ``|z|`` goes
    through the Maclaurin series.
    """
    arr = _as_complex(z)
    out = np.empty_like(arr)
    small = np.abs(arr) < _SERIES_RADIUS
    if np.any(small):
        out[small] = _erf_series(arr[small])
    big = ~small
    if np.any(big):
        zb = arr[big]
        # reflect the left half plane (and the lower imaginary axis) so that
        # erf(-z) = -erf(z) holds bit for bit
        left = (zb.real < 0) | ((zb.real == 0) & (zb.imag < 0))
        sign = np.where(left, -1.0, 1.0)
        zr = zb * sign
        out[big] = sign * (1.0 - np.exp(-zr * zr) * special.wofz(1j * zr))
    return _unwrap(out)


def erfc_complex(z):
    """Complementary error function, ``1 - erf(z)`` without cancellation.

    For ``Re z >= 0`` this is ``exp(-z^2) w(iz)``; for ``Re z < 0`` the
    reflection ``erfc(z) = 2 - erfc(-z)`` is used.
    """
    arr = _as_complex(z)
    neg = arr.real < 0
    zr = np.where(neg, -arr, arr)
    base = np.exp(-zr * zr) * special.wofz(1j * zr)
    return _unwrap(np.where(neg, 2.0 - base, base))


def moshinsky(x, k, t):
    """Moshinsky shutter function.

    ``M(x, k, t) = 1/2 exp(i(kx - k^2 t/2)) erfc(e^{-i pi/4} (x - kt) / sqrt(2t))``

    This is the free evolution (hbar = m = 1) of the truncated plane wave
    ``exp(ikx) * theta(-x)``: it tends to the plane wave for ``x -> -inf``
    and to zero for ``x -> +inf``.

    Parameters
    ----------
    x : float or array_like
        Position.
    k : float or array_like
        Wavenumber of the incident plane wave.
    t : float
        Time since the shutter opened; must be positive.
    """
    t = float(t)
    if not t > 0:
        raise DomainError(f"moshinsky requires t > 0, got {t}")
    x = np.asarray(x, dtype=float)
    k = np.asarray(k, dtype=float)
    arg = _SQRT_I * (x - k * t) / np.sqrt(2.0 * t)
    phase = np.exp(1j * (k * x - 0.5 * k * k * t))
    return _unwrap(np.asarray(0.5 * phase * erfc_complex(arg)))
