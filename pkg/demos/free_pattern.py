"""Diffraction in time of a suddenly released square packet.

Samples the closed-form wave at a few times, checks it against the
propagator quadrature, and shows the short-time tail outside the pulse:
each edge radiates an amplitude sqrt(t / 2 pi) / |x - edge| with phase
(x - edge)^2 / 2t, and the two contributions interfere.
"""

import numpy as np

from ditwave import PulseSpec, exact_square_packet, propagator_quadrature
from ditwave.exact import PropagatorParams

x = np.linspace(-1.5, 1.5, 13)

print("closed form vs quadrature, |psi|^2 at 13 points")
for t in (1e-3, 1e-2, 0.1, 1.0):
    psi = exact_square_packet(x, t)
    ref = propagator_quadrature(PulseSpec(), PropagatorParams("free", t), x)
    print(f"  t = {t:<6g} max |diff| = {np.max(np.abs(psi - ref)):.1e}  "
          f"|psi|^2 = {np.array2string(np.abs(psi) ** 2, precision=3, max_line_width=200)}")



def edge_tail(x, t):
    return np.sqrt(t / (2 * np.pi)) * abs(
        sum(side * np.exp(0.5j * (x - e) ** 2 / t) / (x - e) for e, side in ((0.5, 1), (-0.5, -1))))


print("\nFresnel tail at x = 1: exact against the two-edge sum")
for t in (1e-6, 1e-5, 1e-4, 1e-3):
    print(f"  t = {t:<6g} |psi| = {abs(exact_square_packet(1.0, t)):.4e}   edges {edge_tail(1.0, t):.4e}")

print("\ncentre of the pulse: |psi(0, t) - 1| against 4 sqrt(t / 2 pi)")
for t in (1e-6, 1e-4, 1e-3):
    print(f"  t = {t:<6g} {abs(exact_square_packet(0.0, t) - 1):.4e}  {4 * np.sqrt(t / (2 * np.pi)):.4e}")
