"""Trap and interactions.

In a harmonic trap the packet is mapped to the free solution by the lens
relation and revives, mirrored, after half a period. The split-step solver
reproduces that, and with a repulsive interaction g the packet spreads
faster while its norm stays fixed.
"""

import numpy as np

from ditwave import PulseSpec, SpaceGrid, propagator_quadrature
from ditwave.exact import PropagatorParams, harmonic_from_free
from ditwave.pde import SolverConfig, periodic_grid, prepare_initial, spatial_variance, split_step_evolve

x = SpaceGrid(-1.0, 1.0, 201).x
for t in (5e-3, 0.3, 2.0):
    ref = propagator_quadrature(PulseSpec(), PropagatorParams("harmonic", t, 1.0), x)
    print(f"lens relation vs quadrature, omega t = {t}: {np.max(np.abs(harmonic_from_free(x, t, 1.0) - ref)):.1e}")

pulse = PulseSpec(0.8, 1.0, "square", 0.15)
grid = periodic_grid((-20, 20), 0.02)
n = int(np.ceil(np.pi / (2 * np.pi / (np.pi / grid.dx) ** 2)))
out = split_step_evolve(prepare_initial(pulse, grid), SolverConfig(np.pi / n, n, omega=1.0))
print(f"\nhalf-period revival ({n} steps): max ||psi| - |psi0(-x)|| = "
      f"{np.max(np.abs(np.abs(out.samples) - np.abs(pulse(-grid.x)))):.1e}")

pulse = PulseSpec(0.0, 1.0, "square", 0.05)
grid = periodic_grid((-4, 4), 0.005)
field = prepare_initial(pulse, grid)
dt = 0.95 * 2 * np.pi / (np.pi / grid.dx) ** 2
steps = int(round(0.1 / dt))
print("\nspatial variance at t = 0.1")
for g in (0.0, 25.0, 50.0, 100.0):
    res = split_step_evolve(field, SolverConfig(0.1 / steps, steps, g=g))
    print(f"  g = {g:5.1f}: variance {spatial_variance(res):.4f}, norm {res.norm2:.12f}")
