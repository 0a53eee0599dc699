"""The replication series: a free wave as a sum of moving, phased copies of a block.

With the evolved packet as block the series is an exact identity and the
error falls with the truncation order; the wrong sign of the quadratic
phase breaks it. With the bare square as block it is the short-time
"mother wave" approximation, whose near-edge maxima multiply with n_max.
"""

import numpy as np

from ditwave import SpaceGrid, exact_square_packet, free_terms
from ditwave.caustics import ridge_extract
from ditwave.domain import sample_pattern
from ditwave.replication import evolved_block

t = 1e-3
grid = SpaceGrid(-1.0, 1.0, 2001)
x = grid.x
keep = np.abs(np.abs(x) - 0.5) > 1.5 * grid.dx
exact = exact_square_packet(x, t)

print(f"sup error off the edges at t = {t}, evolved block")
print("  n_max   q=+1     q=-1")
for n in (10, 30, 100, 200, 300):
    errs = [np.max(np.abs(free_terms(t, n, quadratic_sign=q)(x, block=evolved_block(t)) - exact)[keep])
            for q in (1, -1)]
    print(f"  {n:5d}   {errs[0]:.4f}   {errs[1]:.4f}")

print("\nmaxima of the mother-wave series in (0.3, 0.5) at t = 1e-3")
fine = SpaceGrid(-1.0, 1.0, 4001)
for n in (1, 5, 15, 30):
    pattern = sample_pattern(lambda x, t: free_terms(t, n)(x), [t], fine)
    print(f"  n_max = {n:3d}: {ridge_extract(pattern, (0.3, 0.5)).counts[0]} maxima")
