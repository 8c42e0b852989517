"""Avoided crossing between the junction mode and the line modes.

Sweeps the critical current over two decades and prints the two lowest
branches next to the plasma frequency.  Far below the crossing the lowest
branch follows the junction; far above it settles onto the first bare line
mode at v / 2L.  The closest approach of the two branches is a sizeable
fraction of the mode frequency itself.
"""

import numpy as np

from kerrline import CircuitParams, derive
from kerrline.spectrum import default_grid, sweep_spectrum

GHZ = 2 * np.pi * 1e9

p = CircuitParams(l=5e-7, c=2e-10, L=0.01, C_J=1.9e-12, I_c=1e-6)
grid = default_grid()
sw = sweep_spectrum(p, grid, n_modes=4, threads=0)

print(f"{'I_c [uA]':>9} {'f_p':>8} {'f_1':>8} {'f_2':>8} {'f_3':>8}   [GHz]")
for i in range(0, len(grid), 15):
    wp = derive(p.with_critical_current(grid[i])).omega_p
    f = sw.branches[i] / GHZ
    print(f"{grid[i] * 1e6:9.3f} {wp / GHZ:8.3f} {f[0]:8.3f} {f[1]:8.3f} {f[2]:8.3f}")

gap, i = sw.pair_min_gap(0)
print()
print(f"closest approach of branches 1 and 2: {gap / GHZ:.3f} GHz at I_c = {grid[i] * 1e6:.3f} uA")
print(f"that is {gap / sw.branches[i, 0]:.2f} of the lower branch frequency")
worst = max(np.max(np.abs(spec.residuals)) for _, spec in sw.points)
print(f"largest relative residual over the sweep: {worst:.1e}")
