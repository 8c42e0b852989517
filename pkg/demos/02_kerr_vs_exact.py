"""Kerr constant of the fundamental mode, closed form against brute force.

The closed form keeps only photon-number-conserving terms of the cosine
potential and sums the renormalization from every mode.  Here it is checked
against exact diagonalization of the three lowest modes in a truncated Fock
space at a handful of critical currents.
"""

import numpy as np

from kerrline import (
    CircuitParams,
    FockBasis,
    build_modes,
    charging_kerr,
    derive,
    diagonalize_full,
    kerr_parameters,
    solve_spectrum,
)

MHZ = 2 * np.pi * 1e6

base = CircuitParams(l=5e-7, c=2e-10, L=0.01, C_J=1.9e-12, I_c=1e-6)
print(f"charging limit e^2/(4 C_J hbar) = {charging_kerr(base.C_J) / MHZ:.3f} MHz")
print()
print(f"{'I_c [uA]':>9} {'f_1 [GHz]':>10} {'U rwa':>9} {'U exact':>9} {'dev':>7} {'lambda_1':>9}")
for I_c in np.geomspace(1e-7, 3e-6, 7):
    p = base.with_critical_current(I_c)
    d = derive(p)
    ms = build_modes(p, solve_spectrum(p, 10))
    kr = kerr_parameters(ms, d)
    ex = diagonalize_full(ms, d, FockBasis((10, 4, 4)))
    dev = abs(ex.U_eff - kr.U) / kr.U
    print(
        f"{I_c * 1e6:9.3f} {ms[0].freq_GHz:10.4f} {kr.U / MHZ:9.4f} {ex.U_eff / MHZ:9.4f} "
        f"{dev:7.2%} {ms[0].lam:9.4f}"
    )
