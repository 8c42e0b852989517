"""From one Kerr resonator to a capacitively coupled chain.

The single-resonator frequency and Kerr constant feed a Bose-Hubbard chain
whose hopping comes from the coupling capacitance.  With a few femtofarads
the hopping stays below the Kerr constant at this bias, so two photons on
the same site form a bound band split off below the scattering states.
"""

import numpy as np

from kerrline import (
    BoseHubbardModel,
    CircuitParams,
    build_modes,
    coupling_strengths,
    derive,
    diagonalize_sector,
    effective_mode_hamiltonian,
    kerr_parameters,
    solve_spectrum,
)

GHZ, MHZ = 2 * np.pi * 1e9, 2 * np.pi * 1e6

p = CircuitParams(l=5e-7, c=2e-10, L=0.01, C_J=1.9e-12, I_c=3e-7, C_c=5e-15)
ms = build_modes(p, solve_spectrum(p, 10))
omega, U = effective_mode_hamiltonian(ms, kerr_parameters(ms, derive(p)))
g = coupling_strengths(ms, p).g_per_mode[0]
print(f"omega_eff = {omega / GHZ:.4f} GHz, U = {U / MHZ:.3f} MHz, g = {g / MHZ:.3f} MHz, U/g = {U / g:.3f}")

for N in (3, 5):
    chain = BoseHubbardModel(N, omega, U, g, fock_cutoff=2)
    one = diagonalize_sector(chain, 1).energies
    two = diagonalize_sector(chain, 2).energies
    print()
    print(f"{N} sites, open ends")
    print("  one photon  [GHz]:", np.round(one / GHZ, 4))
    print("  two photons [GHz]:", np.round(two / GHZ, 4))
    print(f"  two-photon binding 2 E1 - E2 = {(2 * one[0] - two[0]) / MHZ:.3f} MHz")

# the binding energy tends to 2U once hopping is switched off
weak = BoseHubbardModel(3, omega, U, 1e-3 * U, 3)
b = 2 * diagonalize_sector(weak, 1).energies[0] - diagonalize_sector(weak, 2).energies[0]
print()
print(f"g/U = 1e-3: binding {b / MHZ:.4f} MHz vs 2U = {2 * U / MHZ:.4f} MHz")
