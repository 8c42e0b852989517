"""Rotating-wave Kerr parameters of the fundamental mode.

Keeping only number-conserving terms of the junction cosine, with every mode
but the fundamental in vacuum, leaves

    H_1 = (omega_1 - delta_omega) a^dag a - U a^dag a^dag a a

    delta_omega = E_J lambda_1^2 (1 - P)
    U           = E_J lambda_1^4 / 4 * P,      P = prod_n exp(-lambda_n^2 / 2)

with ``E_J`` in angular-frequency units.  ``U`` is reported as a positive
magnitude; the nonlinearity softens the mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import DerivedParams
from .errors import TruncationError
from .modes import TAIL_TOL, ModeSet, lambda_tail


@dataclass(frozen=True)
class KerrResult:
    delta_omega: float  # [rad/s]
    U: float  # [rad/s]
    product_factor: float
    n_modes_used: int
    truncation_error_bound: float  # relative change of product_factor from the estimated tail

    @property
    def U_MHz(self) -> float:
        return self.U / (2 * math.pi) / 1e6

    @property
    def delta_omega_MHz(self) -> float:
        return self.delta_omega / (2 * math.pi) / 1e6


def kerr_from_lambdas(E_J_rad: float, lambdas) -> tuple[float, float, float]:
    """``(delta_omega, U, product_factor)`` for phase fluctuations ``lambdas``.

    ``lambdas[0]`` belongs to the fundamental mode.
    """
    lam = np.asarray(lambdas, dtype=float)
    P = math.exp(-0.5 * float(np.sum(lam**2)))
    lam1_sq = float(lam[0]) ** 2
    # 1 - P computed without cancellation for tiny lambdas
    one_minus_P = -math.expm1(-0.5 * float(np.sum(lam**2)))
    return E_J_rad * lam1_sq * one_minus_P, E_J_rad * lam1_sq**2 / 4 * P, P


def kerr_parameters(ms: ModeSet, d: DerivedParams, check_convergence: bool = True) -> KerrResult:
    if check_convergence and not ms.converged:
        raise TruncationError(
            f"estimated tail of {len(ms)} modes changes the vacuum product by "
            f"{-math.expm1(-ms.tail_lambda_sq / 2):.3g} (> {TAIL_TOL}); add modes"
        )
    delta_omega, U, P = kerr_from_lambdas(d.E_J_rad, ms.lambdas)
    tail = lambda_tail(ms.omegas, ms.lambdas)
    return KerrResult(
        delta_omega=delta_omega,
        U=U,
        product_factor=P,
        n_modes_used=len(ms),
        truncation_error_bound=-math.expm1(-tail / 2),
    )


def effective_mode_hamiltonian(ms: ModeSet, kr: KerrResult) -> tuple[float, float]:
    """``(omega_eff, U)`` of the fundamental mode in rad/s."""
    return ms[0].omega - kr.delta_omega, kr.U
