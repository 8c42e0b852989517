"""Spatial mode functions, mode capacitances and current fluctuations.

Mode ``n`` has the flux profile

    f_l(x) =  cos(k (x + L/2))   for -L/2 <= x <= 0
    f_r(x) = -cos(k (x - L/2))   for  0 <= x <= L/2

with ``k = omega / v``, so the flux drop across the junction is
``delta_f = f_l(0) - f_r(0) = 2 cos(kL/2)``.  The modes are orthogonal under
the capacitance-weighted product ``c <f_n, f_m> + C_J delta_f_n delta_f_m``,
whose diagonal is the mode capacitance ``eta_n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import HBAR, PHI0, CircuitParams, DerivedParams, derive
from .errors import ParameterError
from .spectrum import SpectrumResult

# Tail estimate for the product of vacuum factors over modes beyond the cutoff
TAIL_FIT_MODES = 3
TAIL_VIRTUAL_MODES = 40
TAIL_TOL = 1e-3


@dataclass(frozen=True)
class Mode:
    n: int  # 1-based mode index
    omega: float  # [rad/s]
    k: float  # [1/m]
    delta_f: float  # normalized flux drop across the junction
    eta: float  # mode capacitance [F]
    lam: float  # zero-point phase fluctuation across the junction

    @property
    def freq_GHz(self) -> float:
        return self.omega / (2 * math.pi) / 1e9


@dataclass(frozen=True)
class ModeSet:
    modes: tuple
    n_modes: int
    converged: bool
    tail_lambda_sq: float = 0.0  # estimated sum of lambda^2 over truncated modes

    def __post_init__(self):
        if [m.n for m in self.modes] != list(range(1, len(self.modes) + 1)):
            raise ParameterError("modes", "indices must be contiguous from 1")
        omegas = [m.omega for m in self.modes]
        if any(b <= a for a, b in zip(omegas, omegas[1:])):
            raise ParameterError("modes", "must be sorted by strictly increasing omega")

    def __len__(self):
        return len(self.modes)

    def __getitem__(self, i):
        return self.modes[i]

    @property
    def omegas(self) -> np.ndarray:
        return np.array([m.omega for m in self.modes])

    @property
    def etas(self) -> np.ndarray:
        return np.array([m.eta for m in self.modes])

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([m.lam for m in self.modes])


def zero_point_phase(delta_f: float, eta: float, omega: float) -> float:
    """Phase fluctuation ``2 pi delta_f / phi0 * sqrt(hbar / (2 eta omega))``."""
    return 2 * math.pi * delta_f / PHI0 * math.sqrt(HBAR / (2 * eta * omega))


def mode_capacitance(k: float, omega: float, delta_f: float, p: CircuitParams, d: DerivedParams) -> float:
    return p.c * (
        p.L / 2
        + delta_f**2 / k**2 * p.l / (2 * d.L_J) * (1 + omega**2 / d.omega_p**2)
    )


def lambda_tail(omegas: np.ndarray, lambdas: np.ndarray) -> float:
    """Estimated sum of ``lambda_n^2`` over modes beyond the last one given.

    ``lambda_n^2`` is fitted to ``a / omega_n`` on the last three modes and the
    fit is summed over 40 virtual modes continuing the last mode spacing.  The
    true tail falls off faster than ``1/omega``, so this overestimates it.
    """
    if len(omegas) < 2:
        return 0.0
    w = np.asarray(omegas[-TAIL_FIT_MODES:], dtype=float)
    lam_sq = np.asarray(lambdas[-TAIL_FIT_MODES:], dtype=float) ** 2
    a = np.sum(lam_sq / w) / np.sum(1.0 / w**2)
    spacing = float(np.mean(np.diff(w)))
    virtual = w[-1] + spacing * np.arange(1, TAIL_VIRTUAL_MODES + 1)
    return float(np.sum(a / virtual))


def build_modes(p: CircuitParams, spec: SpectrumResult) -> ModeSet:
    d = derive(p)
    modes = []
    for i, omega in enumerate(spec.omegas):
        omega = float(omega)
        if not omega > 0:
            raise ParameterError("spectrum", f"non-positive frequency at index {i}")
        k = omega / d.v
        delta_f = 2 * math.cos(k * p.L / 2)
        eta = mode_capacitance(k, omega, delta_f, p, d)
        modes.append(Mode(i + 1, omega, k, delta_f, eta, zero_point_phase(delta_f, eta, omega)))
    ms = [m.omega for m in modes]
    tail = lambda_tail(np.array(ms), np.array([m.lam for m in modes]))
    converged = (1.0 - math.exp(-tail / 2)) < TAIL_TOL
    return ModeSet(tuple(modes), len(modes), converged, tail)


# -- mode functions ---------------------------------------------------------


def mode_function(mode: Mode, x, L: float, sign: float = 1.0):
    x = np.asarray(x, dtype=float)
    left = np.cos(mode.k * (x + L / 2))
    right = -np.cos(mode.k * (x - L / 2))
    return sign * np.where(x <= 0, left, right)


def mode_derivative(mode: Mode, x, L: float, sign: float = 1.0):
    """Analytic ``d f / dx``; both branches agree at ``x = 0``."""
    x = np.asarray(x, dtype=float)
    left = -mode.k * np.sin(mode.k * (x + L / 2))
    right = mode.k * np.sin(mode.k * (x - L / 2))
    return sign * np.where(x <= 0, left, right)


def _cos_overlap(ka: float, kb: float, length: float) -> float:
    """``int_0^length cos(ka s) cos(kb s) ds``."""
    if ka == kb:
        return length / 2 + math.sin(2 * ka * length) / (4 * ka)
    return 0.5 * (
        math.sin((ka - kb) * length) / (ka - kb) + math.sin((ka + kb) * length) / (ka + kb)
    )


def scalar_product(m1: Mode, m2: Mode, p: CircuitParams) -> float:
    """Generalized product ``c int f_n f_m dx + C_J delta_f_n delta_f_m`` [F].

    The line integral is closed-form; each half contributes the same overlap
    of cosines measured from its open end.
    """
    line = 2 * _cos_overlap(m1.k, m2.k, p.L / 2)
    return p.c * line + p.C_J * m1.delta_f * m2.delta_f


def gram_matrix(ms: ModeSet, p: CircuitParams) -> np.ndarray:
    n = len(ms)
    G = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            G[i, j] = G[j, i] = scalar_product(ms[i], ms[j], p)
    return G


# -- current fluctuations ---------------------------------------------------

MAX_CLOSED_FORM_PHOTONS = 2


def junction_current_variance(ms: ModeSet, d: DerivedParams, n_photons: int, I_c: float | None = None) -> float:
    """Current spread through the junction's inductive branch [A].

    The fundamental mode holds ``n_photons`` photons and all other modes are in
    vacuum.  The closed form is exact only for ``n_photons <= 2``; larger
    occupations must go through :func:`kerrline.oracle.oracle_current_variance`.
    ``I_c`` defaults to the value implied by ``d.E_J``.
    """
    if n_photons < 0:
        raise ParameterError("n_photons", "must be >= 0")
    if n_photons > MAX_CLOSED_FORM_PHOTONS:
        raise ParameterError(
            "n_photons",
            f"closed form is exact only up to {MAX_CLOSED_FORM_PHOTONS} photons; "
            "use oracle.oracle_current_variance for higher occupations",
        )
    if I_c is None:
        I_c = 2 * math.pi * d.E_J / d.phi0
    lam = ms.lambdas
    lam1_sq = lam[0] ** 2
    n = n_photons
    cos_2phi = math.exp(-2 * float(np.sum(lam**2))) * (
        1 - 4 * lam1_sq * n + 4 * lam1_sq**2 * n * (n - 1)
    )
    return I_c * math.sqrt(max(0.0, 0.5 * (1 - cos_2phi)))


def line_current_variance_profile(ms: ModeSet, p: CircuitParams, n_photons: int, x_grid, n_cutoff: int | None = None, sign: float = 1.0):
    """Current spread ``Delta I_r(x)`` along the line [A].

    Returns ``(x, current)`` arrays.  Only the fundamental mode is occupied
    (``n_photons``); modes 2..n_cutoff contribute their vacuum fluctuations.
    """
    x = np.asarray(x_grid, dtype=float)
    if np.any(x < -p.L / 2) or np.any(x > p.L / 2):
        raise ParameterError("x_grid", "positions must lie within [-L/2, L/2]")
    if n_photons < 0:
        raise ParameterError("n_photons", "must be >= 0")
    n_cutoff = len(ms) if n_cutoff is None else n_cutoff
    if not 1 <= n_cutoff <= len(ms):
        raise ParameterError("n_cutoff", f"must be between 1 and {len(ms)}")
    var = np.zeros_like(x)
    for mode in ms.modes[:n_cutoff]:
        weight = (2 * n_photons + 1) if mode.n == 1 else 1
        var += weight * mode_derivative(mode, x, p.L, sign) ** 2 * HBAR / (2 * mode.eta * mode.omega)
    return x, np.sqrt(var) / p.l


def default_x_grid(L: float, points_per_half: int = 401) -> np.ndarray:
    left = np.linspace(-L / 2, 0.0, points_per_half)
    return np.concatenate([left, -left[-2::-1]])
