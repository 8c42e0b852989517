"""Exact diagonalization of the multimode junction Hamiltonian.

Independent check of the rotating-wave formulas.  In a truncated product Fock
basis the Hamiltonian

    H = sum_n omega_n a_n^dag a_n - E_J (cos X + X^2 / 2 - 1),
    X = sum_n lambda_n (a_n + a_n^dag)

is built without any series or rotating-wave truncation: matrix functions of
``X`` come from its eigendecomposition.  Constant offsets are dropped and all
energies are reported relative to the ground state, in rad/s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np
from scipy import linalg

from .circuit import DerivedParams
from .errors import DimensionError, OracleError, ParameterError
from .modes import ModeSet

MAX_DIMENSION = 200_000
LADDER_OVERLAP = 0.9
DEFAULT_CUTOFFS = (10, 4, 4)
N_LEVELS = 6


@dataclass(frozen=True)
class FockBasis:
    cutoffs: tuple  # maximum photon number per mode

    def __post_init__(self):
        cutoffs = tuple(int(c) for c in self.cutoffs)
        if not cutoffs or any(c < 1 for c in cutoffs):
            raise ParameterError("cutoffs", "need at least one mode with cutoff >= 1")
        object.__setattr__(self, "cutoffs", cutoffs)
        if self.dimension > MAX_DIMENSION:
            raise DimensionError(f"basis dimension {self.dimension} exceeds guard {MAX_DIMENSION}")

    @property
    def n_modes(self) -> int:
        return len(self.cutoffs)

    @property
    def dimension(self) -> int:
        return math.prod(c + 1 for c in self.cutoffs)

    def incremented(self) -> "FockBasis":
        return FockBasis(tuple(c + 1 for c in self.cutoffs))

    def index(self, occupation) -> int:
        """Position of a product Fock state; mode 1 is the slowest-varying digit."""
        idx = 0
        for n, c in zip(occupation, self.cutoffs):
            if not 0 <= n <= c:
                raise ParameterError("occupation", f"{occupation} outside cutoffs {self.cutoffs}")
            idx = idx * (c + 1) + n
        return idx


def annihilation(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), 1)


def _embed(op: np.ndarray, mode: int, basis: FockBasis) -> np.ndarray:
    factors = [op if i == mode else np.eye(c + 1) for i, c in enumerate(basis.cutoffs)]
    return reduce(np.kron, factors)


def number_diagonal(basis: FockBasis) -> np.ndarray:
    """Photon numbers of every basis state, shape ``(dimension, n_modes)``."""
    grids = np.meshgrid(*[np.arange(c + 1) for c in basis.cutoffs], indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def build_quadrature_operator(ms: ModeSet, basis: FockBasis) -> np.ndarray:
    """Matrix of the junction phase ``sum_n lambda_n (a_n + a_n^dag)``."""
    if basis.n_modes > len(ms):
        raise ParameterError("basis", f"{basis.n_modes} modes requested, mode set has {len(ms)}")
    X = np.zeros((basis.dimension, basis.dimension))
    for i, c in enumerate(basis.cutoffs):
        a = annihilation(c)
        X += ms[i].lam * _embed(a + a.T, i, basis)
    return 0.5 * (X + X.T)


def matrix_function(X: np.ndarray, func) -> np.ndarray:
    """``func(X)`` for symmetric ``X`` via its eigendecomposition."""
    try:
        w, V = linalg.eigh(X)
    except linalg.LinAlgError as err:
        raise OracleError(f"eigendecomposition failed: {err}")
    F = (V * func(w)) @ V.T
    return 0.5 * (F + F.T)


def cos_operator(X: np.ndarray) -> np.ndarray:
    return matrix_function(X, np.cos)


def sin_operator(X: np.ndarray) -> np.ndarray:
    return matrix_function(X, np.sin)


def _quartic_remainder(w):
    """``cos w - 1 + w^2 / 2`` without cancellation at small ``w``."""
    w = np.asarray(w, dtype=float)
    w2 = w * w
    series = np.zeros_like(w)
    term = w2 * w2 / 24.0
    for k in range(2, 12):
        series += term
        term = -term * w2 / ((2 * k + 1) * (2 * k + 2))
    direct = np.cos(w) - 1.0 + 0.5 * w2
    return np.where(np.abs(w) < 0.5, series, direct)


def oracle_hamiltonian(ms: ModeSet, d: DerivedParams, basis: FockBasis) -> np.ndarray:
    X = build_quadrature_operator(ms, basis)
    occ = number_diagonal(basis)
    linear = occ @ ms.omegas[: basis.n_modes]
    H = -d.E_J_rad * matrix_function(X, _quartic_remainder)
    H[np.diag_indices_from(H)] += linear
    return H


@dataclass(frozen=True)
class OracleResult:
    energies: np.ndarray  # lowest levels above the ground state [rad/s]
    U_eff: float  # [rad/s]
    delta_omega_eff: float  # [rad/s]
    convergence: float  # relative change of U_eff under a cutoff increment
    overlaps: tuple = field(default=())  # |<ladder state|Fock n,0..>|^2 for n = 0, 1, 2

    @property
    def converged(self) -> bool:
        return self.convergence < 0.01


def _ladder(ms, d, basis, n_levels):
    H = oracle_hamiltonian(ms, d, basis)
    E, V = linalg.eigh(H)
    picked = []
    overlaps = []
    for n in range(3):
        weights = V[basis.index((n,) + (0,) * (basis.n_modes - 1)), :] ** 2
        j = int(np.argmax(weights))
        if weights[j] <= LADDER_OVERLAP:
            raise OracleError(
                f"no eigenstate overlaps Fock state |{n},0,..> by more than {LADDER_OVERLAP} "
                f"(best {weights[j]:.3f})"
            )
        picked.append(j)
        overlaps.append(float(weights[j]))
    if len(set(picked)) < 3:
        raise OracleError("ladder states are not distinct")
    E0 = E[picked[0]]
    E1 = E[picked[1]] - E0
    E2 = E[picked[2]] - E0
    energies = (E - E[0])[:n_levels]
    return energies, (2 * E1 - E2) / 2, E1, tuple(overlaps)


def diagonalize_full(ms: ModeSet, d: DerivedParams, basis: FockBasis | None = None, check_convergence: bool = True, n_levels: int = N_LEVELS) -> OracleResult:
    """Extract ``U`` and the frequency shift of mode 1 from the exact spectrum.

    With ladder energies ``E_n`` (``n`` photons in mode 1, rest in vacuum),
    ``U_eff = (2 E_1 - E_2) / 2`` and ``delta_omega_eff = omega_1 - E_1``.
    """
    basis = basis or FockBasis(DEFAULT_CUTOFFS[: len(ms)])
    if basis.cutoffs[0] < 2:
        raise ParameterError("cutoffs", "mode 1 needs a cutoff >= 2 to resolve U")
    energies, U_eff, E1, overlaps = _ladder(ms, d, basis, n_levels)
    convergence = 0.0
    if check_convergence:
        _, U_next, _, _ = _ladder(ms, d, basis.incremented(), n_levels)
        scale = abs(U_eff)
        convergence = abs(U_next - U_eff) / scale if scale > 0 else abs(U_next - U_eff)
    return OracleResult(
        energies=energies,
        U_eff=float(U_eff),
        delta_omega_eff=float(ms[0].omega - E1),
        convergence=float(convergence),
        overlaps=overlaps,
    )


def oracle_current_variance(ms: ModeSet, d: DerivedParams, basis: FockBasis, n_photons: int) -> float:
    """``I_c sqrt(<n,0..| sin^2 X |n,0..>)`` evaluated in the truncated basis [A]."""
    if n_photons < 0:
        raise ParameterError("n_photons", "must be >= 0")
    if n_photons > basis.cutoffs[0] - 2:
        raise ParameterError(
            "cutoffs", f"mode-1 cutoff {basis.cutoffs[0]} too small for {n_photons} photons (need n + 2)"
        )
    S = sin_operator(build_quadrature_operator(ms, basis))
    col = S[:, basis.index((n_photons,) + (0,) * (basis.n_modes - 1))]
    I_c = 2 * math.pi * d.E_J / d.phi0
    return I_c * math.sqrt(float(col @ col))
