"""Capacitive coupling between resonators and the resulting Bose-Hubbard chain.

Same-index modes of neighbouring resonators exchange photons at
``g_n = C_c omega_n / (4 eta_n)``; couplings between different mode indices are
dropped in the rotating-wave approximation.  A chain of resonators driven in
their fundamental mode is then

    H = sum_i [omega_eff n_i - U n_i (n_i - 1)] - g sum_<ij> (a_i^dag a_j + h.c.)
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import linalg, sparse

from .circuit import CircuitParams
from .errors import DimensionError, ParameterError
from .modes import ModeSet

MAX_DIMENSION = 200_000
MAX_SECTOR_DIMENSION = 20_000
SMALL_COUPLING_LIMIT = 0.05


@dataclass(frozen=True)
class CouplingResult:
    g_per_mode: np.ndarray  # [rad/s]
    eta_per_mode: np.ndarray  # [F]
    omega_per_mode: np.ndarray  # [rad/s]
    C_c: float
    warning: str | None = None

    @property
    def small_parameter(self) -> float:
        """``C_c / eta_1``; the coupling model assumes this is small."""
        return self.C_c / float(self.eta_per_mode[0])


def coupling_strengths(ms: ModeSet, p: CircuitParams) -> CouplingResult:
    omegas, etas = ms.omegas, ms.etas
    g = p.C_c * omegas / (4 * etas)
    warning = None
    if p.C_c == 0:
        warning = "C_c = 0: resonators are uncoupled"
    elif p.C_c / etas[0] > SMALL_COUPLING_LIMIT:
        warning = (
            f"C_c / eta_1 = {p.C_c / etas[0]:.3g} exceeds {SMALL_COUPLING_LIMIT}; "
            "the unperturbed conjugate momenta are no longer a good approximation"
        )
    if warning:
        warnings.warn(warning, stacklevel=2)
    return CouplingResult(g, etas, omegas, p.C_c, warning)


def cross_mode_coupling(ms: ModeSet, p: CircuitParams, n: int, m: int) -> float:
    """Heuristic magnitude of the exchange between mode ``n`` and mode ``m`` (1-based)
    of neighbouring resonators.

    Uses geometric means of the two frequencies and capacitances.  These
    terms are excluded from the lattice model; the value is diagnostic only.
    """
    a, b = ms[n - 1], ms[m - 1]
    return p.C_c * math.sqrt(a.omega * b.omega) / (4 * math.sqrt(a.eta * b.eta))


@dataclass(frozen=True)
class BoseHubbardModel:
    n_sites: int
    omega_eff: float  # [rad/s]
    U: float  # [rad/s], entering as -U n(n-1)
    g: float  # [rad/s], entering as -g (a_i^dag a_j + h.c.)
    fock_cutoff: int
    boundary: str = "open"

    def __post_init__(self):
        if self.n_sites < 1:
            raise ParameterError("n_sites", "must be >= 1")
        if self.fock_cutoff < 1:
            raise ParameterError("fock_cutoff", "must be >= 1")
        if self.boundary not in ("open", "periodic"):
            raise ParameterError("boundary", "expected 'open' or 'periodic'")
        if self.dimension > MAX_DIMENSION:
            raise DimensionError(f"dimension {self.dimension} exceeds guard {MAX_DIMENSION}")

    @property
    def dimension(self) -> int:
        return (self.fock_cutoff + 1) ** self.n_sites

    @property
    def bonds(self) -> list[tuple[int, int]]:
        pairs = [(i, i + 1) for i in range(self.n_sites - 1)]
        if self.boundary == "periodic" and self.n_sites > 2:
            pairs.append((self.n_sites - 1, 0))
        return pairs


def _site_operator(op, site, model):
    eye = sparse.identity(model.fock_cutoff + 1, format="csr")
    factors = [op if i == site else eye for i in range(model.n_sites)]
    out = factors[0]
    for f in factors[1:]:
        out = sparse.kron(out, f, format="csr")
    return out


def build_chain(model: BoseHubbardModel) -> sparse.csr_matrix:
    """Full Hamiltonian in the product Fock basis (site 0 most significant)."""
    n = np.arange(model.fock_cutoff + 1, dtype=float)
    onsite = sparse.diags(model.omega_eff * n - model.U * n * (n - 1))
    a = sparse.diags(np.sqrt(n[1:]), 1, format="csr")
    H = sparse.csr_matrix((model.dimension, model.dimension))
    for i in range(model.n_sites):
        H = H + _site_operator(onsite, i, model)
    ops = [_site_operator(a, i, model) for i in range(model.n_sites)]
    for i, j in model.bonds:
        hop = ops[i].T @ ops[j]
        H = H - model.g * (hop + hop.T)
    return H.tocsr()


def total_number(model: BoseHubbardModel) -> np.ndarray:
    """Total photon number of every product basis state."""
    grids = np.meshgrid(*[np.arange(model.fock_cutoff + 1)] * model.n_sites, indexing="ij")
    return sum(g.ravel() for g in grids)


def sector_states(model: BoseHubbardModel, n_total: int) -> list[tuple]:
    """Occupation tuples with ``n_total`` photons, in product-basis order."""
    return [
        occ
        for occ in itertools.product(range(model.fock_cutoff + 1), repeat=model.n_sites)
        if sum(occ) == n_total
    ]


@dataclass(frozen=True)
class SectorResult:
    energies: np.ndarray  # ascending [rad/s]
    states: np.ndarray  # eigenvectors as columns in the sector basis
    basis: list


def sector_hamiltonian(model: BoseHubbardModel, n_total: int) -> tuple[np.ndarray, list]:
    if n_total < 0:
        raise ParameterError("n_total", "must be >= 0")
    states = sector_states(model, n_total)
    if len(states) > MAX_SECTOR_DIMENSION:
        raise DimensionError(f"sector dimension {len(states)} exceeds guard {MAX_SECTOR_DIMENSION}")
    index = {occ: k for k, occ in enumerate(states)}
    H = np.zeros((len(states), len(states)))
    for k, occ in enumerate(states):
        H[k, k] = sum(model.omega_eff * m - model.U * m * (m - 1) for m in occ)
        for i, j in model.bonds:
            for src, dst in ((j, i), (i, j)):
                if occ[src] == 0 or occ[dst] == model.fock_cutoff:
                    continue
                new = list(occ)
                new[src] -= 1
                new[dst] += 1
                amp = math.sqrt(occ[src] * (occ[dst] + 1))
                H[index[tuple(new)], k] -= model.g * amp
    return H, states


def diagonalize_sector(model: BoseHubbardModel, n_total: int) -> SectorResult:
    H, states = sector_hamiltonian(model, n_total)
    if not states:
        return SectorResult(np.empty(0), np.empty((0, 0)), states)
    E, V = linalg.eigh(H)
    return SectorResult(E, V, states)
