"""Eigenmodes, Kerr nonlinearities and Bose-Hubbard lattices of transmission
line resonators intersected by a Josephson junction."""

__version__ = "0.1.0"

from .circuit import (
    E_CHARGE,
    HBAR,
    PHI0,
    CircuitParams,
    DerivedParams,
    bare_mode_frequencies,
    charging_kerr,
    derive,
)
from .errors import (
    BranchCountError,
    ConfigError,
    ConvergenceError,
    DimensionError,
    KerrlineError,
    OracleError,
    ParameterError,
    PoleProximityError,
    TruncationError,
)
from .spectrum import SpectrumResult, SweepResult, residual, solve_spectrum, sweep_spectrum
from .modes import (
    Mode,
    ModeSet,
    build_modes,
    gram_matrix,
    junction_current_variance,
    line_current_variance_profile,
    scalar_product,
)
from .kerr import KerrResult, effective_mode_hamiltonian, kerr_parameters
from .oracle import (
    FockBasis,
    OracleResult,
    build_quadrature_operator,
    cos_operator,
    diagonalize_full,
    oracle_current_variance,
    sin_operator,
)
from .lattice import (
    BoseHubbardModel,
    CouplingResult,
    build_chain,
    coupling_strengths,
    diagonalize_sector,
)
from .config import RunConfig, load_config, load_demo_config
