"""Device parameters, physical constants and closed-form derived quantities.

All quantities are SI. Angular frequencies are in rad/s; conversion to GHz
(``omega / 2 pi``) happens only at the reporting layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError

# CODATA 2018 exact/fixed values
PHI0 = 2.067833848e-15  # flux quantum h/2e [Wb]
E_CHARGE = 1.602176634e-19  # [C]
H_PLANCK = 6.62607015e-34  # [J s]
HBAR = H_PLANCK / (2 * math.pi)

MIN_LENGTH = 1e-6  # [m]


@dataclass(frozen=True)
class CircuitParams:
    """Raw device inputs.

    Attributes
    ----------
    l, c : float
        Inductance [H/m] and capacitance [F/m] per unit length of the line.
    L : float
        Total resonator length [m]; the junction sits at ``x = 0``.
    C_J : float
        Junction shunting capacitance [F].
    I_c : float
        Junction critical current [A].
    C_c : float
        Capacitance coupling neighbouring resonators [F].
    """

    l: float
    c: float
    L: float
    C_J: float
    I_c: float
    C_c: float = 0.0

    def __post_init__(self):
        for name in ("l", "c", "L", "C_J", "I_c", "C_c"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ParameterError(name, f"expected a real number, got {value!r}")
            if not math.isfinite(value):
                raise ParameterError(name, "must be finite")
            if name == "C_c":
                if value < 0:
                    raise ParameterError(name, "must be >= 0")
            elif value <= 0:
                raise ParameterError(name, "must be > 0")
        if self.L < MIN_LENGTH:
            raise ParameterError("L", f"must be >= {MIN_LENGTH} m")

    def with_critical_current(self, I_c: float) -> "CircuitParams":
        return CircuitParams(self.l, self.c, self.L, self.C_J, float(I_c), self.C_c)


@dataclass(frozen=True)
class DerivedParams:
    E_J: float  # Josephson energy [J]
    L_J: float  # Josephson inductance [H]
    omega_p: float  # plasma angular frequency [rad/s]
    v: float  # phase velocity [m/s]
    Z0: float  # characteristic impedance [Ohm]
    phi0: float = PHI0

    @property
    def E_J_rad(self) -> float:
        """Josephson energy in angular-frequency units, ``E_J / hbar``."""
        return self.E_J / HBAR


def derive(params: CircuitParams) -> DerivedParams:
    E_J = PHI0 * params.I_c / (2 * math.pi)
    L_J = PHI0**2 / (4 * math.pi**2 * E_J)
    omega_p = 1.0 / math.sqrt(L_J * params.C_J)
    v = 1.0 / math.sqrt(params.l * params.c)
    Z0 = math.sqrt(params.l / params.c)
    return DerivedParams(E_J=E_J, L_J=L_J, omega_p=omega_p, v=v, Z0=Z0)


def bare_mode_frequencies(params: CircuitParams, n_max: int) -> list[tuple[str, float]]:
    """Frequencies of the line without junction physics.

    Symmetric modes (no flux drop across the junction) sit at ``2 m pi v / L``;
    antisymmetric modes approach ``(2m - 1) pi v / L`` for a shorted junction.
    Returns ``(parity, omega)`` pairs for ``m = 1..n_max``, sorted by frequency.
    """
    if n_max < 1:
        raise ParameterError("n_max", "must be >= 1")
    v = 1.0 / math.sqrt(params.l * params.c)
    modes = []
    for m in range(1, n_max + 1):
        modes.append(("symmetric", 2 * m * math.pi * v / params.L))
        modes.append(("antisymmetric", (2 * m - 1) * math.pi * v / params.L))
    return sorted(modes, key=lambda item: item[1])


def charging_kerr(C: float) -> float:
    """Kerr scale ``e^2 / (4 C)`` of a lone junction, in rad/s."""
    return E_CHARGE**2 / (4 * C) / HBAR
