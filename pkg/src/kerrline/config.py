"""JSON run configuration.

Schema (SI units)::

    {
      "l": 5e-7, "c": 2e-10, "L": 0.01, "C_J": 1.9e-12,
      "I_c": 1e-6,                       # and/or
      "sweep": {"I_c_min": 1e-7, "I_c_max": 1e-5, "points": 200, "spacing": "log"},
      "C_c": 5e-15,                      # optional, default 0
      "n_modes": 10,                     # optional
      "fock_cutoff": 8                   # optional, per-site lattice cutoff
    }

Unknown keys are rejected so that typos do not silently fall back to defaults.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .circuit import CircuitParams
from .errors import ConfigError, ParameterError
from .spectrum import make_grid

REQUIRED = ("l", "c", "L", "C_J")
OPTIONAL = ("I_c", "sweep", "C_c", "n_modes", "fock_cutoff")
SWEEP_DEFAULTS = {"I_c_min": 1e-7, "I_c_max": 1e-5, "points": 200, "spacing": "log"}
DEFAULT_N_MODES = 10
DEFAULT_FOCK_CUTOFF = 8


@dataclass(frozen=True)
class RunConfig:
    params: CircuitParams  # I_c is the single point, or the sweep start
    I_c: float | None
    sweep: dict | None
    n_modes: int
    fock_cutoff: int
    source_bytes: bytes = b""

    @property
    def grid(self) -> np.ndarray:
        """Sweep grid if configured, otherwise the single ``I_c``."""
        if self.sweep is not None:
            s = self.sweep
            return make_grid(s["I_c_min"], s["I_c_max"], s["points"], s["spacing"])
        return np.array([self.I_c])

    def require_point(self) -> CircuitParams:
        if self.I_c is None:
            raise ConfigError("this command needs a single operating point: set 'I_c'")
        return self.params


def _number(raw, key):
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParameterError(key, f"expected a number, got {value!r}")
    return float(value)


def _count(raw, key, default, minimum=1):
    value = raw.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParameterError(key, f"expected an integer, got {value!r}")
    if value < minimum:
        raise ParameterError(key, f"must be >= {minimum}")
    return value


def _sweep(raw):
    if not isinstance(raw, dict):
        raise ConfigError("'sweep' must be an object")
    unknown = sorted(set(raw) - set(SWEEP_DEFAULTS))
    if unknown:
        raise ConfigError(f"unknown key(s) in 'sweep': {', '.join(unknown)}")
    sweep = {**SWEEP_DEFAULTS, **raw}
    for key in ("I_c_min", "I_c_max"):
        sweep[key] = _number(sweep, key)
    sweep["points"] = _count(sweep, "points", 200, minimum=2)
    make_grid(sweep["I_c_min"], sweep["I_c_max"], sweep["points"], sweep["spacing"])
    return sweep


def parse_config(text: str | bytes) -> RunConfig:
    data = text.encode() if isinstance(text, str) else text
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as err:
        raise ConfigError(f"invalid JSON at line {err.lineno}, column {err.colno}: {err.msg}")
    if not isinstance(raw, dict):
        raise ConfigError("top level must be a JSON object")
    unknown = sorted(set(raw) - set(REQUIRED) - set(OPTIONAL))
    if unknown:
        raise ConfigError(f"unknown key(s): {', '.join(unknown)}")
    missing = [k for k in REQUIRED if k not in raw]
    if missing:
        raise ConfigError(f"missing required key(s): {', '.join(missing)}")
    if "I_c" not in raw and "sweep" not in raw:
        raise ConfigError("either I_c or sweep required")

    sweep = _sweep(raw["sweep"]) if "sweep" in raw else None
    I_c = _number(raw, "I_c") if "I_c" in raw else None
    values = {k: _number(raw, k) for k in REQUIRED}
    C_c = _number(raw, "C_c") if "C_c" in raw else 0.0
    params = CircuitParams(I_c=I_c if I_c is not None else sweep["I_c_min"], C_c=C_c, **values)
    return RunConfig(
        params=params,
        I_c=I_c,
        sweep=sweep,
        n_modes=_count(raw, "n_modes", DEFAULT_N_MODES),
        fock_cutoff=_count(raw, "fock_cutoff", DEFAULT_FOCK_CUTOFF),
        source_bytes=data,
    )


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err.strerror}")
    return parse_config(data)


def demo_config_path():
    """Path of the bundled demo configuration (1 cm line, 1.9 pF junction)."""
    return resources.files("kerrline") / "data" / "demo.json"


def load_demo_config() -> RunConfig:
    return parse_config(demo_config_path().read_bytes())
