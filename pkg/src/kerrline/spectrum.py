"""Antisymmetric eigenfrequencies of the junction-intersected resonator.

The mode condition is solved in the dimensionless variable ``u = omega L / 2v``,
where it reads

    F(u) = u - cot(u) * kappa * (1 - (u / u_p)^2) = 0,

with ``kappa = l L / L_J`` and ``u_p = omega_p L / 2v``.  ``F`` is continuous
on every open branch interval ``(m pi, (m + 1) pi)`` between cotangent poles.
Roots are bracketed by sign changes on an adaptive grid inside each branch,
then refined with Brent's method.  Each branch holds exactly one root except
the one containing ``u_p``, which holds two; the scan checks this rather than
assuming it.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .circuit import CircuitParams, DerivedParams, derive
from .errors import (
    BranchCountError,
    ConvergenceError,
    KerrlineError,
    ParameterError,
    PoleProximityError,
)

RESIDUAL_TOL = 1e-10
MAX_ITER = 200
POLE_EPS = 1e-9  # distance kept from each cotangent pole when scanning
POLE_GUARD = 1e-13  # |sin u| below which the residual is refused
SCAN_START = 1024
SCAN_MAX = 1 << 20
XTOL = 1e-14


@dataclass(frozen=True)
class SpectrumResult:
    """Lowest antisymmetric roots at one parameter point.

    ``plasma_branch_index`` is the 0-based position in ``omegas`` of the root
    nearest the plasma frequency.  ``n_roots_scanned`` counts every root found
    in the ``branch_count`` scanned branches, which may exceed ``len(omegas)``
    by one when the last branch holds two roots.
    """

    omegas: np.ndarray
    residuals: np.ndarray
    branch_count: int
    plasma_branch_index: int
    n_roots_scanned: int

    @property
    def freqs_GHz(self) -> np.ndarray:
        return self.omegas / (2 * np.pi) / 1e9


def _coefficients(p: CircuitParams, d: DerivedParams) -> tuple[float, float]:
    kappa = p.l * p.L / d.L_J
    u_p = d.omega_p * p.L / (2 * d.v)
    return kappa, u_p


# pi split into 30-bit pieces: m * _PI_A is exact for m < 2**23
_PI_A = 3.141592651605606
_PI_B = 1.9841871583270443e-09
_PI_C = 1.034036596358821e-18


def _offset(u, m):
    """``u - m pi`` computed without cancellation."""
    return ((u - m * _PI_A) - m * _PI_B) - m * _PI_C


def _reduce(u):
    """``u - m pi`` with ``m = round(u / pi)``, accurate near the poles."""
    return _offset(u, np.round(np.asarray(u) / math.pi))


def _f(u, kappa, u_p):
    return u - kappa * (1.0 - (u / u_p) ** 2) / np.tan(_reduce(u))


def _f_anchored(t, anchor, kappa, u_p):
    """``F(anchor * pi + t)`` with ``t`` resolved to full relative precision.

    Roots close to a pole are ill-conditioned in ``u`` itself; refining the
    offset from the nearest pole keeps the residual at rounding level.
    """
    u = anchor * math.pi + t
    return u - kappa * (1.0 - (u / u_p) ** 2) / math.tan(t)


def residual(omega: float, d: DerivedParams, p: CircuitParams) -> float:
    """Relative residual ``F(u) / max(u, 1)`` of the mode condition at ``omega``."""
    if not omega > 0:
        raise ParameterError("omega", "must be > 0")
    kappa, u_p = _coefficients(p, d)
    u = omega * p.L / (2 * d.v)
    if abs(math.sin(float(_reduce(u)))) < POLE_GUARD:
        raise PoleProximityError(f"u = {u!r} is within {POLE_GUARD} of a cotangent pole")
    return float(_f(u, kappa, u_p) / max(u, 1.0))


def count_sign_changes(values: np.ndarray) -> np.ndarray:
    """Indices ``i`` with a strict sign change between ``values[i]`` and ``values[i+1]``."""
    s = np.sign(values)
    return np.nonzero(s[:-1] * s[1:] < 0)[0]


def _scan_branch(m, kappa, u_p):
    a = m * math.pi + POLE_EPS
    b = (m + 1) * math.pi - POLE_EPS
    n = SCAN_START
    history = []
    while True:
        u = np.linspace(a, b, n)
        f = _f(u, kappa, u_p)
        idx = count_sign_changes(f)
        history.append(len(idx))
        if len(history) >= 3 and history[-1] == history[-2] == history[-3]:
            break
        if n >= SCAN_MAX:
            break
        n *= 2
    return [(u[i], u[i + 1]) for i in idx]


def _expected_roots(m, u_p):
    return 2 if m * math.pi < u_p < (m + 1) * math.pi else 1


def solve_spectrum(p: CircuitParams, n_modes: int) -> SpectrumResult:
    """Lowest ``n_modes`` antisymmetric eigenfrequencies at the parameters ``p``."""
    if n_modes < 1:
        raise ParameterError("n_modes", "must be >= 1")
    d = derive(p)
    kappa, u_p = _coefficients(p, d)

    roots = []
    residuals = []
    m = 0
    while len(roots) < n_modes:
        brackets = _scan_branch(m, kappa, u_p)
        expected = _expected_roots(m, u_p)
        if len(brackets) != expected:
            raise BranchCountError(
                f"branch ({m} pi, {m + 1} pi): found {len(brackets)} sign changes, "
                f"expected {expected} (kappa={kappa:.6g}, u_p={u_p:.6g})"
            )
        for lo, hi in brackets:
            anchor = m if 0.5 * (lo + hi) < (m + 0.5) * math.pi else m + 1

            def G(t, anchor=anchor):
                return _f_anchored(t, anchor, kappa, u_p)

            t_lo, t_hi = _offset(lo, anchor), _offset(hi, anchor)
            try:
                t, info = brentq(
                    G, t_lo, t_hi, xtol=XTOL * abs(t_hi - t_lo) / math.pi,
                    maxiter=MAX_ITER, full_output=True, disp=False,
                )
            except (RuntimeError, ValueError) as err:
                raise ConvergenceError(f"refinement failed on bracket [{lo!r}, {hi!r}]: {err}")
            if not info.converged:
                raise ConvergenceError(
                    f"no convergence within {MAX_ITER} iterations on bracket [{lo!r}, {hi!r}]"
                )
            u_root = anchor * math.pi + t
            roots.append(u_root)
            residuals.append(G(t) / max(u_root, 1.0))
        m += 1

    u = np.array(roots)
    res = np.array(residuals)
    bad = np.nonzero(np.abs(res) >= RESIDUAL_TOL)[0]
    if len(bad):
        raise ConvergenceError(f"residual {res[bad[0]]:.3g} above {RESIDUAL_TOL} at u = {u[bad[0]]!r}")
    if np.any(np.diff(u) <= 0):
        raise BranchCountError("roots are not strictly increasing")
    omegas = 2 * d.v * u / p.L
    keep = omegas[:n_modes]
    return SpectrumResult(
        omegas=keep,
        residuals=res[:n_modes],
        branch_count=m,
        plasma_branch_index=int(np.argmin(np.abs(keep - d.omega_p))),
        n_roots_scanned=len(roots),
    )


def symmetric_coincidences(result: SpectrumResult, p: CircuitParams, rtol: float = 1e-6) -> list[int]:
    """Indices of roots lying within ``rtol`` of a symmetric-mode frequency."""
    v = 1.0 / math.sqrt(p.l * p.c)
    spacing = 2 * math.pi * v / p.L
    hits = []
    for i, w in enumerate(result.omegas):
        m = max(1, round(w / spacing))
        if abs(w - m * spacing) <= rtol * w:
            hits.append(i)
    return hits


def make_grid(I_c_min: float, I_c_max: float, points: int, spacing: str = "log") -> np.ndarray:
    if not (0 < I_c_min < I_c_max):
        raise ParameterError("sweep", "need 0 < I_c_min < I_c_max")
    if points < 2:
        raise ParameterError("sweep.points", "must be >= 2")
    if spacing == "log":
        return np.geomspace(I_c_min, I_c_max, points)
    if spacing == "linear":
        return np.linspace(I_c_min, I_c_max, points)
    raise ParameterError("sweep.spacing", f"expected 'linear' or 'log', got {spacing!r}")


def default_grid() -> np.ndarray:
    """0.1 uA to 10 uA, 200 log-spaced points."""
    return make_grid(1e-7, 1e-5, 200, "log")


@dataclass(frozen=True)
class SweepResult:
    """Per-point spectra plus sort-order branch labelling.

    ``branches[i, k]`` is the k-th lowest root at grid point i; ``gaps[i, k]``
    is ``branches[i, k + 1] - branches[i, k]``.
    """

    I_c: np.ndarray
    points: list
    branches: np.ndarray
    gaps: np.ndarray
    min_gap: float
    min_gap_I_c: float
    min_gap_pair: tuple

    def pair_min_gap(self, k: int = 0) -> tuple[float, int]:
        """Smallest gap between branches k and k+1 and the grid index where it occurs."""
        i = int(np.argmin(self.gaps[:, k]))
        return float(self.gaps[i, k]), i


def resolve_threads(threads: int) -> int:
    if threads < 0:
        raise ParameterError("threads", "must be >= 0")
    return threads or (os.cpu_count() or 1)


def _annotate(err: KerrlineError, index: int, I_c: float) -> KerrlineError:
    err.grid_index = index
    if err.args:
        err.args = (f"grid point {index} (I_c={I_c:.6g} A): {err.args[0]}",) + err.args[1:]
    return err


def sweep_spectrum(p: CircuitParams, I_c_grid, n_modes: int, threads: int = 1) -> SweepResult:
    grid = np.asarray(I_c_grid, dtype=float)
    if grid.ndim != 1 or len(grid) == 0:
        raise ParameterError("I_c_grid", "must be a non-empty 1-d sequence")
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise ParameterError("I_c_grid", "must be positive and strictly increasing")

    def one(i):
        try:
            return solve_spectrum(p.with_critical_current(grid[i]), n_modes)
        except KerrlineError as err:
            raise _annotate(err, i, grid[i])

    workers = resolve_threads(threads)
    if workers == 1:
        results = [one(i) for i in range(len(grid))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, range(len(grid))))

    branches = np.array([r.omegas for r in results])
    gaps = np.diff(branches, axis=1)
    if gaps.shape[1]:
        i, k = np.unravel_index(int(np.argmin(gaps)), gaps.shape)
        min_gap, min_gap_I_c, pair = float(gaps[i, k]), float(grid[i]), (int(k), int(k) + 1)
    else:
        min_gap, min_gap_I_c, pair = math.inf, math.nan, ()
    return SweepResult(
        I_c=grid,
        points=list(zip(grid.tolist(), results)),
        branches=branches,
        gaps=gaps,
        min_gap=min_gap,
        min_gap_I_c=min_gap_I_c,
        min_gap_pair=pair,
    )
