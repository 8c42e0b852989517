"""Run orchestration: per-point analysis, CSV emission and run manifests.

Outputs are deterministic: sweep points are evaluated independently (in a
thread pool when requested) and always written in grid order, floats are
printed with 12 significant digits, and the only run-dependent value is the
manifest timestamp, which honours ``SOURCE_DATE_EPOCH``.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .circuit import CircuitParams, charging_kerr, derive
from .config import RunConfig
from .errors import KerrlineError, ParameterError
from .kerr import effective_mode_hamiltonian, kerr_parameters
from .lattice import BoseHubbardModel, coupling_strengths, diagonalize_sector
from .modes import (
    build_modes,
    default_x_grid,
    junction_current_variance,
    line_current_variance_profile,
)
from .oracle import FockBasis, diagonalize_full
from .spectrum import _annotate, resolve_threads, solve_spectrum, sweep_spectrum

SUBCOMMANDS = (
    "spectrum",
    "sweep",
    "modes",
    "current-profile",
    "kerr",
    "verify-kerr",
    "coupling",
    "lattice",
)
GHZ = 2 * math.pi * 1e9
MHZ = 2 * math.pi * 1e6
ORACLE_CUTOFFS = (10, 4, 4)


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


@dataclass(frozen=True)
class PointAnalysis:
    params: CircuitParams
    spectrum: object
    modes: object
    kerr: object


def analyze_point(p: CircuitParams, n_modes: int, with_kerr: bool = True) -> PointAnalysis:
    spec = solve_spectrum(p, n_modes)
    ms = build_modes(p, spec)
    kr = kerr_parameters(ms, derive(p)) if with_kerr else None
    return PointAnalysis(p, spec, ms, kr)


def map_grid(func, grid, threads=1):
    """Apply ``func(index, I_c)`` over the grid, results in grid order."""

    def one(i):
        try:
            return func(i, float(grid[i]))
        except KerrlineError as err:
            raise _annotate(err, i, float(grid[i]))

    workers = resolve_threads(threads)
    if workers == 1 or len(grid) == 1:
        return [one(i) for i in range(len(grid))]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, range(len(grid))))


def verify_indices(n_points: int, n_check: int) -> list[int]:
    """Evenly spread grid indices, endpoints included."""
    if n_points <= n_check:
        return list(range(n_points))
    return sorted(set(np.linspace(0, n_points - 1, n_check).round().astype(int).tolist()))


@dataclass
class RunOutcome:
    files: list = field(default_factory=list)
    manifest: dict = field(default_factory=dict)
    exit_code: int = 0


class _Writer:
    def __init__(self, out_dir: Path, subcommand: str, config_hash: str):
        self.out_dir = out_dir
        self.subcommand = subcommand
        self.config_hash = config_hash
        self.files = []

    def csv(self, name, units, header, rows, comments=()):
        path = self.out_dir / name
        with open(path, "w", newline="") as fh:
            fh.write(f"# kerrline {self.subcommand}; units: {units}; config_sha256={self.config_hash}\n")
            for line in comments:
                fh.write(f"# {line}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([fmt(v) for v in row])
        self.files.append(path)
        return path

    def cleanup(self):
        for path in self.files:
            path.unlink(missing_ok=True)


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    moment = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch else datetime.now(timezone.utc)
    return moment.strftime("%Y-%m-%dT%H:%M:%SZ")


def run_pipeline(cfg: RunConfig, subcommand: str, out_dir, threads: int = 1, options: dict | None = None) -> RunOutcome:
    if subcommand not in SUBCOMMANDS:
        raise ParameterError("subcommand", f"unknown subcommand {subcommand!r}")
    options = dict(options or {})
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    config_hash = hashlib.sha256(cfg.source_bytes).hexdigest()
    writer = _Writer(out_dir, subcommand, config_hash)
    handler = _HANDLERS[subcommand]
    try:
        summary, exit_code = handler(cfg, writer, threads, options)
        manifest = {
            "config_hash": config_hash,
            "tool_version": __version__,
            "timestamp": _timestamp(),
            "subcommand": subcommand,
            "flags": {"threads": threads, **{k: v for k, v in sorted(options.items())}},
            "outputs": [p.name for p in writer.files],
            "summary": summary,
        }
        manifest_path = out_dir / f"manifest_{subcommand.replace('-', '_')}.json"
        manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        writer.files.append(manifest_path)
    except BaseException:
        writer.cleanup()
        raise
    return RunOutcome(files=writer.files, manifest=manifest, exit_code=exit_code)


# -- subcommand handlers ----------------------------------------------------


def _spectrum_rows(I_c, spec):
    for k, (w, r) in enumerate(zip(spec.omegas, spec.residuals), start=1):
        yield (I_c, k, w / GHZ, r)


SPECTRUM_HEADER = ["I_c_A", "mode_index", "freq_GHz", "residual"]
SPECTRUM_UNITS = "I_c [A], freq [GHz], residual [relative, dimensionless]"


def _run_spectrum(cfg, writer, threads, options):
    p = cfg.require_point()
    spec = solve_spectrum(p, cfg.n_modes)
    writer.csv("spectrum.csv", SPECTRUM_UNITS, SPECTRUM_HEADER, _spectrum_rows(p.I_c, spec))
    return {
        "n_modes": cfg.n_modes,
        "branch_count": spec.branch_count,
        "plasma_branch_index": spec.plasma_branch_index,
        "max_abs_residual": float(np.max(np.abs(spec.residuals))),
    }, 0


def _run_sweep(cfg, writer, threads, options):
    grid = cfg.grid
    sw = sweep_spectrum(cfg.params, grid, cfg.n_modes, threads=threads)
    rows = [row for I_c, spec in sw.points for row in _spectrum_rows(I_c, spec)]
    writer.csv("sweep.csv", SPECTRUM_UNITS, SPECTRUM_HEADER, rows)
    plot_rows = []
    for I_c, spec in sw.points:
        d = derive(cfg.params.with_critical_current(I_c))
        plot_rows.append([I_c, d.omega_p / GHZ, *(spec.omegas / GHZ)])
    header = ["I_c_A", "f_p_GHz"] + [f"branch_{k}_GHz" for k in range(1, cfg.n_modes + 1)]
    writer.csv("sweep_plot.csv", "I_c [A], frequencies [GHz]", header, plot_rows)
    summary = {"points": len(grid), "n_modes": cfg.n_modes}
    if sw.gaps.shape[1]:
        gap01, i01 = sw.pair_min_gap(0)
        summary["branch_gap"] = {
            "min_gap_GHz": sw.min_gap / GHZ,
            "min_gap_I_c_A": sw.min_gap_I_c,
            "min_gap_branches": [k + 1 for k in sw.min_gap_pair],
            "first_crossing_gap_GHz": gap01 / GHZ,
            "first_crossing_I_c_A": float(grid[i01]),
            "first_crossing_freq1_GHz": float(sw.branches[i01, 0] / GHZ),
        }
    return summary, 0


def _run_modes(cfg, writer, threads, options):
    p = cfg.require_point()
    pa = analyze_point(p, cfg.n_modes, with_kerr=False)
    rows = [
        (p.I_c, m.n, m.freq_GHz, m.k, m.delta_f, m.eta * 1e15, m.lam) for m in pa.modes.modes
    ]
    writer.csv(
        "modes.csv",
        "I_c [A], freq [GHz], k [1/m], delta_f [dimensionless], eta [fF], lambda [dimensionless]",
        ["I_c_A", "mode_index", "freq_GHz", "k_per_m", "delta_f", "eta_fF", "lambda"],
        rows,
    )
    return {"converged": pa.modes.converged, "tail_lambda_sq": pa.modes.tail_lambda_sq}, 0


def _run_current_profile(cfg, writer, threads, options):
    p = cfg.require_point()
    n_photons = int(options.get("photons", 1))
    pa = analyze_point(p, cfg.n_modes, with_kerr=False)
    n_cutoff = int(options.get("n_cutoff") or len(pa.modes))
    x = default_x_grid(p.L, int(options.get("points_per_half", 401)))
    _, dI = line_current_variance_profile(pa.modes, p, n_photons, x, n_cutoff)
    writer.csv(
        "current_profile.csv",
        "x [m], current spread [nA]",
        ["x_m", "delta_I_line_nA"],
        zip(x, dI * 1e9),
        comments=[f"fundamental mode in Fock state {n_photons}; modes 1..{n_cutoff} included"],
    )
    d = derive(p)
    jrows = [(n, junction_current_variance(pa.modes, d, n) * 1e9) for n in range(3)]
    writer.csv(
        "junction_current.csv",
        "current spread [nA]",
        ["n_photons", "delta_I_J_nA"],
        jrows,
    )
    summary = {"n_photons": n_photons, "n_cutoff": n_cutoff}
    if n_cutoff >= 2:
        _, prev = line_current_variance_profile(pa.modes, p, n_photons, x, n_cutoff - 1)
        change = float(np.max(np.abs(dI - prev)) / np.max(dI))
        summary["cutoff_change_maxnorm"] = change
        summary["cutoff_converged"] = change < 0.005
    return summary, 0


def _kerr_point(cfg):
    def work(i, I_c):
        p = cfg.params.with_critical_current(I_c)
        return analyze_point(p, cfg.n_modes)

    return work


def _run_kerr(cfg, writer, threads, options):
    grid = cfg.grid
    results = map_grid(_kerr_point(cfg), grid, threads)
    rows, plot_rows = [], []
    for I_c, pa in zip(grid, results):
        d = derive(pa.params)
        w1 = pa.modes[0].omega
        rows.append(
            (I_c, w1 / GHZ, pa.kerr.delta_omega / MHZ, pa.kerr.U / MHZ, pa.kerr.product_factor, pa.modes.converged)
        )
        plot_rows.append(
            (I_c, pa.kerr.U / MHZ, w1 / GHZ, d.omega_p / GHZ, abs(w1 - d.omega_p) / GHZ, charging_kerr(pa.params.C_J) / MHZ)
        )
    writer.csv(
        "kerr.csv",
        "I_c [A], freq [GHz], delta_omega and U [MHz, divided by 2 pi]",
        ["I_c_A", "freq1_GHz", "delta_omega_MHz", "U_MHz", "product_factor", "converged"],
        rows,
        comments=["H_1 = (omega_1 - delta_omega) a^dag a - U a^dag a^dag a a"],
    )
    writer.csv(
        "kerr_plot.csv",
        "I_c [A], U [MHz], frequencies [GHz]",
        ["I_c_A", "U_MHz", "freq1_GHz", "f_p_GHz", "detuning_GHz", "charging_kerr_MHz"],
        plot_rows,
    )
    U = np.array([r[3] for r in rows])
    detuning = np.array([r[4] for r in plot_rows])
    i_peak, i_res = int(np.argmax(U)), int(np.argmin(detuning))
    return {
        "U_peak_MHz": float(U[i_peak]),
        "U_peak_I_c_A": float(grid[i_peak]),
        "min_detuning_I_c_A": float(grid[i_res]),
        "peak_offset_grid_steps": abs(i_peak - i_res),
        "charging_kerr_MHz": charging_kerr(cfg.params.C_J) / MHZ,
    }, 0


def _run_verify_kerr(cfg, writer, threads, options):
    tol = float(options.get("tol", 0.05))
    n_check = int(options.get("points", 10))
    grid = cfg.grid
    idx = verify_indices(len(grid), n_check)
    sub = grid[idx]

    def work(i, I_c):
        pa = analyze_point(cfg.params.with_critical_current(I_c), cfg.n_modes)
        n = min(len(ORACLE_CUTOFFS), len(pa.modes))
        oracle = diagonalize_full(pa.modes, derive(pa.params), FockBasis(ORACLE_CUTOFFS[:n]))
        return pa, oracle

    results = map_grid(work, sub, threads)
    rows = []
    worst = 0.0
    for I_c, (pa, oracle) in zip(sub, results):
        rel = abs(oracle.U_eff - pa.kerr.U) / pa.kerr.U if pa.kerr.U > 0 else abs(oracle.U_eff)
        worst = max(worst, rel)
        rows.append((I_c, pa.kerr.U / MHZ, oracle.U_eff / MHZ, rel, oracle.converged))
    writer.csv(
        "verify_kerr.csv",
        "I_c [A], U [MHz, divided by 2 pi], rel_dev [dimensionless]",
        ["I_c_A", "U_rwa_MHz", "U_oracle_MHz", "rel_dev", "converged"],
        rows,
        comments=[f"oracle cutoffs {ORACLE_CUTOFFS}; tolerance {tol}"],
    )
    ok = worst <= tol and all(r[4] for r in rows)
    return {"max_rel_dev": worst, "tolerance": tol, "passed": ok}, 0 if ok else 4


def _run_coupling(cfg, writer, threads, options):
    grid = cfg.grid

    def work(i, I_c):
        pa = analyze_point(cfg.params.with_critical_current(I_c), cfg.n_modes, with_kerr=False)
        return coupling_strengths(pa.modes, pa.params)

    results = map_grid(work, grid, threads)
    rows, plot_rows = [], []
    for I_c, cr in zip(grid, results):
        for k, (g, eta) in enumerate(zip(cr.g_per_mode, cr.eta_per_mode), start=1):
            rows.append((I_c, k, g / MHZ, eta * 1e15))
        plot_rows.append([I_c, *(cr.g_per_mode / MHZ), *(cr.omega_per_mode / GHZ)])
    writer.csv(
        "coupling.csv",
        "I_c [A], g [MHz, divided by 2 pi], eta [fF]",
        ["I_c_A", "mode_index", "g_MHz", "eta_fF"],
        rows,
    )
    n = cfg.n_modes
    header = ["I_c_A"] + [f"g_{k}_MHz" for k in range(1, n + 1)] + [f"freq_{k}_GHz" for k in range(1, n + 1)]
    writer.csv("coupling_plot.csv", "I_c [A], g [MHz], freq [GHz]", header, plot_rows)
    warnings_seen = sorted({cr.warning for cr in results if cr.warning})
    return {"C_c_F": cfg.params.C_c, "warnings": warnings_seen}, 0


def _run_lattice(cfg, writer, threads, options):
    p = cfg.require_point()
    pa = analyze_point(p, cfg.n_modes)
    omega_eff, U = effective_mode_hamiltonian(pa.modes, pa.kerr)
    g = float(coupling_strengths(pa.modes, p).g_per_mode[0])
    model = BoseHubbardModel(
        n_sites=int(options.get("sites", 4)),
        omega_eff=omega_eff,
        U=U,
        g=g,
        fock_cutoff=int(options.get("cutoff") or cfg.fock_cutoff),
        boundary="periodic" if options.get("periodic") else "open",
    )
    sectors = options.get("sector") or [1, 2]
    rows = []
    for n_total in sectors:
        res = diagonalize_sector(model, int(n_total))
        rows.extend((n_total, level, E / GHZ) for level, E in enumerate(res.energies))
    writer.csv(
        "lattice.csv",
        "energy [GHz, divided by 2 pi]",
        ["sector", "level", "energy_GHz"],
        rows,
        comments=[
            f"sites={model.n_sites} cutoff={model.fock_cutoff} boundary={model.boundary}",
            f"omega_eff/2pi={omega_eff / GHZ:.12g} GHz U/2pi={U / MHZ:.12g} MHz g/2pi={g / MHZ:.12g} MHz",
        ],
    )
    return {
        "omega_eff_GHz": omega_eff / GHZ,
        "U_MHz": U / MHZ,
        "g_MHz": g / MHZ,
        "sectors": [int(s) for s in sectors],
    }, 0


_HANDLERS = {
    "spectrum": _run_spectrum,
    "sweep": _run_sweep,
    "modes": _run_modes,
    "current-profile": _run_current_profile,
    "kerr": _run_kerr,
    "verify-kerr": _run_verify_kerr,
    "coupling": _run_coupling,
    "lattice": _run_lattice,
}
