import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kerrline import (
    HBAR,
    DerivedParams,
    TruncationError,
    build_modes,
    charging_kerr,
    derive,
    effective_mode_hamiltonian,
    kerr_parameters,
)
from kerrline.kerr import kerr_from_lambdas
from kerrline.modes import Mode, ModeSet

OMEGA = 2 * math.pi * 5e9


def synthetic(lambdas, omegas=None, converged=True):
    omegas = omegas or [OMEGA * (2 * i + 1) for i in range(len(lambdas))]
    modes = tuple(Mode(i + 1, w, 1.0, 1.0, 1e-12, lam) for i, (w, lam) in enumerate(zip(omegas, lambdas)))
    return ModeSet(modes, len(modes), converged)


def derived_with(E_J_rad):
    return DerivedParams(E_J=E_J_rad * HBAR, L_J=1e-9, omega_p=1e10, v=1e8, Z0=50.0)


E_J_RAD = 2 * math.pi * 300e9


def test_single_mode_substitution():
    lam = 0.12
    kr = kerr_parameters(synthetic([lam]), derived_with(E_J_RAD))
    assert kr.delta_omega == pytest.approx(E_J_RAD * lam**2 * (1 - math.exp(-lam**2 / 2)), rel=1e-13)
    assert kr.U == pytest.approx(E_J_RAD * lam**4 * math.exp(-lam**2 / 2) / 4, rel=1e-13)
    assert kr.product_factor == pytest.approx(math.exp(-lam**2 / 2), rel=1e-15)


def test_zero_fundamental_fluctuation():
    kr = kerr_parameters(synthetic([0.0, 0.05, 0.01]), derived_with(E_J_RAD))
    assert kr.U == 0.0
    assert kr.delta_omega == 0.0


def test_effective_hamiltonian():
    ms = synthetic([0.1])
    kr = kerr_parameters(ms, derived_with(E_J_RAD))
    omega_eff, U = effective_mode_hamiltonian(ms, kr)
    assert omega_eff == pytest.approx(OMEGA - E_J_RAD * 0.01 * (1 - math.exp(-0.005)), rel=1e-14)
    assert U == kr.U
    ms0 = synthetic([0.0])
    assert effective_mode_hamiltonian(ms0, kerr_parameters(ms0, derived_with(E_J_RAD)))[0] == OMEGA


@given(lam=st.floats(min_value=1e-4, max_value=0.05))
def test_quartic_at_small_fluctuation(lam):
    _, U, _ = kerr_from_lambdas(1.0, [lam, 0.0, 0.0])
    assert 0.998 <= U / (lam**4 / 4) <= 1.0


@given(
    scale=st.floats(min_value=1e-3, max_value=1e3),
    lams=st.lists(st.floats(min_value=-0.3, max_value=0.3), min_size=1, max_size=6),
)
def test_linear_in_josephson_energy(scale, lams):
    dw1, U1, _ = kerr_from_lambdas(E_J_RAD, lams)
    dw2, U2, _ = kerr_from_lambdas(scale * E_J_RAD, lams)
    assert U2 == pytest.approx(scale * U1, rel=1e-14, abs=1e-300)
    assert dw2 == pytest.approx(scale * dw1, rel=1e-14, abs=1e-300)


@given(lams=st.lists(st.floats(min_value=-0.5, max_value=0.5), min_size=1, max_size=8))
def test_result_invariants(lams):
    dw, U, P = kerr_from_lambdas(E_J_RAD, lams)
    assert 0 < P <= 1
    assert U >= 0 and dw >= 0


def test_product_factor_non_increasing(modeset, derived):
    factors = [kerr_from_lambdas(derived.E_J_rad, modeset.lambdas[:n])[2] for n in range(1, len(modeset) + 1)]
    assert np.all(np.diff(factors) <= 0)


def test_unconverged_truncation_rejected(derived):
    ms = synthetic([0.3, 0.3, 0.3], converged=False)
    with pytest.raises(TruncationError):
        kerr_parameters(ms, derived)


def test_default_point(modeset, derived):
    kr = kerr_parameters(modeset, derived)
    assert kr.n_modes_used == 10
    assert kr.truncation_error_bound < 1e-3
    assert 0 < kr.U < kr.delta_omega


def _kerr_sweep(params, sweep):
    U, detuning = [], []
    for I_c, spec in sweep.points:
        p = params.with_critical_current(I_c)
        d = derive(p)
        U.append(kerr_parameters(build_modes(p, spec), d).U)
        detuning.append(abs(spec.omegas[0] - d.omega_p))
    return np.array(U), np.array(detuning)


def test_peak_alignment_and_charging_scale(params, default_sweep):
    U, detuning = _kerr_sweep(params, default_sweep)
    assert abs(int(np.argmax(U)) - int(np.argmin(detuning))) <= 1
    ratio = U.max() / charging_kerr(params.C_J)
    assert 1 / 3 <= ratio <= 3
