import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kerrline import (
    HBAR,
    PHI0,
    CircuitParams,
    ParameterError,
    build_modes,
    derive,
    gram_matrix,
    junction_current_variance,
    line_current_variance_profile,
    scalar_product,
    solve_spectrum,
)
from kerrline.modes import (
    Mode,
    ModeSet,
    default_x_grid,
    lambda_tail,
    mode_capacitance,
    mode_derivative,
    mode_function,
)
from kerrline.spectrum import SpectrumResult

from oracles import simpson_scalar_product

# Simpson quadrature (1e4 intervals per half) at the frozen 1 uA roots
ETA_1UA = [1.358960441892026e-12, 3.3574672997305155e-12, 1.01980658553487e-12]
LAMBDA_1UA = [0.039849781874563554, -0.0669322282478918, 0.009413635411868805]


def test_closed_form_fields(params, modeset, derived):
    for m in modeset.modes:
        assert m.k * derived.v == pytest.approx(m.omega, rel=1e-15)
        assert m.delta_f == pytest.approx(2 * math.cos(m.k * params.L / 2), abs=1e-15)
        assert m.eta > 0
        expected = 2 * math.pi * m.delta_f / PHI0 * math.sqrt(HBAR / (2 * m.eta * m.omega))
        assert m.lam == pytest.approx(expected, rel=1e-15)


def test_eta_and_lambda_match_quadrature(modeset):
    np.testing.assert_allclose(modeset.etas[:3], ETA_1UA, rtol=1e-8)
    np.testing.assert_allclose(modeset.lambdas[:3], LAMBDA_1UA, rtol=1e-8)


def test_zero_flux_drop_mode(params):
    # a root exactly at a bare antisymmetric asymptote carries no junction flux
    v = 1 / math.sqrt(params.l * params.c)
    omega = math.pi * v / params.L
    spec = SpectrumResult(np.array([omega]), np.zeros(1), 1, 0, 1)
    (m,) = build_modes(params, spec).modes
    assert abs(m.delta_f) < 1e-15
    assert m.eta == pytest.approx(params.c * params.L / 2, rel=1e-14)
    assert abs(m.lam) < 1e-15


def test_eta_low_frequency_limit(params, derived):
    # omega << omega_p, delta_f = 2
    k = 1.0
    eta = mode_capacitance(k, 1e-6 * derived.omega_p, 2.0, params, derived)
    expected = params.c * (params.L / 2 + 4 / k**2 * params.l / (2 * derived.L_J))
    assert eta == pytest.approx(expected, rel=1e-11)


def test_scalar_product_diagonal_is_eta(params, modeset):
    for m in modeset.modes:
        assert scalar_product(m, m, params) == pytest.approx(m.eta, rel=1e-10)


def test_gram_matrix_is_diagonal(params, modeset):
    G = gram_matrix(modeset, params)
    eta = np.sqrt(np.diag(G))
    off = G / np.outer(eta, eta) - np.eye(len(G))
    assert np.max(np.abs(off)) < 1e-8
    np.testing.assert_allclose(np.diag(G), modeset.etas, rtol=1e-8)


def test_gram_matrix_against_simpson(params, modeset):
    n = len(modeset)
    G = np.empty((n, n))
    for i, a in enumerate(modeset.modes):
        for j, b in enumerate(modeset.modes):
            G[i, j] = simpson_scalar_product(a.k, b.k, a.delta_f, b.delta_f, params.c, params.L, params.C_J)
    eta = np.sqrt(np.diag(G))
    assert np.max(np.abs(G / np.outer(eta, eta) - np.eye(n))) < 1e-6
    np.testing.assert_allclose(np.diag(G), modeset.etas, rtol=1e-8)


def test_bare_cosine_orthogonality(params):
    # delta_f = 0 for both: plain Fourier orthogonality, value c L / 2
    v = 1 / math.sqrt(params.l * params.c)
    ks = [(2 * m - 1) * math.pi / params.L for m in (1, 2)]
    a, b = (Mode(i + 1, k * v, k, 0.0, params.c * params.L / 2, 0.0) for i, k in enumerate(ks))
    assert scalar_product(a, a, params) == pytest.approx(params.c * params.L / 2, rel=1e-14)
    assert abs(scalar_product(a, b, params)) < 1e-16 * params.c * params.L


@settings(max_examples=25, deadline=None)
@given(I_c=st.floats(min_value=1e-7, max_value=1e-5))
def test_orthogonality_across_currents(I_c):
    p = CircuitParams(l=5e-7, c=2e-10, L=0.01, C_J=1.9e-12, I_c=I_c)
    ms = build_modes(p, solve_spectrum(p, 6))
    G = gram_matrix(ms, p)
    eta = np.sqrt(np.diag(G))
    assert np.max(np.abs(G / np.outer(eta, eta) - np.eye(len(G)))) < 1e-8


def test_current_continuity_at_junction(params, modeset):
    h = 1e-6 * params.L
    for m in modeset.modes:
        left = (mode_function(m, 0.0, params.L) - mode_function(m, -h, params.L)) / h
        right = (mode_function(m, h, params.L) - mode_function(m, 1e-300, params.L)) / h
        exact = mode_derivative(m, 0.0, params.L)
        scale = abs(m.k)
        assert abs(left - right) / scale < 1e-6 * max(1, abs(m.k * params.L))
        assert abs(mode_derivative(m, -1e-300, params.L) - mode_derivative(m, 1e-300, params.L)) <= 1e-12 * scale
        assert left == pytest.approx(exact, abs=1e-6 * scale * max(1, m.k * params.L))


def test_mode_function_boundaries(params, modeset):
    for m in modeset.modes:
        assert mode_derivative(m, -params.L / 2, params.L) == 0
        assert mode_derivative(m, params.L / 2, params.L) == 0
        assert mode_function(m, -params.L / 2, params.L) == 1.0
        assert mode_function(m, params.L / 2, params.L) == -1.0


def test_modeset_invariants(modeset):
    assert [m.n for m in modeset.modes] == list(range(1, 11))
    assert modeset.converged
    with pytest.raises(ParameterError):
        ModeSet(tuple(reversed(modeset.modes)), len(modeset), True)


def test_tail_estimate_conservative(params):
    # the a/omega fit over modes 8..10 overestimates the real lambda^2 of modes 11..50
    ms_all = build_modes(params, solve_spectrum(params, 50))
    estimate = lambda_tail(ms_all.omegas[:10], ms_all.lambdas[:10])
    actual = float(np.sum(ms_all.lambdas[10:] ** 2))
    assert estimate >= actual


def test_lambda_largest_near_plasma(params, default_sweep):
    # at every sweep point, the mode closest to omega_p carries the largest |lambda|
    for I_c, spec in default_sweep.points[::10]:
        p = params.with_critical_current(I_c)
        ms = build_modes(p, spec)
        assert int(np.argmax(np.abs(ms.lambdas))) == spec.plasma_branch_index


# -- junction current ---------------------------------------------------------


def _single_mode(lam, omega=2 * math.pi * 5e9):
    return ModeSet((Mode(1, omega, 1.0, 1.0, 1e-12, lam),), 1, True)


def test_junction_current_linear_resonator(derived):
    assert junction_current_variance(_single_mode(0.0), derived, 1) == 0.0


def test_junction_current_vacuum_single_mode(derived):
    lam = 0.2
    I_c = 2 * math.pi * derived.E_J / PHI0
    expected = I_c * math.sqrt(0.5 * (1 - math.exp(-2 * lam**2)))
    assert junction_current_variance(_single_mode(lam), derived, 0) == pytest.approx(expected, rel=1e-14)


def test_junction_current_monotone_in_photons(modeset, derived):
    values = [junction_current_variance(modeset, derived, n) for n in range(3)]
    assert values[0] < values[1] < values[2]


def test_junction_current_rejects_high_occupation(modeset, derived):
    with pytest.raises(ParameterError, match="oracle"):
        junction_current_variance(modeset, derived, 3)


def test_junction_current_sign_invariant(modeset, derived):
    flipped = ModeSet(
        tuple(Mode(m.n, m.omega, m.k, -m.delta_f, m.eta, -m.lam) for m in modeset.modes),
        modeset.n_modes, modeset.converged,
    )
    for n in range(3):
        assert junction_current_variance(flipped, derived, n) == junction_current_variance(modeset, derived, n)


# -- line current -------------------------------------------------------------


def test_line_current_vanishes_at_open_end(params, modeset):
    x, dI = line_current_variance_profile(modeset, params, 1, [-params.L / 2], n_cutoff=1)
    assert dI[0] == 0.0


def test_line_current_mirror_symmetry(params, modeset):
    x = default_x_grid(params.L)
    _, dI = line_current_variance_profile(modeset, params, 1, x)
    _, mirrored = line_current_variance_profile(modeset, params, 1, -x)
    assert np.max(np.abs(dI - mirrored)) <= 1e-12 * np.max(dI)
    assert np.array_equal(x, -x[::-1])


def test_line_current_sign_invariant(params, modeset):
    x = default_x_grid(params.L, 51)
    _, a = line_current_variance_profile(modeset, params, 1, x)
    _, b = line_current_variance_profile(modeset, params, 1, x, sign=-1.0)
    assert np.array_equal(a, b)


def test_line_current_matches_junction_boundary_condition(params, modeset, derived):
    # -(1/l) f'(0) equals the linearized junction current (1/L_J - C_J w^2) delta_f
    for m in modeset.modes:
        line = -mode_derivative(m, 0.0, params.L) / params.l
        junction = (1 / derived.L_J - params.C_J * m.omega**2) * m.delta_f
        assert line == pytest.approx(junction, rel=1e-8, abs=1e-10 * abs(m.k) / params.l)
    _, dI = line_current_variance_profile(modeset, params, 1, [-1e-12], n_cutoff=1)
    m = modeset[0]
    zpf = math.sqrt(3 * HBAR / (2 * m.eta * m.omega))
    junction = abs(1 / derived.L_J - params.C_J * m.omega**2) * abs(m.delta_f) * zpf
    assert dI[0] == pytest.approx(junction, rel=1e-8)


def test_line_current_vacuum_part_grows_with_cutoff(params, modeset):
    # each extra mode adds vacuum noise ~ k^2 / (eta omega) ~ k: no cutoff convergence
    x = default_x_grid(params.L)
    peaks = [np.max(line_current_variance_profile(modeset, params, 0, x, n_cutoff=n)[1]) for n in range(2, 11)]
    assert np.all(np.diff(peaks) > 0)
    _, full = line_current_variance_profile(modeset, params, 1, x, n_cutoff=10)
    _, fewer = line_current_variance_profile(modeset, params, 1, x, n_cutoff=9)
    assert np.max(np.abs(full - fewer)) / np.max(full) > 0.005


def test_line_current_photon_excess_is_cutoff_independent(params, modeset):
    x = default_x_grid(params.L, 101)
    excess = []
    for n_cutoff in (1, 5, 10):
        _, one = line_current_variance_profile(modeset, params, 1, x, n_cutoff=n_cutoff)
        _, vac = line_current_variance_profile(modeset, params, 0, x, n_cutoff=n_cutoff)
        excess.append(one**2 - vac**2)
    scale = np.max(excess[0])
    np.testing.assert_allclose(excess[1], excess[0], atol=1e-12 * scale)
    np.testing.assert_allclose(excess[2], excess[0], atol=1e-12 * scale)


def test_line_current_domain_checks(params, modeset):
    with pytest.raises(ParameterError):
        line_current_variance_profile(modeset, params, 1, [params.L])
    with pytest.raises(ParameterError):
        line_current_variance_profile(modeset, params, 1, [0.0], n_cutoff=11)
