import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from _oracles import phase_grid_levels, polyfit_slope
from fluxlab import fluxonium as fx
from fluxlab.exceptions import ParameterError
from fluxlab.fluxonium import (
    QUBIT_A,
    QUBIT_B,
    QubitParams,
    TwoLevelParams,
    build_single_hamiltonian,
    eigensystem,
    fit_two_level,
    fit_two_level_data,
    flux_dispersion,
    mixing_angle,
    phase_matrix_element,
    qubit_levels,
    spectrum,
    transition_frequency,
)

# Frozen from the oscillator-basis solver at n_basis = 80 and confirmed by
# the phase-grid oracle to 1e-9 GHz.
DELTA_A = 0.8703212082718885
DELTA_B = 0.6563779273531858
PHI_GE_A = 2.3658276254105353
FIT_B = (0.6564574459011198, 12.85564883005846)


def test_rejects_bad_params():
    with pytest.raises(ParameterError):
        QubitParams(e_c=-1.0, e_l=0.45, e_j=2.0)
    with pytest.raises(ParameterError):
        QubitParams(e_c=1.0, e_l=3.0, e_j=2.0)
    with pytest.raises(ParameterError):
        build_single_hamiltonian(QUBIT_A, 0.5, n_basis=10)
    with pytest.raises(ParameterError):
        build_single_hamiltonian(QUBIT_A, float("nan"))


def test_harmonic_limit_spacing():
    # E_J = 0 is outside the fluxonium domain of QubitParams; use the builder directly.
    h = fx._hamiltonian(1.61, 0.45, 0.0, 0.37, 80)
    e = np.linalg.eigvalsh(h)[:6]
    omega = np.sqrt(8 * 1.61 * 0.45)
    assert np.allclose(np.diff(e), omega, rtol=1e-9, atol=0)


@pytest.mark.parametrize("flux", [0.5, 0.458, 0.3, 0.62])
def test_f01_matches_phase_grid_oracle(flux):
    ref = phase_grid_levels(QUBIT_A.e_c, QUBIT_A.e_l, QUBIT_A.e_j, flux)
    e = qubit_levels(QUBIT_A, flux, 4).energies
    assert np.allclose(e - e[0], ref - ref[0], atol=1e-7)


def test_delta_regression_and_dense_oracle():
    assert transition_frequency(QUBIT_A, 0.5) == pytest.approx(DELTA_A, abs=1e-9)
    assert transition_frequency(QUBIT_B, 0.5) == pytest.approx(DELTA_B, abs=1e-9)
    dense = np.linalg.eigvalsh(build_single_hamiltonian(QUBIT_A, 0.5, n_basis=160))
    assert dense[1] - dense[0] == pytest.approx(DELTA_A, abs=1e-8)
    assert DELTA_B < DELTA_A


def test_periodicity():
    a = spectrum(QUBIT_A, [0.5], levels=4)
    b = spectrum(QUBIT_A, [1.5], levels=4)
    assert np.allclose(a, b, atol=1e-9, rtol=0)


@given(st.floats(0.0, 0.25))
def test_symmetric_about_half_flux(d):
    up = transition_frequency(QUBIT_A, 0.5 + d)
    down = transition_frequency(QUBIT_A, 0.5 - d)
    assert abs(up - down) < 1e-9


def test_sweet_spot_is_minimum():
    fluxes = np.linspace(0.3, 0.7, 81)
    f = spectrum(QUBIT_A, fluxes, levels=1)[:, 0]
    assert fluxes[np.argmin(f)] == pytest.approx(0.5)


def test_basis_convergence():
    for flux in np.linspace(0.3, 0.7, 9):
        lo = qubit_levels(QUBIT_A, flux, 4, 80).energies
        hi = qubit_levels(QUBIT_A, flux, 4, 160).energies
        assert np.max(np.abs(lo - hi)) < 1e-6


def test_plus_cosine_variant_is_half_period_shift():
    for flux in (0.5, 0.46, 0.3):
        plus = np.linalg.eigvalsh(build_single_hamiltonian(QUBIT_A, flux, josephson_sign=+1))[:4]
        minus = np.linalg.eigvalsh(build_single_hamiltonian(QUBIT_A, flux + 0.5))[:4]
        assert np.allclose(plus, minus, atol=1e-9)


def test_eigensystem_identity():
    # Degenerate spectrum: only the energies and the spanned subspace are defined.
    es = eigensystem(np.eye(5), 3)
    assert np.allclose(es.energies, 1.0)
    assert np.allclose(es.states.T @ es.states, np.eye(3))
    d = eigensystem(np.diag([3.0, 1.0, 2.0, 5.0, 4.0]), 3)
    assert np.allclose(d.energies, [1.0, 2.0, 3.0])
    assert np.allclose(np.abs(d.states), np.eye(5)[:, [1, 2, 0]])


def test_eigensystem_matches_full_spectrum_and_residual():
    h = build_single_hamiltonian(QUBIT_A, 0.458)
    es = eigensystem(h, 4)
    full = np.linalg.eigvalsh(h)[:4]
    assert np.allclose(es.energies, full, atol=1e-8)
    norm = np.linalg.norm(h, 2)
    for e, v in zip(es.energies, es.states.T):
        assert np.linalg.norm(h @ v - e * v) <= 1e-8 * norm
    assert np.allclose(es.states.T @ es.states, np.eye(4), atol=1e-10)


def test_eigensystem_checks():
    with pytest.raises(ParameterError):
        eigensystem(np.array([[0.0, 1.0], [0.0, 0.0]]), 1)
    with pytest.raises(ParameterError):
        eigensystem(np.eye(3), 4)


def test_gauge_determinism():
    h = build_single_hamiltonian(QUBIT_B, 0.47)
    a = eigensystem(h, 5).states
    b = eigensystem(h.copy(), 5).states
    assert np.array_equal(a, b)
    pivots = a[np.argmax(np.abs(a), axis=0), np.arange(5)]
    assert np.all(pivots > 0)


def test_dispersion_at_sweet_spot_and_antisymmetry():
    assert abs(flux_dispersion(QUBIT_A, 0.5)) < 1e-4
    for d in (0.01, 0.05, 0.12):
        up, down = flux_dispersion(QUBIT_A, 0.5 + d), flux_dispersion(QUBIT_A, 0.5 - d)
        assert up == pytest.approx(-down, rel=1e-6)


def test_dispersion_matches_polynomial_fit():
    ref = polyfit_slope(lambda x: transition_frequency(QUBIT_A, x), 0.458)
    assert flux_dispersion(QUBIT_A, 0.458) == pytest.approx(ref, rel=1e-3)


def test_dispersion_matches_two_level_model():
    tlp = fit_two_level(QUBIT_A)
    for flux in np.linspace(0.45, 0.55, 11):
        if abs(flux - 0.5) < 1e-9:
            continue
        assert flux_dispersion(QUBIT_A, flux) == pytest.approx(float(tlp.dispersion(flux)), rel=0.02)


def test_phase_matrix_elements():
    za = phase_matrix_element(QUBIT_A, 0.5, 1, 1) - phase_matrix_element(QUBIT_A, 0.5, 0, 0)
    assert abs(za) < 1e-8
    assert phase_matrix_element(QUBIT_A, 0.5, 0, 1).real == pytest.approx(PHI_GE_A, abs=1e-8)
    for i in range(4):
        for j in range(4):
            assert phase_matrix_element(QUBIT_A, 0.47, i, j) == pytest.approx(
                np.conj(phase_matrix_element(QUBIT_A, 0.47, j, i)), abs=1e-12
            )


@given(st.floats(0.1, 5.0), st.floats(1.0, 40.0))
def test_fit_roundtrip(delta, i_p):
    fluxes = np.linspace(0.45, 0.55, 41)
    f = np.hypot(i_p * (fluxes - 0.5), delta)
    tlp = fit_two_level_data(fluxes, f)
    assert tlp.delta == pytest.approx(delta, rel=1e-6)
    assert tlp.i_p == pytest.approx(i_p, rel=1e-6)


def test_fit_qubits():
    tlp_a = fit_two_level(QUBIT_A)
    assert tlp_a.delta == pytest.approx(DELTA_A, rel=1e-3)
    assert tlp_a.rms <= 0.01 * tlp_a.delta
    # Slope extrapolated to |Phi - 1/2| = 0.15 should give eps ~ 1.9 GHz.
    assert tlp_a.i_p == pytest.approx(12.7, rel=0.15)
    tlp_b = fit_two_level(QUBIT_B)
    assert (tlp_b.delta, tlp_b.i_p) == pytest.approx(FIT_B, rel=1e-6)
    with pytest.raises(ParameterError):
        fit_two_level(QUBIT_A, window=0.1)


def test_mixing_angle():
    tlp = TwoLevelParams(delta=0.8, i_p=12.0)
    assert mixing_angle(tlp, 0.5) == np.pi / 2
    assert mixing_angle(tlp, 0.5 + 0.8 / 12.0) == pytest.approx(np.pi / 4)


@given(st.floats(0.0, 0.2))
def test_mixing_angle_reflection(d):
    tlp = TwoLevelParams(delta=0.8, i_p=12.0)
    assert mixing_angle(tlp, 0.5 - d) == pytest.approx(np.pi - mixing_angle(tlp, 0.5 + d), abs=1e-12)
