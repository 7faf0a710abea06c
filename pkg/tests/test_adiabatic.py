import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fluxlab.adiabatic import (
    AdiabaticBudget,
    ErrorBudget,
    clifford_error,
    clifford_report,
    critical_sweep_rate,
    decoherence_limit,
    idle_error_scaled,
    lz_probability,
    max_modulation_frequency,
    min_rise_time,
    phase_uncertainty_infidelity,
)
from fluxlab.exceptions import ParameterError
from fluxlab.fluxonium import TwoLevelParams


def _lz_numeric(delta, eps_dot, span=400.0, n=200000):
    """Diabatic probability for H/hbar = pi (eps_dot t sz + delta sx), GHz and ns.

    Midpoint piecewise-constant propagators, each an exact 2x2 exponential.
    """
    half = span * delta / eps_dot
    edges = np.linspace(-half, half, n + 1)
    dt = edges[1] - edges[0]
    hz = np.pi * eps_dot * (edges[:-1] + dt / 2)
    hx = np.full_like(hz, np.pi * delta)
    norm = np.hypot(hz, hx)
    c, s = np.cos(norm * dt), np.sin(norm * dt) / norm
    psi = np.array([1.0 + 0j, 0.0j])
    for k in range(n):
        a, b = psi
        psi = np.array([(c[k] - 1j * s[k] * hz[k]) * a - 1j * s[k] * hx[k] * b,
                        -1j * s[k] * hx[k] * a + (c[k] + 1j * s[k] * hz[k]) * b])
    return abs(psi[0]) ** 2


def test_lz_convention_against_schrodinger_integration():
    # The diabatic probability of H = (h/2)(eps sz + delta sx) is exp(-pi^2 delta^2/eps_dot).
    # lz_probability keeps the budget convention whose exponent is twice that, so it
    # equals the square of the two-level result.
    for delta, eps_dot in ((0.1, 0.2), (0.05, 0.02)):
        exact = _lz_numeric(delta, eps_dot)
        assert exact == pytest.approx(math.exp(-math.pi**2 * delta**2 / eps_dot), abs=3e-3)
        assert lz_probability(delta, eps_dot) == pytest.approx(exact**2, abs=3e-3)


def test_lz_limits_and_anchor():
    assert lz_probability(0.8, 1e-6) == 0.0
    assert lz_probability(1e-6, 1e3) == pytest.approx(1.0)
    assert math.exp(-math.pi / 0.341) == pytest.approx(1.0e-4, rel=0.01)
    with pytest.raises(ParameterError):
        lz_probability(0.8, 0.0)


@given(st.floats(0.05, 2.0), st.floats(1e-8, 0.5))
def test_critical_rate_inverts_probability(delta, p):
    rate = critical_sweep_rate(delta, p)
    assert lz_probability(delta, rate) == pytest.approx(p, rel=1e-9)


def test_critical_rate_edges():
    assert critical_sweep_rate(0.8, 1.0) == math.inf
    with pytest.raises(ParameterError):
        critical_sweep_rate(0.8, 0.0)
    with pytest.raises(ParameterError):
        critical_sweep_rate(0.0)


def test_rise_time_and_modulation_limits():
    rate = critical_sweep_rate(0.87, 1e-4)
    assert min_rise_time(0.87, 1.9) == pytest.approx(1.9 / rate)
    assert max_modulation_frequency(0.87, 1.9) == pytest.approx(rate / (2 * math.pi * 1.9))
    with pytest.raises(ParameterError):
        min_rise_time(0.87, 0.0)


def test_budget_object():
    tlp = TwoLevelParams(delta=0.87, i_p=12.9)
    b = AdiabaticBudget.from_two_level(tlp)
    assert b.eps_max == pytest.approx(12.9 * 0.15)
    assert b.allows(0.5 * b.max_mod_freq) and not b.allows(2 * b.max_mod_freq)
    assert b.rise_time == pytest.approx(min_rise_time(0.87, b.eps_max))
    with pytest.raises(ParameterError):
        AdiabaticBudget(0.87, 1.0, p_target=1.0)


def test_clifford_countings():
    assert clifford_error(0.00056, 0.00056, 0.0047) == pytest.approx(33 / 4 * 0.00112 + 1.5 * 0.0047)
    assert clifford_error(0.00056, 0.00056, 0.0047, "single_rate") == pytest.approx(
        33 / 4 * 0.00056 + 1.5 * 0.0047
    )
    rep = clifford_report(0.00056, 0.00056, 0.0047, 0.0153, 0.0012)
    assert rep["per_layer_sum_gap"] == pytest.approx(rep["per_layer_sum"] - 0.0153)
    assert rep["per_layer_sum_within_err"] is True
    assert "measured" not in clifford_report(0.001, 0.001, 0.01)
    with pytest.raises(ParameterError):
        clifford_error(-0.1, 0.0, 0.0)
    with pytest.raises(ParameterError):
        clifford_error(0.0, 0.0, 0.0, "average")


@given(st.floats(0, 0.01), st.floats(0, 0.01), st.floats(0, 0.05))
def test_clifford_is_linear(a, b, c):
    assert clifford_error(2 * a / 2, b, c) + clifford_error(a, b, c) == pytest.approx(
        clifford_error(2 * a, 2 * b, 2 * c), abs=1e-15
    )


def test_decoherence_limit():
    assert decoherence_limit(ErrorBudget()) == 0.0
    b = ErrorBudget(t1_idle=(60e3, 60e3), t_idle=20.0, t_cz=20.0, one_over_f_cz=(1e-5, 2e-5))
    expected = (4 * 2 * 20.0 / 60e3 + 3e-5) / 6
    assert decoherence_limit(b) == pytest.approx(expected)
    assert b.t1_cz == b.t1_idle
    with pytest.raises(ParameterError):
        ErrorBudget(t1_idle=(0.0, 1.0))
    with pytest.raises(ParameterError):
        ErrorBudget(white_cz=(-1.0, 0.0))


def test_idle_scaling():
    assert idle_error_scaled([0.0005, 0.00021]) == pytest.approx(0.0018933, rel=1e-4)
    with pytest.raises(ParameterError):
        idle_error_scaled([0.001], t_gate=0.0)


def test_phase_uncertainty_pair():
    agi, quad = phase_uncertainty_infidelity(0.02)
    assert agi == pytest.approx(6.0e-5, rel=1e-3)
    assert quad == pytest.approx(2.0e-5, rel=1e-12)
    # Direct evaluation of the average gate fidelity formula.
    v = np.diag([1, 1, 1, np.exp(0.02j)])
    f = (4 + abs(np.trace(v)) ** 2) / 20
    assert agi == pytest.approx(1 - f, rel=1e-9)
    with pytest.raises(ParameterError):
        phase_uncertainty_infidelity(2.0)
