"""Simulation and analysis of inductively coupled fluxonium qubits.

Energies are linear frequencies in GHz, times in ns and flux in units of
Phi_0 unless a function states otherwise (the noise module works in SI).
"""

from .adiabatic import (
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
from .coupled import (
    CoupledSystem,
    CouplingStrengths,
    ZZShift,
    build_coupled_hamiltonian,
    conditional_spectrum,
    coupling_strengths_full,
    coupling_strengths_simplified,
    default_system,
    dressed_computational_energies,
    effective_j,
    find_resonance,
    simplified_model,
    zz_shift_exact,
)
from .exceptions import CalibrationError, ConfigError, FluxlabError, LabelingError, NumericError, ParameterError
from .fluxonium import (
    QUBIT_A,
    QUBIT_B,
    QubitParams,
    TwoLevelParams,
    build_single_hamiltonian,
    eigensystem,
    fit_two_level,
    flux_dispersion,
    mixing_angle,
    phase_matrix_element,
    spectrum,
    transition_frequency,
)
from .noise import (
    DecayFit,
    DephasingResult,
    NoiseSpectrum,
    dephasing_exponent,
    filter_function,
    fit_double_exponential,
    generate_noise_trace,
    mc_dephasing,
    psd,
    sinusoidal_dephasing_exponent,
    static_dephasing_exponent,
    t2_from_decay,
)
from .pulses import (
    CZResult,
    FluxPulse,
    GateSchedule,
    calibrate_cz,
    conditional_phase,
    cz_unitary,
    n_gate_conditional_phase,
    sample_pulse,
    single_qubit_phases,
    v_phi_map,
)

__version__ = "0.1.0"
