"""Error-budget report assembled from measured rates and simulated 1/f dephasing."""

from importlib import resources

import numpy as np

from .adiabatic import ErrorBudget, clifford_report, decoherence_limit, idle_error_scaled, phase_uncertainty_infidelity
from .config import merge_validated, parse_yaml
from .noise import modulation_slope_harmonic, sinusoidal_dephasing_exponent, static_dephasing_exponent
from .units import TWO_PI

INPUT_SCHEMA = {
    "single_qubit": {"r_sq_a": float, "r_sq_b": float},
    "cz": {"r_cz": float, "delta_phi_rad": float},
    "clifford_measured": {"value": float, "err": float},
    "idle_gate": {"errors": list, "t_gate_ns": float, "t_target_ns": float},
    "decoherence": {
        "t1_idle_ns": list,
        "t1_cz_ns": list,
        "white_idle": list,
        "white_cz": list,
        "t_idle_ns": float,
        "t_cz_ns": float,
    },
    "one_over_f": {"delta_phi_a_phi0": float, "delta_phi_b_phi0": float, "mod_freq_ghz": float, "t_cz_ns": float},
}

ZERO_INPUTS = {
    "single_qubit": {"r_sq_a": 0.0, "r_sq_b": 0.0},
    "cz": {"r_cz": 0.0, "delta_phi_rad": 0.0},
    "idle_gate": {"errors": [0.0, 0.0], "t_gate_ns": 15.0, "t_target_ns": 40.0},
    "decoherence": {
        "t1_idle_ns": [np.inf, np.inf],
        "white_idle": [0.0, 0.0],
        "white_cz": [0.0, 0.0],
        "t_idle_ns": 20.0,
        "t_cz_ns": 20.0,
    },
    "one_over_f": {"delta_phi_a_phi0": 0.0, "delta_phi_b_phi0": 0.0, "mod_freq_ghz": 0.05, "t_cz_ns": 20.0},
}


def load_inputs(text=None, origin="budget inputs"):
    """Parse a budget-input YAML text (bundled measured values when None)."""
    if text is None:
        text = resources.files("fluxlab").joinpath("data/measured_budget.yaml").read_text()
        origin = "bundled budget inputs"
    return merge_validated(ZERO_INPUTS, parse_yaml(text, origin), INPUT_SCHEMA)


def one_over_f_error(system, noise, delta_phi_a, delta_phi_b, mod_freq, t_cz):
    """(1/6) sum_i <dphi_i^2>_{1/f} under sinusoidal and static control.

    Both use the first-harmonic slope of each qubit along its modulation.
    """
    t = t_cz * 1e-9
    w_m = TWO_PI * mod_freq * 1e9
    slopes = [
        modulation_slope_harmonic(system.qubit_a, delta_phi_a) if delta_phi_a else 0.0,
        modulation_slope_harmonic(system.qubit_b, delta_phi_b) if delta_phi_b else 0.0,
    ]
    sinus, static = [], []
    for s in slopes:
        alpha = TWO_PI * 1e9 * abs(s)
        sinus.append(2 * sinusoidal_dephasing_exponent(alpha, w_m, t, noise).exponent)
        static.append(2 * static_dephasing_exponent(alpha, t, noise).exponent)
    return {
        "slope_ghz_per_phi0": slopes,
        "phase_variance_sinusoidal": sinus,
        "phase_variance_static": static,
        "r_sinusoidal": sum(sinus) / 6,
        "r_static": sum(static) / 6,
    }


def error_budget_report(system, noise, inputs):
    sq, cz = inputs["single_qubit"], inputs["cz"]
    measured = inputs.get("clifford_measured", {})
    idle, dec, oof = inputs["idle_gate"], inputs["decoherence"], inputs["one_over_f"]
    one_f = one_over_f_error(
        system, noise, oof["delta_phi_a_phi0"], oof["delta_phi_b_phi0"], oof["mod_freq_ghz"], oof["t_cz_ns"]
    )
    budget = ErrorBudget(
        t1_idle=tuple(dec["t1_idle_ns"]),
        t1_cz=tuple(dec["t1_cz_ns"]) if "t1_cz_ns" in dec else None,
        white_idle=tuple(dec["white_idle"]),
        white_cz=tuple(dec["white_cz"]),
        one_over_f_cz=tuple(one_f["phase_variance_sinusoidal"]),
        t_idle=dec["t_idle_ns"],
        t_cz=dec["t_cz_ns"],
        r_sq=(sq["r_sq_a"], sq["r_sq_b"]),
        r_cz=cz["r_cz"],
        delta_phi=cz["delta_phi_rad"],
    )
    agi, quad20 = phase_uncertainty_infidelity(cz["delta_phi_rad"])
    return {
        "clifford": clifford_report(sq["r_sq_a"], sq["r_sq_b"], cz["r_cz"], measured.get("value"), measured.get("err")),
        "idle_scaled": idle_error_scaled(idle["errors"], idle["t_gate_ns"], idle["t_target_ns"]),
        "phase_uncertainty": {"average_gate_infidelity": agi, "delta_phi_sq_over_20": quad20},
        "one_over_f": one_f,
        "decoherence_limit": decoherence_limit(budget),
    }
