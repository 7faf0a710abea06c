"""Landau-Zener limits on flux excursions and gate-error bookkeeping.

Energies are linear frequencies (GHz) and sweep rates are d(eps/h)/dt in
GHz/ns. In angular units the excitation probability is
exp(-pi Delta_w^2 / eps_dot_w); with Delta_w = 2 pi Delta and
eps_dot_w = 2 pi eps_dot this becomes exp(-2 pi^2 Delta^2 / eps_dot).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ParameterError
from .units import TWO_PI, to_angular

CLIFFORD_SQ_PER_LAYER = 33 / 4
CLIFFORD_CZ_PER_LAYER = 3 / 2
COUNTINGS = ("per_layer_sum", "single_rate")


def lz_probability(delta, eps_dot):
    """Diabatic excitation probability for a linear sweep through the gap."""
    if not eps_dot > 0:
        raise ParameterError("eps_dot must be positive")
    delta_w = to_angular(delta)
    return float(np.exp(-np.pi * delta_w**2 / to_angular(eps_dot)))


def critical_sweep_rate(delta, p_target=1e-4):
    """Largest eps_dot (GHz/ns) keeping the LZ probability at p_target; inf for p_target = 1."""
    if not delta > 0:
        raise ParameterError("delta must be positive")
    if not 0 < p_target <= 1:
        raise ParameterError("p_target must lie in (0, 1]")
    if p_target == 1:
        return math.inf
    return float(np.pi * to_angular(delta) ** 2 / math.log(1 / p_target) / TWO_PI)


def min_rise_time(delta, eps_span, p_target=1e-4):
    """Shortest linear ramp (ns) covering eps_span (GHz) within the LZ budget."""
    if not eps_span > 0:
        raise ParameterError("eps_span must be positive")
    return eps_span / critical_sweep_rate(delta, p_target)


def max_modulation_frequency(delta, eps_max, p_target=1e-4):
    """Largest f_m (GHz) for eps = eps_max sin(2 pi f_m t), from eps_dot <= w_m eps_max."""
    if not eps_max > 0:
        raise ParameterError("eps_max must be positive")
    return critical_sweep_rate(delta, p_target) / eps_max / TWO_PI


@dataclass(frozen=True)
class AdiabaticBudget:
    delta: float
    eps_max: float
    p_target: float = 1e-4

    def __post_init__(self):
        if not 0 < self.p_target < 1:
            raise ParameterError("p_target must lie in (0, 1)")
        if not self.delta > 0:
            raise ParameterError("delta must be positive")

    @classmethod
    def from_two_level(cls, tlp, delta_phi=0.15, p_target=1e-4):
        return cls(tlp.delta, tlp.i_p * delta_phi, p_target)

    @property
    def critical_rate(self):
        return critical_sweep_rate(self.delta, self.p_target)

    @property
    def rise_time(self):
        return min_rise_time(self.delta, self.eps_max, self.p_target)

    @property
    def max_mod_freq(self):
        return max_modulation_frequency(self.delta, self.eps_max, self.p_target)

    def allows(self, mod_freq):
        return mod_freq < self.max_mod_freq


def _rate(x, name):
    if not 0 <= x <= 1:
        raise ParameterError(f"{name} must lie in [0, 1], got {x}")


def clifford_error(r_sq_a, r_sq_b, r_cz, counting="per_layer_sum"):
    """Two-qubit Clifford error 33/4 r_SQ + 3/2 r_CZ.

    per_layer_sum takes r_SQ = r_sq_a + r_sq_b (both qubits driven per layer),
    single_rate takes their mean.
    """
    for x, name in ((r_sq_a, "r_sq_a"), (r_sq_b, "r_sq_b"), (r_cz, "r_cz")):
        _rate(x, name)
    if counting == "per_layer_sum":
        r_sq = r_sq_a + r_sq_b
    elif counting == "single_rate":
        r_sq = (r_sq_a + r_sq_b) / 2
    else:
        raise ParameterError(f"counting must be one of {COUNTINGS}")
    return CLIFFORD_SQ_PER_LAYER * r_sq + CLIFFORD_CZ_PER_LAYER * r_cz


def clifford_report(r_sq_a, r_sq_b, r_cz, measured=None, measured_err=None):
    """Both countings side by side, with their gap to a measured r_C if given."""
    out = {c: clifford_error(r_sq_a, r_sq_b, r_cz, c) for c in COUNTINGS}
    if measured is not None:
        out["measured"] = measured
        out["measured_err"] = measured_err
        for c in COUNTINGS:
            gap = out[c] - measured
            out[f"{c}_gap"] = gap
            if measured_err:
                out[f"{c}_within_err"] = abs(gap) <= measured_err
    return out


@dataclass(frozen=True)
class ErrorBudget:
    """Inputs to the two-qubit decoherence limit.

    Dephasing entries are phase variances <dphi^2> (twice the decay
    exponent), one per qubit (A, B). T1 values are in ns; the CZ-point
    T1 defaults to the idle value.
    """

    t1_idle: tuple = (math.inf, math.inf)
    t1_cz: tuple = None
    white_idle: tuple = (0.0, 0.0)
    white_cz: tuple = (0.0, 0.0)
    one_over_f_cz: tuple = (0.0, 0.0)
    t_idle: float = 20.0
    t_cz: float = 20.0
    r_sq: tuple = (0.0, 0.0)
    r_cz: float = 0.0
    delta_phi: float = 0.0
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.t1_cz is None:
            object.__setattr__(self, "t1_cz", tuple(self.t1_idle))
        for name in ("t1_idle", "t1_cz"):
            if any(not x > 0 for x in getattr(self, name)):
                raise ParameterError(f"{name} must be positive")
        for name in ("white_idle", "white_cz", "one_over_f_cz"):
            if any(x < 0 for x in getattr(self, name)):
                raise ParameterError(f"{name} must be non-negative")
        if self.t_idle < 0 or self.t_cz < 0:
            raise ParameterError("times must be non-negative")
        for x in (*self.r_sq, self.r_cz):
            _rate(x, "rate")


def decoherence_limit(b):
    """(1/6) sum_i [2 t_idle/T1_idle + w_idle + 2 t_cz/T1_cz + w_cz + f_cz]."""
    total = 0.0
    for i in range(2):
        total += 2 * b.t_idle / b.t1_idle[i] + b.white_idle[i]
        total += 2 * b.t_cz / b.t1_cz[i] + b.white_cz[i] + b.one_over_f_cz[i]
    return total / 6


def idle_error_scaled(errors, t_gate=15.0, t_target=40.0):
    """Sum of per-qubit identity-gate errors scaled linearly from t_gate to t_target."""
    if not t_gate > 0 or t_target < 0:
        raise ParameterError("t_gate must be positive and t_target non-negative")
    return float(sum(errors)) * t_target / t_gate


def phase_uncertainty_infidelity(delta_phi):
    """(average-gate infidelity, delta_phi^2/20) for a conditional-phase error.

    The first is 1 - (d + |Tr U^dag V|^2)/(d(d+1)) with d = 4 for
    V = diag(1, 1, 1, e^{i delta_phi}), i.e. 0.3 (1 - cos delta_phi).
    """
    if not abs(delta_phi) < 1:
        raise ParameterError("|delta_phi| must be < 1 rad")
    return 0.3 * (1 - math.cos(delta_phi)), delta_phi**2 / 20
