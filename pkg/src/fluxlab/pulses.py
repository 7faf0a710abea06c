"""Flux pulses, conditional-phase integration and CZ calibration.

Times are in ns, fluxes in Phi_0, frequencies in GHz. A pulse displaces the
flux *below* its base value for positive amplitude, e.g. the sinusoidal kind
is ``base - amplitude * sin(2 pi f_m t + phase)``.
"""

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy import integrate

from .coupled import dressed_computational_energies, simplified_model, zz_shift_exact
from .exceptions import CalibrationError, LabelingError, NumericError, ParameterError
from .fluxonium import mixing_angle
from .quadrature import adaptive_simpson
from .units import TWO_PI, rad_per_ns_to_rad_per_us

KINDS = ("constant", "square_tanh", "net_zero", "sinusoidal")
MODELS = ("full", "simplified")
QUAD_TOL = 1e-5  # rad
POINTS_PER_PERIOD = 40


@dataclass(frozen=True)
class FluxPulse:
    kind: str
    amplitude: float = 0.0
    duration: float = 20.0
    base: float = 0.5
    rise_time: float = 2.0
    mod_freq: float = 0.05
    phase: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown pulse kind {self.kind!r}; expected one of {KINDS}")
        if not self.duration > 0:
            raise ParameterError("duration must be positive")
        if self.kind in ("square_tanh", "net_zero") and not self.rise_time > 0:
            raise ParameterError("rise_time must be positive")
        if self.kind == "sinusoidal" and not self.mod_freq > 0:
            raise ParameterError("mod_freq must be positive")

    def __call__(self, t):
        return sample_pulse(self, t)

    @property
    def periods(self):
        return self.duration * self.mod_freq

    def breakpoints(self):
        """Times where the waveform changes character (edges, sign flips)."""
        tau = self.duration
        if self.kind == "square_tanh":
            edge = min(6 * self.rise_time, tau / 2)
            return [0.0, edge, tau - edge, tau]
        if self.kind == "net_zero":
            half = tau / 2
            edge = min(6 * self.rise_time, half / 2)
            return [0.0, edge, half - edge, half, half + edge, tau - edge, tau]
        return [0.0, tau]


def _envelope(t, width, rise):
    return np.tanh(t / rise) * np.tanh((width - t) / rise)


def sample_pulse(p, t):
    """Flux of pulse ``p`` at time(s) ``t`` in [0, duration]."""
    t = np.asarray(t, dtype=float)
    slack = 1e-9 * p.duration
    if np.any(t < -slack) or np.any(t > p.duration + slack):
        raise ParameterError(f"t outside [0, {p.duration}] ns")
    t = np.clip(t, 0.0, p.duration)
    if p.kind == "constant":
        out = p.base - p.amplitude + 0.0 * t
    elif p.kind == "square_tanh":
        out = p.base - p.amplitude * _envelope(t, p.duration, p.rise_time)
    elif p.kind == "net_zero":
        half = p.duration / 2
        first = t < half
        env = np.where(first, _envelope(t, half, p.rise_time), _envelope(t - half, half, p.rise_time))
        out = p.base - p.amplitude * np.where(first, env, -env)
    else:
        out = p.base - p.amplitude * np.sin(TWO_PI * p.mod_freq * t + p.phase)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class GateSchedule:
    pulse_a: FluxPulse
    pulse_b: FluxPulse
    t_cz: float
    t_idle: float = 0.0

    def __post_init__(self):
        if self.t_idle < 0:
            raise ParameterError("t_idle must be non-negative")
        for p in (self.pulse_a, self.pulse_b):
            if not math.isclose(p.duration, self.t_cz, rel_tol=1e-12):
                raise ParameterError("pulse durations must equal t_cz")
            if p.kind == "sinusoidal" and abs(p.periods - round(p.periods)) > 1e-9:
                warnings.warn(
                    f"t_cz = {self.t_cz} ns is not an integer number of modulation periods; "
                    "the decoupling and phase cancellation assume it is",
                    stacklevel=3,
                )

    def fluxes(self, t):
        return self.pulse_a(t), self.pulse_b(t)

    @property
    def idle_fluxes(self):
        return self.pulse_a.base, self.pulse_b.base

    def panel_edges(self):
        edges = set(self.pulse_a.breakpoints()) | set(self.pulse_b.breakpoints())
        n = 8
        for p in (self.pulse_a, self.pulse_b):
            if p.kind == "sinusoidal":
                n = max(n, math.ceil(POINTS_PER_PERIOD / 2 * p.periods))
        edges |= set(np.linspace(0.0, self.t_cz, n + 1).tolist())
        return np.array(sorted(edges))


def sinusoidal_schedule(delta_a, delta_b, mod_freq=0.05, t_cz=20.0, t_idle=0.0, base=0.5):
    pa = FluxPulse("sinusoidal", amplitude=delta_a, duration=t_cz, base=base, mod_freq=mod_freq)
    return GateSchedule(pa, replace(pa, amplitude=delta_b), t_cz, t_idle)


def square_schedule(delta_a, delta_b, tau=200.0, rise_time=2.0, t_idle=0.0, base=0.5):
    pa = FluxPulse("square_tanh", amplitude=delta_a, duration=tau, base=base, rise_time=rise_time)
    return GateSchedule(pa, replace(pa, amplitude=delta_b), tau, t_idle)


@dataclass(frozen=True)
class CZResult:
    phi: float
    zeta_a: float
    zeta_b: float
    delta_phi_b: float


def zz_rate(sys, flux_a, flux_b, model="full"):
    """Dressed ZZ shift zeta = 4 g_zz (GHz) at a flux point."""
    if model == "full":
        return zz_shift_exact(sys, flux_a, flux_b).zeta
    if model == "simplified":
        tlp_a, tlp_b, j = simplified_model(sys)
        return 4.0 * j * float(np.cos(mixing_angle(tlp_a, flux_a)) * np.cos(mixing_angle(tlp_b, flux_b)))
    raise ParameterError(f"unknown model {model!r}; expected one of {MODELS}")


def conditional_phase(sys, sched, model="full", include_idle=True, tol=QUAD_TOL):
    """Unwrapped conditional phase phi = int 2 pi zeta dt over the gate (+ idle), rad."""

    def integrand(t):
        fa, fb = sched.fluxes(t)
        return TWO_PI * zz_rate(sys, fa, fb, model)

    phi, _ = adaptive_simpson(integrand, sched.panel_edges(), tol=tol)
    if include_idle and sched.t_idle > 0:
        phi += sched.t_idle * TWO_PI * zz_rate(sys, *sched.idle_fluxes, model)
    return phi


def _qubit_frequencies(sys, flux_a, flux_b, model):
    if model == "full":
        e, _ = dressed_computational_energies(sys, flux_a, flux_b)
        return e["eg"] - e["gg"], e["ge"] - e["gg"]
    if model == "simplified":
        tlp_a, tlp_b, _ = simplified_model(sys)
        return float(tlp_a.frequency(flux_a)), float(tlp_b.frequency(flux_b))
    raise ParameterError(f"unknown model {model!r}; expected one of {MODELS}")


def single_qubit_phases(sys, sched, model="full", tol=QUAD_TOL):
    """Phases zeta_A, zeta_B (rad) relative to the idle-point frame over t_cz.

    zeta_i = int 2 pi (f_i(t) - f_i(idle)) dt with the partner in |g>.
    """
    ref_a, ref_b = _qubit_frequencies(sys, *sched.idle_fluxes, model)
    edges = sched.panel_edges()
    out = []
    for which, ref in ((0, ref_a), (1, ref_b)):

        def integrand(t, which=which, ref=ref):
            fa, fb = sched.fluxes(t)
            return TWO_PI * (_qubit_frequencies(sys, fa, fb, model)[which] - ref)

        out.append(adaptive_simpson(integrand, edges, tol=tol)[0])
    return tuple(out)


@dataclass
class VPhiMap:
    amplitudes_a: np.ndarray
    amplitudes_b: np.ndarray
    v_phi: np.ndarray  # rad/us over the pulse alone, indexed [i_a, i_b]
    v_phi_with_idle: np.ndarray  # (phi + idle phase) / (tau + t_idle)
    valid: np.ndarray
    errors: dict


def v_phi_map(sys, amplitudes_a, amplitudes_b, kind="square_tanh", tau=200.0, model="full",
              rise_time=2.0, mod_freq=0.05, t_idle=0.0, tol=QUAD_TOL):
    """Average conditional-phase speed phi / tau (rad/us) over an amplitude grid.

    The idle-inclusive map adds t_idle of residual ZZ at the idle point and
    divides by the total duration.
    """
    amps_a = np.atleast_1d(np.asarray(amplitudes_a, dtype=float))
    amps_b = np.atleast_1d(np.asarray(amplitudes_b, dtype=float))
    if max(np.abs(amps_a).max(), np.abs(amps_b).max()) > 0.15 + 1e-12:
        raise ParameterError("amplitudes must lie within +-0.15 Phi_0")
    if t_idle < 0:
        raise ParameterError("t_idle must be non-negative")
    v = np.full((amps_a.size, amps_b.size), np.nan)
    v_idle = v.copy()
    valid = np.zeros(v.shape, dtype=bool)
    errors = {}
    idle_phase = t_idle * TWO_PI * zz_rate(sys, 0.5, 0.5, model) if t_idle else 0.0
    for i, da in enumerate(amps_a):
        for j, db in enumerate(amps_b):
            pa = FluxPulse(kind, amplitude=da, duration=tau, rise_time=rise_time, mod_freq=mod_freq)
            sched = GateSchedule(pa, replace(pa, amplitude=db), tau)
            try:
                phi = conditional_phase(sys, sched, model, include_idle=False, tol=tol)
            except NumericError as exc:
                errors[(i, j)] = exc
                continue
            v[i, j] = rad_per_ns_to_rad_per_us(phi / tau)
            v_idle[i, j] = rad_per_ns_to_rad_per_us((phi + idle_phase) / (tau + t_idle))
            valid[i, j] = True
    return VPhiMap(amps_a, amps_b, v, v_idle, valid, errors)


def conditional_phase_fixed_step(sys, sched, model="full", n_intervals=2000, include_idle=True):
    """Composite Simpson on a uniform grid; an independent check of conditional_phase."""
    n_intervals += n_intervals % 2
    t = np.linspace(0.0, sched.t_cz, n_intervals + 1)
    fa, fb = sched.fluxes(t)
    y = np.array([TWO_PI * zz_rate(sys, a, b, model) for a, b in zip(fa, fb)])
    phi = float(integrate.simpson(y, x=t))
    if include_idle and sched.t_idle > 0:
        phi += sched.t_idle * TWO_PI * zz_rate(sys, *sched.idle_fluxes, model)
    return phi


def calibrate_cz(sys, delta_phi_a, mod_freq=0.05, t_cz=20.0, t_idle=20.0, model="full",
                 bracket=(0.0, 0.15), n_scan=16, target=np.pi, tol=QUAD_TOL):
    """Find the companion amplitude delta_phi_b giving phi = target (mod 2 pi).

    A coarse scan locates the smallest amplitude interval containing a
    solution, bisection narrows it to 1e-3 Phi_0 and a safeguarded secant
    step finishes to 1e-6 rad. phi must be strictly monotone inside the
    bracket; a violation raises NumericError. The scan stops at the first
    amplitude whose trajectory cannot be labelled.
    """

    def schedule(db):
        return sinusoidal_schedule(delta_phi_a, db, mod_freq, t_cz, t_idle)

    def phase(db):
        return conditional_phase(sys, schedule(db), model, tol=tol)

    grid = np.linspace(bracket[0], bracket[1], n_scan)
    values = []
    for x in grid:
        # Amplitudes past a level crossing are unusable; stop the scan there.
        try:
            values.append(phase(x))
        except LabelingError:
            if not values:
                raise
            break
    found = None
    for k in range(len(values) - 1):
        lo_v, hi_v = sorted((values[k], values[k + 1]))
        m = math.ceil((lo_v - target) / (2 * np.pi))
        goal = target + 2 * np.pi * m
        if lo_v <= goal <= hi_v:
            found = (grid[k], grid[k + 1], values[k], values[k + 1], goal)
            break
    if found is None:
        raise CalibrationError(
            f"no amplitude in [{bracket[0]}, {bracket[1]}] Phi_0 reaches phi = {target:.6g} mod 2pi; "
            f"achieved phi in [{min(values):.6g}, {max(values):.6g}] rad",
            phi_range=(min(values), max(values)),
        )
    a, b, fa, fb, goal = found
    fa -= goal
    fb -= goal
    increasing = fb > fa

    def check(fm, fl, fh):
        if not (min(fl, fh) < fm < max(fl, fh)) and fm != 0.0:
            raise NumericError("conditional phase is not monotone in delta_phi_b inside the bracket")

    while b - a > 1e-3:
        m = 0.5 * (a + b)
        fm = phase(m) - goal
        check(fm, fa, fb)
        if (fm < 0) == increasing:
            a, fa = m, fm
        else:
            b, fb = m, fm

    x0, f0, x1, f1 = a, fa, b, fb
    x, fx = (a, fa) if abs(fa) < abs(fb) else (b, fb)
    for _ in range(60):
        if abs(fx) <= 1e-6:
            break
        x = x1 - f1 * (x1 - x0) / (f1 - f0) if f1 != f0 else 0.5 * (a + b)
        if not a < x < b:
            x = 0.5 * (a + b)
        fx = phase(x) - goal
        check(fx, fa, fb)
        if (fx < 0) == increasing:
            a, fa = x, fx
        else:
            b, fb = x, fx
        x0, f0, x1, f1 = x1, f1, x, fx
    else:
        raise NumericError("secant refinement did not reach 1e-6 rad")

    sched = schedule(x)
    zeta_a, zeta_b = single_qubit_phases(sys, sched, model, tol)
    return CZResult(phi=float(fx + goal), zeta_a=float(zeta_a), zeta_b=float(zeta_b), delta_phi_b=float(x))


def cz_unitary(res):
    """diag(1, e^{i zeta_A}, e^{i zeta_B}, e^{i(zeta_A + zeta_B + phi)}).

    Basis order |g_B g_A>, |g_B e_A>, |e_B g_A>, |e_B e_A>: the second entry
    carries qubit A's excitation.
    """
    za, zb, phi = res.zeta_a, res.zeta_b, res.phi
    return np.diag(np.exp(1j * np.array([0.0, za, zb, za + zb + phi])))


def wrap_phase(x):
    """Map an angle into (-pi, pi]."""
    return float(np.pi - np.mod(np.pi - x, 2 * np.pi))


def n_gate_conditional_phase(res, n):
    """Conditional phase after n repetitions, wrapped into (-pi, pi]."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    phi = res.phi if isinstance(res, CZResult) else float(res)
    return wrap_phase(n * phi)
