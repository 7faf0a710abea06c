"""Flux-noise spectra, filter functions and dephasing exponents.

Conventions: ``alpha`` is a dispersion slope in rad/s per Phi_0, times are in
seconds and the PSD is double-sided in Phi_0^2/Hz. With the noise written as
a sum of sinusoids, the Ramsey exponent is

    <dphi^2>/2 = t^2 alpha^2 * int_{f_low}^{f_high} S(f) g(2 pi f, t) df

(positive frequencies only), where g is the filter function normalised to
g(0) = 1 for static control.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special
from scipy.optimize import least_squares

from .exceptions import NumericError, ParameterError
from .fluxonium import flux_dispersion
from .units import TWO_PI

FILTER_KINDS = ("static", "net_zero", "sinusoidal")
COS_PHASE = np.pi / 2  # slope ~ cos(w_m t): the three-term filter with a + cross term
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)
_LOG_PANELS_PER_DECADE = 20
_MAX_PANELS = 2_000_000
MEASURED_AMPLITUDE = 10.6e-6  # Phi_0/sqrt(Hz)


@dataclass(frozen=True)
class NoiseSpectrum:
    one_over_f_amp: float  # Phi_0/sqrt(Hz) at 1 Hz
    white_floor: float = 0.0  # Phi_0^2/Hz
    f_low: float = 1.0
    f_high: float = 1e9

    def __post_init__(self):
        if self.one_over_f_amp < 0 or self.white_floor < 0:
            raise ParameterError("noise amplitudes must be non-negative")
        if not 0 < self.f_low < self.f_high:
            raise ParameterError(f"cutoffs must satisfy 0 < f_low < f_high, got {self.f_low}, {self.f_high}")


@dataclass(frozen=True)
class DephasingResult:
    exponent: float
    decay: float
    t: float  # ns
    stderr: float = 0.0

    @classmethod
    def from_exponent(cls, exponent, t_seconds, stderr=0.0):
        exponent = float(exponent)
        return cls(exponent, math.exp(-exponent), t_seconds * 1e9, float(stderr))


def psd(spec, f):
    """A^2/(2|f|) + S0 inside the cutoffs, zero outside."""
    f = np.abs(np.asarray(f, dtype=float))
    if np.any(f == 0):
        raise ParameterError("psd is undefined at f = 0")
    inside = (f >= spec.f_low) & (f <= spec.f_high)
    out = np.where(inside, spec.one_over_f_amp**2 / (2 * f) + spec.white_floor, 0.0)
    return out if out.ndim else float(out)


def band_power(spec, f1, f2):
    """int_{f1}^{f2} S(f) df over positive frequencies, clipped to the cutoffs."""
    f1 = np.clip(f1, spec.f_low, spec.f_high)
    f2 = np.clip(f2, spec.f_low, spec.f_high)
    return spec.one_over_f_amp**2 / 2 * np.log(f2 / f1) + spec.white_floor * (f2 - f1)


def _sinc(x):
    return np.sinc(np.asarray(x) / np.pi)


def filter_function(kind, omega, t, omega_m=None, phase=COS_PHASE):
    """Noise filter g_n(omega, t) (dimensionless), sinc(x) = sin(x)/x.

    For ``sinusoidal`` the slope is taken as alpha sin(omega_m t + phase);
    the default phase = pi/2 gives the three-term form with the
    +2 sinc sinc cos(omega_m t) cross term, phase = 0 a pure sine slope.
    ``net_zero`` is the echo-type filter sin^2(omega t/4) sinc^2(omega t/4).
    """
    omega = np.asarray(omega, dtype=float)
    if not t > 0:
        raise ParameterError("t must be positive")
    if kind == "static":
        return _sinc(omega * t / 2) ** 2
    if kind == "net_zero":
        x = omega * t / 4
        return np.sin(x) ** 2 * _sinc(x) ** 2
    if kind == "sinusoidal":
        if omega_m is None or not omega_m > 0:
            raise ParameterError("sinusoidal filter needs omega_m > 0")
        sp = _sinc((omega + omega_m) * t / 2)
        sm = _sinc((omega - omega_m) * t / 2)
        return 0.25 * (sp**2 + sm**2 - 2 * sp * sm * np.cos(omega_m * t + 2 * phase))
    raise ParameterError(f"unknown filter kind {kind!r}; expected one of {FILTER_KINDS}")


def _panels(spec, t, extra=()):
    """Log-spaced panels below 1/t, half-oscillation panels above."""
    lo, hi = spec.f_low, spec.f_high
    knee = min(hi, max(lo, 1.0 / t))
    n_log = max(4, math.ceil(_LOG_PANELS_PER_DECADE * math.log10(knee / lo))) if knee > lo else 0
    edges = [np.geomspace(lo, knee, n_log + 1)] if n_log else [np.array([lo])]
    n_lin = math.ceil(2 * (hi - knee) * t)
    if n_lin > _MAX_PANELS:
        raise NumericError(f"{n_lin} quadrature panels needed; lower f_high or t")
    if n_lin:
        edges.append(np.linspace(knee, hi, n_lin + 1)[1:])
    edges = np.concatenate(edges + [np.asarray([e for e in extra if lo < e < hi])])
    return np.unique(edges)


def _integrate_panels(fun, edges, chunk=20000):
    total = 0.0
    for start in range(0, edges.size - 1, chunk):
        a = edges[start : start + chunk]
        b = edges[start + 1 : start + chunk + 1]
        a = a[: b.size]
        half = (b - a)[:, None] / 2
        x = (a + b)[:, None] / 2 + half * _GL_NODES
        total += float(np.sum(half * (fun(x) @ _GL_WEIGHTS[:, None])))
    return total


def dephasing_exponent(kind, alpha, t, spec, omega_m=None, phase=COS_PHASE):
    """Exponent <dphi^2>/2 from filter-function integration (any kind)."""
    _check(t)
    if alpha == 0:
        return DephasingResult.from_exponent(0.0, t)
    extra = () if omega_m is None else (omega_m / TWO_PI,)
    value = _integrate_panels(
        lambda f: psd(spec, f) * filter_function(kind, TWO_PI * f, t, omega_m, phase), _panels(spec, t, extra)
    )
    return DephasingResult.from_exponent(t**2 * alpha**2 * value, t)


def _check(t):
    if not t > 0:
        raise ParameterError("t must be positive")


def static_dephasing_exponent(alpha, t, spec):
    """Free-evolution exponent in closed form via Ci/Si antiderivatives."""
    _check(t)
    x_lo, x_hi = np.pi * spec.f_low * t, np.pi * spec.f_high * t

    def one_over_f(x):  # antiderivative of sin^2 x / x^3
        return -np.sin(x) ** 2 / (2 * x**2) - np.sin(2 * x) / (2 * x) + special.sici(2 * x)[1]

    def white(x):  # antiderivative of sin^2 x / x^2
        return -np.sin(x) ** 2 / x + special.sici(2 * x)[0]

    value = spec.one_over_f_amp**2 / 2 * (one_over_f(x_hi) - one_over_f(x_lo))
    value += spec.white_floor / (np.pi * t) * (white(x_hi) - white(x_lo))
    return DephasingResult.from_exponent(t**2 * alpha**2 * value, t)


def sinusoidal_dephasing_exponent(alpha, omega_m, t, spec, phase=COS_PHASE):
    """Three-term sinc expression integrated panel-wise with adaptive Gauss-Kronrod."""
    _check(t)
    if not omega_m > 0:
        raise ParameterError("omega_m must be positive")
    if alpha == 0:
        return DephasingResult.from_exponent(0.0, t)
    c = np.cos(omega_m * t + 2 * phase)

    def integrand(f):
        w = TWO_PI * f
        sp = np.sinc((w + omega_m) * t / (2 * np.pi))
        sm = np.sinc((w - omega_m) * t / (2 * np.pi))
        return psd(spec, f) * 0.25 * (sp * sp + sm * sm - 2 * sp * sm * c)

    edges = _panels(spec, t, (omega_m / TWO_PI,))
    # Absolute floor per panel: near-zero panels only carry cancellation noise.
    floor = 1e-12 * (spec.one_over_f_amp**2 / 2 + spec.white_floor / t) / edges.size
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        total += integrate.quad(integrand, a, b, epsabs=floor, epsrel=1e-10, limit=100)[0]
    return DephasingResult.from_exponent(t**2 * alpha**2 * total, t)


def modulation_slope_harmonic(params, delta_phi, n_points=256, base=0.5):
    """First sine-harmonic of d f01/dPhi along base - delta_phi sin(w_m t), GHz/Phi_0.

    The result is the coefficient a_1 in slope(t) ~ a_1 sin(w_m t); it is
    negative for positive delta_phi because the slope changes sign with
    Phi - 1/2. It does not depend on the modulation frequency.
    """
    theta = TWO_PI * (np.arange(n_points) + 0.5) / n_points
    slopes = np.array([flux_dispersion(params, base - delta_phi * np.sin(x)) for x in theta])
    return float(2 * np.mean(slopes * np.sin(theta)))


def slope_waveform(params, pulse):
    """Exact dispersion slope alpha(t) (rad/s per Phi_0, t in s) along a pulse."""

    def alpha(t):
        t_ns = np.atleast_1d(np.asarray(t, dtype=float)) * 1e9
        flux = np.atleast_1d(pulse(np.clip(t_ns, 0, pulse.duration)))
        return TWO_PI * 1e9 * np.array([flux_dispersion(params, x) for x in flux])

    return alpha


@dataclass
class NoiseTrace:
    freqs: np.ndarray  # Hz
    amplitudes: np.ndarray  # Phi_0
    phases: np.ndarray

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        arg = TWO_PI * np.multiply.outer(t, self.freqs) + self.phases
        return np.sin(arg) @ self.amplitudes


def noise_bins(spec, df):
    """Bin centres and amplitudes Phi_i with Phi_i^2 = 4 int_bin S(f) df."""
    if not df > 0:
        raise ParameterError("df must be positive")
    n = math.ceil((spec.f_high - spec.f_low) / df)
    if n > 10**7:
        raise ParameterError(f"{n} noise bins; increase df")
    lo = spec.f_low + df * np.arange(n)
    hi = np.minimum(lo + df, spec.f_high)
    return (lo + hi) / 2, np.sqrt(4 * band_power(spec, lo, hi))


def generate_noise_trace(spec, df, duration, seed):
    """Random realisation sum_i Phi_i sin(2 pi f_i t + xi_i) on equally spaced bins."""
    if df > 1.0 / (10 * duration):
        raise ParameterError(f"bin spacing {df} Hz is too coarse for a {duration} s trace; need <= 1/(10 duration)")
    freqs, amps = noise_bins(spec, df)
    rng = np.random.default_rng(seed)
    return NoiseTrace(freqs, amps, rng.uniform(0.0, TWO_PI, freqs.size))


def _slope_moments(alpha, t, freqs, nodes_per_cycle=16):
    """C_i = int alpha cos(w_i t'), D_i = int alpha sin(w_i t') over [0, t]."""
    w = TWO_PI * freqs
    if not callable(alpha):
        a = float(alpha)
        wt = w * t
        return a * np.sin(wt) / w, a * (1 - np.cos(wt)) / w
    n_panels = max(32, math.ceil(nodes_per_cycle * freqs.max() * t / 4))
    edges = np.linspace(0.0, t, n_panels + 1)
    half = (edges[1] - edges[0]) / 2
    x = ((edges[:-1] + edges[1:]) / 2)[:, None] + half * _GL_NODES
    x = x.ravel()
    wts = np.tile(_GL_WEIGHTS, n_panels) * half * np.asarray(alpha(x), dtype=float)
    c = np.empty_like(w)
    d = np.empty_like(w)
    for s in range(0, w.size, 512):
        arg = np.multiply.outer(w[s : s + 512], x)
        c[s : s + 512] = np.cos(arg) @ wts
        d[s : s + 512] = np.sin(arg) @ wts
    return c, d


def mc_dephasing(alpha, t, spec, n_ensembles=10_000, seed=0, df=None, chunk=250):
    """Monte Carlo exponent <dphi^2>/2 from random-phase noise realisations.

    ``alpha`` is a constant slope or a callable alpha(t) (rad/s per Phi_0).
    Each chunk of realisations draws from its own child of
    SeedSequence(seed), so results depend only on (seed, chunk).
    """
    _check(t)
    if n_ensembles < 100:
        raise ParameterError("n_ensembles must be >= 100")
    if df is None:
        df = min(1e5, 1.0 / (10 * t))
    if df > 1.0 / (10 * t):
        raise ParameterError("df must be <= 1/(10 t)")
    freqs, amps = noise_bins(spec, df)
    c, d = _slope_moments(alpha, t, freqs)
    c = c * amps
    d = d * amps
    if not np.any(c) and not np.any(d):
        return DephasingResult.from_exponent(0.0, t)
    n_chunks = math.ceil(n_ensembles / chunk)
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    samples = np.empty(n_ensembles)
    for k, child in enumerate(children):
        m = min(chunk, n_ensembles - k * chunk)
        xi = np.random.default_rng(child).uniform(0.0, TWO_PI, (m, freqs.size))
        samples[k * chunk : k * chunk + m] = np.sin(xi) @ c + np.cos(xi) @ d
    sq = samples**2
    return DephasingResult.from_exponent(sq.mean() / 2, t, stderr=sq.std(ddof=1) / (2 * math.sqrt(n_ensembles)))


def t2_from_decay(t, decay):
    """First 1/e crossing by linear interpolation; NaN when the curve never crosses."""
    t = np.asarray(t, dtype=float)
    decay = np.asarray(decay, dtype=float)
    if t.shape != decay.shape or t.size < 2:
        raise ParameterError("t and decay must be equal-length arrays with >= 2 samples")
    level = math.exp(-1)
    below = np.nonzero(decay <= level)[0]
    if below.size == 0 or below[0] == 0:
        return float("nan")
    i = below[0]
    t0, t1, y0, y1 = t[i - 1], t[i], decay[i - 1], decay[i]
    return float(t0 + (y0 - level) * (t1 - t0) / (y0 - y1))


@dataclass(frozen=True)
class DecayFit:
    beta: float
    t_beta: float
    t1_tilde: float
    amplitude: float
    residual_rms: float


def double_exponential(t, amplitude, beta, t_beta, t1_tilde):
    return amplitude * np.exp(beta * (np.exp(-t / t_beta) - 1) - t / t1_tilde)


def fit_double_exponential(t, p, max_restarts=4):
    """Fit amp * exp(beta (exp(-t/T_beta) - 1)) exp(-t/T1~) by least squares.

    Start: beta = 1, T_beta = first 1/e time, T1~ from the log-slope over the
    last decade of decay. Restarts rescale T_beta when a fit fails.
    """
    t = np.asarray(t, dtype=float)
    p = np.asarray(p, dtype=float)
    if t.size < 8 or t.shape != p.shape:
        raise ParameterError("need >= 8 samples of equal length")
    if not p.max() >= 10 * max(p.min(), 1e-300):
        raise ParameterError("curve must span at least one decade of decay")
    amp0 = p[0]
    t_e = t2_from_decay(t, p / amp0)
    if not np.isfinite(t_e):
        t_e = (t[-1] - t[0]) / 3
    tail = p <= 10 * max(p.min(), 1e-300)
    tail &= p > 0
    if tail.sum() >= 2:
        slope = np.polyfit(t[tail], np.log(p[tail]), 1)[0]
        t1_0 = -1 / slope if slope < 0 else t[-1]
    else:
        t1_0 = t[-1]
    scale = p.max()
    best = None
    for factor in (1.0, 0.3, 3.0, 0.1, 10.0)[: max_restarts + 1]:
        x0 = np.array([amp0 / scale, 1.0, max(t_e * factor, 1e-12), max(t1_0, 1e-12)])
        try:
            res = least_squares(
                lambda q: double_exponential(t, q[0] * scale, *q[1:]) / scale - p / scale,
                x0,
                bounds=([0, 0, 1e-12, 1e-12], [np.inf, np.inf, np.inf, np.inf]),
                x_scale="jac",
                xtol=1e-15,
                ftol=1e-15,
                gtol=1e-15,
                max_nfev=20000,
            )
        except ValueError:
            continue
        if res.success and (best is None or res.cost < best.cost):
            best = res
    if best is None:
        raise NumericError("double-exponential fit did not converge")
    amp, beta, t_beta, t1 = best.x
    rms = float(np.sqrt(np.mean(best.fun**2))) * scale
    return DecayFit(float(beta), float(t_beta), float(t1), float(amp * scale), rms)
