"""Single-fluxonium Hamiltonian, spectrum and effective two-level model.

The circuit Hamiltonian is written in the standard fluxonium form

    H = 4 E_C n^2 - E_J cos(phi) + (E_L / 2) (phi - 2 pi Phi / Phi_0)^2

and represented in the harmonic-oscillator basis of the LC mode set by
(E_C, E_L), centred on the external-flux offset. In that basis the shifted
phase ``phi - 2 pi Phi / Phi_0`` (the operator entering the inductive
coupling) is simply ``phi_zpf (a + a^dagger)``.

All energies are linear frequencies in GHz and flux is in units of Phi_0.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
import scipy.linalg
from scipy.optimize import least_squares

from .exceptions import NumericError, ParameterError
from .units import TWO_PI

DEFAULT_N_BASIS = 80
MIN_N_BASIS = 20
DISPERSION_STEP = 1e-5
_PAD = 60


@dataclass(frozen=True)
class QubitParams:
    """Circuit energies of one fluxonium (GHz)."""

    e_c: float
    e_l: float
    e_j: float
    label: str = ""

    def __post_init__(self):
        for name in ("e_c", "e_l", "e_j"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ParameterError(f"{name} must be positive and finite, got {value!r}")
        if self.e_j <= self.e_l:
            raise ParameterError(
                f"e_j ({self.e_j}) must exceed e_l ({self.e_l}) for a fluxonium double well"
            )

    @property
    def plasma_frequency(self):
        """Frequency of the bare LC mode, sqrt(8 E_C E_L)."""
        return np.sqrt(8.0 * self.e_c * self.e_l)


QUBIT_A = QubitParams(e_c=1.61, e_l=0.45, e_j=2.89, label="A")
QUBIT_B = QubitParams(e_c=1.24, e_l=0.45, e_j=2.68, label="B")


class EigenSystem(NamedTuple):
    energies: np.ndarray
    states: np.ndarray


@dataclass(frozen=True)
class TwoLevelParams:
    """Persistent-current spin model of a fluxonium near half flux.

    ``delta`` is the tunnelling splitting and ``i_p`` the flux slope of the
    persistent-current energy difference, so that eps/h = i_p (Phi - 1/2).
    Both in GHz (i_p per Phi_0).
    """

    delta: float
    i_p: float
    rms: float = 0.0

    def epsilon(self, flux):
        return self.i_p * (np.asarray(flux, dtype=float) - 0.5)

    def frequency(self, flux):
        return np.hypot(self.epsilon(flux), self.delta)

    def dispersion(self, flux):
        eps = self.epsilon(flux)
        return self.i_p * eps / np.hypot(eps, self.delta)


def _validate(flux, n_basis):
    if not np.isfinite(flux):
        raise ParameterError(f"flux must be finite, got {flux!r}")
    if int(n_basis) != n_basis or n_basis < MIN_N_BASIS:
        raise ParameterError(f"n_basis must be an integer >= {MIN_N_BASIS}, got {n_basis!r}")


@lru_cache(maxsize=64)
def _oscillator(e_c, e_l, n_basis):
    """Ladder data of the LC mode, padded so that cos(phi) is accurate."""
    size = n_basis + _PAD
    omega = np.sqrt(8.0 * e_c * e_l)
    phi_zpf = (2.0 * e_c / e_l) ** 0.25
    off = np.sqrt(np.arange(1, size))
    phase = phi_zpf * (np.diag(off, 1) + np.diag(off, -1))
    # Position eigenbasis of the padded oscillator (Gauss-Hermite nodes).
    nodes, vectors = np.linalg.eigh(phase)
    phase = phase[:n_basis, :n_basis].copy()
    phase.setflags(write=False)
    return omega, phase, nodes, vectors


def _hamiltonian(e_c, e_l, e_j, flux, n_basis, josephson_sign=-1):
    omega, _, nodes, vectors = _oscillator(e_c, e_l, n_basis)
    phi_ext = TWO_PI * flux
    cos_phi = (vectors * np.cos(nodes + phi_ext)) @ vectors.T
    h = josephson_sign * e_j * cos_phi[:n_basis, :n_basis]
    h[np.diag_indices(n_basis)] += omega * (np.arange(n_basis) + 0.5)
    return 0.5 * (h + h.T)


def build_single_hamiltonian(params, flux, n_basis=DEFAULT_N_BASIS, josephson_sign=-1):
    """Truncated fluxonium Hamiltonian at external flux ``flux`` (Phi_0).

    ``josephson_sign=+1`` gives the ``+E_J cos(phi)`` variant, whose spectrum
    at flux Phi coincides with the default one at Phi + 1/2.
    """
    _validate(flux, n_basis)
    if josephson_sign not in (-1, 1):
        raise ParameterError("josephson_sign must be +1 or -1")
    return _hamiltonian(params.e_c, params.e_l, params.e_j, float(flux), int(n_basis), josephson_sign)


def shifted_phase_operator(params, n_basis=DEFAULT_N_BASIS):
    """Matrix of (phi - 2 pi Phi/Phi_0) in the oscillator basis (flux independent)."""
    return _oscillator(params.e_c, params.e_l, int(n_basis))[1]


def _fix_gauge(states):
    idx = np.argmax(np.abs(states), axis=0)
    pivot = states[idx, np.arange(states.shape[1])]
    return states * (np.conj(pivot) / np.abs(pivot))


def eigensystem(h, k):
    """Lowest ``k`` eigenpairs of a Hermitian matrix, ascending, gauge fixed.

    Each eigenvector is rotated so that its largest-magnitude component is
    real and positive (first such index on ties).
    """
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ParameterError("h must be a square matrix")
    dim = h.shape[0]
    if not 1 <= k <= dim:
        raise ParameterError(f"k must lie in [1, {dim}], got {k}")
    scale = max(np.abs(h).max(), 1.0)
    if np.abs(h - h.conj().T).max() > 1e-12 * scale:
        raise ParameterError("matrix is not Hermitian")
    if not np.all(np.isfinite(h)):
        raise NumericError("matrix contains non-finite entries")
    try:
        energies, states = scipy.linalg.eigh(h, subset_by_index=[0, k - 1])
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericError(f"eigensolver failed for {dim}x{dim} matrix: {exc}") from exc
    return EigenSystem(energies, _fix_gauge(states))


class QubitLevels(NamedTuple):
    energies: np.ndarray
    phase: np.ndarray  # projected (phi - 2 pi Phi/Phi_0)


@lru_cache(maxsize=8192)
def _levels(params, flux, k, n_basis):
    h = _hamiltonian(params.e_c, params.e_l, params.e_j, flux, n_basis)
    es = eigensystem(h, k)
    phase = es.states.T @ shifted_phase_operator(params, n_basis) @ es.states
    phase = 0.5 * (phase + phase.T)
    energies = es.energies.copy()
    energies.setflags(write=False)
    phase.setflags(write=False)
    return QubitLevels(energies, phase)


def qubit_levels(params, flux, k, n_basis=DEFAULT_N_BASIS):
    """Lowest ``k`` energies and the shifted phase operator projected onto them.

    Results are cached; the returned arrays are read-only.
    """
    _validate(flux, n_basis)
    return _levels(params, float(flux), int(k), int(n_basis))


def transition_frequency(params, flux, n_basis=DEFAULT_N_BASIS):
    """f01 = E_1 - E_0 in GHz."""
    e = qubit_levels(params, flux, 2, n_basis).energies
    return float(e[1] - e[0])


def spectrum(params, fluxes, levels=3, n_basis=DEFAULT_N_BASIS):
    """Transition frequencies E_k - E_0 (k = 1..levels) over a flux sweep."""
    fluxes = np.atleast_1d(np.asarray(fluxes, dtype=float))
    out = np.empty((fluxes.size, levels))
    for row, flux in enumerate(fluxes):
        e = qubit_levels(params, flux, levels + 1, n_basis).energies
        out[row] = e[1:] - e[0]
    return out


def flux_dispersion(params, flux, n_basis=DEFAULT_N_BASIS, step=DISPERSION_STEP):
    """Central-difference slope d f01 / d Phi in GHz per Phi_0."""
    up = transition_frequency(params, flux + step, n_basis)
    down = transition_frequency(params, flux - step, n_basis)
    return (up - down) / (2.0 * step)


def phase_matrix_element(params, flux, i, j, n_basis=DEFAULT_N_BASIS):
    """<i| phi |j> between eigenstates of the single-qubit Hamiltonian."""
    k = max(i, j) + 1
    levels = qubit_levels(params, flux, k, n_basis)
    value = levels.phase[i, j]
    if i == j:
        value = value + TWO_PI * float(flux)
    return complex(value)


def _two_level_model(flux, delta, i_p):
    return np.hypot(i_p * (flux - 0.5), delta)


def fit_two_level_data(fluxes, f01):
    """Least-squares (delta, i_p) for sqrt((i_p (Phi - 1/2))^2 + delta^2) through samples."""
    fluxes = np.asarray(fluxes, dtype=float)
    f01 = np.asarray(f01, dtype=float)
    if fluxes.shape != f01.shape or fluxes.size < 3:
        raise ParameterError("need >= 3 matching flux/frequency samples")
    f_mid = f01[np.argmin(np.abs(fluxes - 0.5))]
    # Seed i_p from the widest sample assuming the two-level form.
    far = np.argmax(np.abs(fluxes - 0.5))
    i_p0 = np.sqrt(max(f01[far] ** 2 - f_mid**2, 1e-12)) / max(abs(fluxes[far] - 0.5), 1e-12)
    fit = least_squares(
        lambda p: _two_level_model(fluxes, *p) - f01,
        x0=[f_mid, i_p0],
        bounds=([0.0, 0.0], [np.inf, np.inf]),
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-15,
    )
    if not fit.success:
        raise NumericError(f"two-level fit did not converge: {fit.message}")
    delta, i_p = fit.x
    rms = float(np.sqrt(np.mean(fit.fun**2)))
    return TwoLevelParams(delta=float(delta), i_p=float(i_p), rms=rms)


def fit_two_level(params, window=0.05, n_basis=DEFAULT_N_BASIS, n_points=41):
    """Fit the two-level dispersion to the exact f01 on 0.5 +- window."""
    if not 0.02 <= window <= 0.08:
        raise ParameterError(f"window half-width must lie in [0.02, 0.08], got {window}")
    fluxes = np.linspace(0.5 - window, 0.5 + window, n_points)
    f01 = np.array([transition_frequency(params, x, n_basis) for x in fluxes])
    tlp = fit_two_level_data(fluxes, f01)
    if tlp.rms > 0.01 * tlp.delta:
        raise NumericError(f"two-level fit residual {tlp.rms:.3g} GHz exceeds 1% of delta")
    return tlp


def mixing_angle(tlp, flux):
    """theta = atan2(delta, eps) in (0, pi); pi/2 at half flux."""
    return np.arctan2(tlp.delta, tlp.epsilon(flux))
