"""Inductively coupled fluxonium pair.

The two-qubit Hamiltonian is assembled from each qubit's lowest K levels at
its own flux, with the interaction J_bare (phi_A - 2 pi Phi_A)(phi_B - 2 pi Phi_B)
expressed through the projected shifted-phase operators. Product states are
ordered with qubit A as the slow index: ``|a b>`` -> ``a * K + b``.
"""

import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.constants as const
from scipy.optimize import brentq

from .exceptions import LabelingError, ParameterError
from .fluxonium import (
    DEFAULT_N_BASIS,
    QUBIT_A,
    QUBIT_B,
    QubitParams,
    fit_two_level,
    mixing_angle,
    phase_matrix_element,
    qubit_levels,
    transition_frequency,
)

J_BARE_TABLE = 3.5e-3  # GHz
OVERLAP_THRESHOLD = 0.7
FLUX_QUANTUM = const.h / (2 * const.e)


@dataclass(frozen=True)
class CoupledSystem:
    qubit_a: QubitParams
    qubit_b: QubitParams
    j_bare: float
    levels_per_qubit: int = 6
    n_basis: int = DEFAULT_N_BASIS

    def __post_init__(self):
        if not np.isfinite(self.j_bare) or self.j_bare < 0:
            raise ParameterError(f"j_bare must be non-negative, got {self.j_bare!r}")
        if self.levels_per_qubit < 2:
            raise ParameterError("levels_per_qubit must be >= 2")
        if self.j_bare > 0.1 * min(self.qubit_a.e_l, self.qubit_b.e_l):
            warnings.warn("j_bare exceeds 10% of E_L; the coupling is no longer perturbative", stacklevel=3)

    def replace(self, **changes):
        values = {
            "qubit_a": self.qubit_a,
            "qubit_b": self.qubit_b,
            "j_bare": self.j_bare,
            "levels_per_qubit": self.levels_per_qubit,
            "n_basis": self.n_basis,
        }
        values.update(changes)
        return CoupledSystem(**values)


def default_system(**overrides):
    """The reference device: bundled qubit parameters and J_bare = 3.5 MHz."""
    values = dict(qubit_a=QUBIT_A, qubit_b=QUBIT_B, j_bare=J_BARE_TABLE)
    values.update(overrides)
    return CoupledSystem(**values)


@dataclass(frozen=True)
class CouplingStrengths:
    g_xx: float
    g_zz: float
    g_xz: float
    g_zx: float

    def as_array(self):
        return np.array([self.g_xx, self.g_zz, self.g_xz, self.g_zx])


@dataclass(frozen=True)
class ZZShift:
    zeta: float
    energies: dict = field(default_factory=dict, compare=False)
    min_overlap: float = 1.0


def build_coupled_hamiltonian(sys, flux_a, flux_b):
    """K^2 x K^2 Hamiltonian in the product of instantaneous single-qubit eigenbases."""
    k = sys.levels_per_qubit
    a = qubit_levels(sys.qubit_a, flux_a, k, sys.n_basis)
    b = qubit_levels(sys.qubit_b, flux_b, k, sys.n_basis)
    eye = np.eye(k)
    h = np.kron(np.diag(a.energies), eye) + np.kron(eye, np.diag(b.energies))
    h += sys.j_bare * np.kron(a.phase, b.phase)
    return 0.5 * (h + h.T)


_LABELS = {"gg": (0, 0), "ge": (0, 1), "eg": (1, 0), "ee": (1, 1)}


@lru_cache(maxsize=16384)
def _dressed(sys, flux_a, flux_b):
    h = build_coupled_hamiltonian(sys, flux_a, flux_b)
    energies, vectors = np.linalg.eigh(h)
    k = sys.levels_per_qubit
    labelled = {}
    overlaps = {}
    for name, (i, j) in _LABELS.items():
        weights = vectors[i * k + j] ** 2
        m = int(np.argmax(weights))
        labelled[name] = float(energies[m])
        overlaps[name] = (m, float(weights[m]))
    return energies, labelled, overlaps


def dressed_computational_energies(sys, flux_a, flux_b):
    """Dressed energies of |gg>, |ge>, |eg>, |ee> labelled by maximum bare overlap.

    Raises LabelingError when any overlap falls below the threshold or two
    labels claim the same dressed state.
    """
    _, labelled, overlaps = _dressed(sys, float(flux_a), float(flux_b))
    worst = min(w for _, w in overlaps.values())
    indices = [m for m, _ in overlaps.values()]
    if worst < OVERLAP_THRESHOLD or len(set(indices)) != len(indices):
        raise LabelingError(
            f"ambiguous dressed-state labels at flux ({flux_a:.6g}, {flux_b:.6g}), "
            f"max overlap {worst:.3f}; the trajectory is too close to a qubit-qubit resonance",
            flux_a=flux_a,
            flux_b=flux_b,
            overlap=worst,
        )
    return labelled, worst


def zz_shift_exact(sys, flux_a, flux_b):
    """zeta = (E_ee - E_eg - E_ge + E_gg)/h from the dressed spectrum (GHz)."""
    e, worst = dressed_computational_energies(sys, flux_a, flux_b)
    zeta = (e["ee"] - e["gg"]) - (e["eg"] - e["gg"]) - (e["ge"] - e["gg"])
    return ZZShift(zeta=float(zeta), energies=e, min_overlap=worst)


def coupling_strengths_full(sys, flux_a, flux_b):
    """Projected interaction strengths from phase matrix elements (GHz)."""
    n = sys.n_basis

    def parts(params, flux):
        ge = phase_matrix_element(params, flux, 0, 1, n).real
        eg = phase_matrix_element(params, flux, 1, 0, n).real
        ee = phase_matrix_element(params, flux, 1, 1, n).real
        gg = phase_matrix_element(params, flux, 0, 0, n).real
        return ge + eg, ee - gg

    xa, za = parts(sys.qubit_a, flux_a)
    xb, zb = parts(sys.qubit_b, flux_b)
    pre = sys.j_bare / 4.0
    return CouplingStrengths(g_xx=pre * xa * xb, g_zz=pre * za * zb, g_xz=pre * xa * zb, g_zx=pre * za * xb)


def coupling_strengths_simplified(tlp_a, tlp_b, j_eff, flux_a, flux_b):
    """Spin-model strengths J sin sin, J cos cos and the two XZ cross terms (GHz).

    The first index of g_xz / g_zx refers to qubit A.
    """
    if j_eff <= 0:
        raise ParameterError("j_eff must be positive")
    ta = mixing_angle(tlp_a, flux_a)
    tb = mixing_angle(tlp_b, flux_b)
    return CouplingStrengths(
        g_xx=float(j_eff * np.sin(ta) * np.sin(tb)),
        g_zz=float(j_eff * np.cos(ta) * np.cos(tb)),
        g_xz=float(-j_eff * np.sin(ta) * np.cos(tb)),
        g_zx=float(-j_eff * np.cos(ta) * np.sin(tb)),
    )


def inductance(e_l_ghz):
    """Loop inductance (H) from E_L (GHz): L = (Phi_0 / 2 pi)^2 / E_L."""
    return (FLUX_QUANTUM / (2 * np.pi)) ** 2 / (const.h * e_l_ghz * 1e9)


def mutual_inductance(sys):
    """M = J_bare L_A L_B / (Phi_0 / 2 pi)^2 in henries."""
    l_a = inductance(sys.qubit_a.e_l)
    l_b = inductance(sys.qubit_b.e_l)
    return const.h * sys.j_bare * 1e9 * l_a * l_b / (FLUX_QUANTUM / (2 * np.pi)) ** 2


def persistent_current(tlp):
    """I_p in amperes from the stored slope: eps = 2 I_p (Phi - Phi_0/2)."""
    return const.h * tlp.i_p * 1e9 / (2 * FLUX_QUANTUM)


def effective_j(sys, tlp_a, tlp_b):
    """J/h = M I_p^A I_p^B / h in GHz."""
    m = mutual_inductance(sys)
    return m * persistent_current(tlp_a) * persistent_current(tlp_b) / const.h / 1e9


@lru_cache(maxsize=64)
def simplified_model(sys, window=0.05):
    """Two-level fits for both qubits and the resulting J/h, cached per system."""
    tlp_a = fit_two_level(sys.qubit_a, window, sys.n_basis)
    tlp_b = fit_two_level(sys.qubit_b, window, sys.n_basis)
    return tlp_a, tlp_b, effective_j(sys, tlp_a, tlp_b)


@dataclass
class ConditionalSpectrum:
    flux_a: float
    flux_b: np.ndarray
    f_a_given_g: np.ndarray
    f_a_given_e: np.ndarray
    zeta: np.ndarray
    gap: np.ndarray  # splitting of the single-excitation doublet
    valid: np.ndarray
    errors: list


def conditional_spectrum(sys, flux_a, flux_b):
    """Qubit A's dressed frequency with B in |g> or |e>, over a grid of flux_b.

    Points where the dressed labels are ambiguous are flagged invalid (NaN)
    and their LabelingError kept in ``errors``.
    """
    grid = np.asarray(flux_b, dtype=float)
    if grid.min() < 0.3 or grid.max() > 0.7:
        raise ParameterError("flux_b grid must lie within [0.3, 0.7]")
    n = grid.size
    fg, fe, zeta, gap = (np.full(n, np.nan) for _ in range(4))
    valid = np.zeros(n, dtype=bool)
    errors = []
    for idx, fb in enumerate(grid):
        energies, _, _ = _dressed(sys, float(flux_a), float(fb))
        gap[idx] = energies[2] - energies[1]
        try:
            e, _ = dressed_computational_energies(sys, flux_a, fb)
        except LabelingError as exc:
            errors.append(exc)
            continue
        fg[idx] = e["eg"] - e["gg"]
        fe[idx] = e["ee"] - e["ge"]
        zeta[idx] = (e["ee"] - e["gg"]) - (e["eg"] - e["gg"]) - (e["ge"] - e["gg"])
        valid[idx] = True
    return ConditionalSpectrum(float(flux_a), grid, fg, fe, zeta, gap, valid, errors)


def find_resonance(sys, flux_a, lo=0.3, hi=0.7, xtol=1e-10):
    """Fluxes of qubit B at which the bare f01 curves of A and B cross.

    Searches each side of half flux separately and returns the sorted roots;
    an empty list means the curves never cross in [lo, hi].
    """
    target = transition_frequency(sys.qubit_a, flux_a, sys.n_basis)

    def mismatch(fb):
        return transition_frequency(sys.qubit_b, fb, sys.n_basis) - target

    roots = []
    for a, b in ((lo, 0.5), (0.5, hi)):
        fa_, fb_ = mismatch(a), mismatch(b)
        if fa_ == 0.0:
            roots.append(a)
        elif fa_ * fb_ < 0:
            roots.append(brentq(mismatch, a, b, xtol=xtol))
    return sorted(roots)
