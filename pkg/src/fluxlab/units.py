"""Unit conversions.

Energies are carried as linear frequencies (GHz, i.e. E/h) and times in ns
throughout the simulation modules. Conversion to angular units goes through
this module so that factors of 2*pi have one home.
"""

import numpy as np

TWO_PI = 2.0 * np.pi


def to_angular(f):
    """Linear frequency -> angular frequency (same time base)."""
    return TWO_PI * np.asarray(f, dtype=float) if np.ndim(f) else TWO_PI * float(f)


def to_linear(omega):
    """Angular frequency -> linear frequency (same time base)."""
    return np.asarray(omega, dtype=float) / TWO_PI if np.ndim(omega) else float(omega) / TWO_PI


def ghz_to_rad_per_s(f_ghz):
    return to_angular(f_ghz) * 1e9


def rad_per_ns_to_rad_per_us(v):
    return v * 1e3
