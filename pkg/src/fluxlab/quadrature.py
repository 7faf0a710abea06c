"""Adaptive Simpson integration for expensive scalar integrands."""

import numpy as np

from .exceptions import NumericError


def adaptive_simpson(f, edges, tol=1e-5, max_depth=40):
    """Integrate scalar ``f`` over the panels delimited by ``edges``.

    Each panel is refined until the Richardson error estimate falls below its
    share of ``tol`` (shares proportional to panel width). Returns the
    integral and the number of function evaluations.
    """
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise ValueError("edges must be strictly increasing with at least two entries")
    cache = {}

    def value(x):
        try:
            return cache[x]
        except KeyError:
            y = cache[x] = float(f(x))
            return y

    span = edges[-1] - edges[0]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        m = 0.5 * (a + b)
        fa, fm, fb = value(a), value(m), value(b)
        whole = (b - a) * (fa + 4 * fm + fb) / 6
        stack = [(a, b, fa, fm, fb, whole, tol * (b - a) / span, 0)]
        while stack:
            a_, b_, fa_, fm_, fb_, s, eps, depth = stack.pop()
            m_ = 0.5 * (a_ + b_)
            lm, rm = 0.5 * (a_ + m_), 0.5 * (m_ + b_)
            flm, frm = value(lm), value(rm)
            left = (m_ - a_) * (fa_ + 4 * flm + fm_) / 6
            right = (b_ - m_) * (fm_ + 4 * frm + fb_) / 6
            err = left + right - s
            if abs(err) <= 15 * eps:
                total += left + right + err / 15
            elif depth >= max_depth:
                raise NumericError(f"adaptive Simpson hit depth {max_depth} near t={m_:.6g}")
            else:
                stack.append((a_, m_, fa_, flm, fm_, left, 0.5 * eps, depth + 1))
                stack.append((m_, b_, fm_, frm, fb_, right, 0.5 * eps, depth + 1))
    return total, len(cache)
