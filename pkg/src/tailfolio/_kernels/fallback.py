"""Pure-NumPy implementations of the hot kernels.

Kept semantically identical to the compiled versions in ``_core.pyx``;
tests/test_kernels.py asserts the two backends agree.
"""

import numpy as np


def quartic_accumulate(x, w):
    """One pass over a T-by-N panel for the quartic statistics of u = x @ w.

    Returns ``(mean of x[t] * u[t]**3 over t, mean of u**2, mean of u**4)``.
    """
    u = np.asarray(x) @ w
    u2 = u * u
    t = x.shape[0]
    return (x.T @ (u2 * u)) / t, float(u2.mean()), float((u2 * u2).mean())


def max_drawdown_scan(equity):
    """Largest peak-to-trough fractional decline of an equity curve, in [0, 1]."""
    peaks = np.maximum.accumulate(equity)
    dd = float(np.max(1.0 - equity / peaks))
    return min(max(dd, 0.0), 1.0)
