"""Small regression helpers shared by the CLI summaries and the test suites."""

from __future__ import annotations

import numpy as np


def fit_log_slope(t: np.ndarray, y: np.ndarray) -> float:
    """Least-squares slope of log|y| against t, skipping zeros.

    For a trajectory dominated by C*exp(lam*t) this recovers lam; for a decay
    toward a limit, pass y = q - q_limit.
    """
    t = np.asarray(t, dtype=float)
    y = np.abs(np.asarray(y, dtype=float))
    keep = y > 0.0
    if keep.sum() < 2:
        return float("nan")
    return float(np.polyfit(t[keep], np.log(y[keep]), 1)[0])


def fit_order(h: np.ndarray, err: np.ndarray) -> float:
    """Least-squares convergence order: slope of log(err) against log(h)."""
    h = np.asarray(h, dtype=float)
    err = np.asarray(err, dtype=float)
    keep = err > 0.0
    if keep.sum() < 2:
        return float("nan")
    return float(np.polyfit(np.log(h[keep]), np.log(err[keep]), 1)[0])
