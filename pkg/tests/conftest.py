"""Shared test oracles: critical values and finite differences."""

import math

import numpy as np


def ks_critical(n: int, alpha: float) -> float:
    """Asymptotic Kolmogorov critical value for the one-sample KS test."""
    return math.sqrt(-0.5 * math.log(alpha / 2.0)) / math.sqrt(n)


def central_diff(fn, x: np.ndarray, rel_step: float = 1e-6) -> np.ndarray:
    """Central finite-difference gradient of a scalar function of a vector."""
    x = np.asarray(x, dtype=float)
    grad = np.empty_like(x)
    for k in range(x.size):
        h = rel_step * max(1.0, abs(x[k]))
        hi = x.copy()
        lo = x.copy()
        hi[k] += h
        lo[k] -= h
        grad[k] = (fn(hi) - fn(lo)) / (2.0 * h)
    return grad


def central_diff_1d(fn, v: float, rel_step: float = 1e-6) -> float:
    h = rel_step * max(1.0, abs(v))
    return (fn(v + h) - fn(v - h)) / (2.0 * h)
