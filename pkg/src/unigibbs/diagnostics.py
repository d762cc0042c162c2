"""Posterior summaries and convergence metrics.

Quantiles use linear interpolation between order statistics (type 7);
effective sample size uses Geyer's initial positive sequence rule on
summed adjacent autocorrelation pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Chain

__all__ = ["Summary", "summarize", "ess", "ks_stat"]


@dataclass(frozen=True)
class Summary:
    """Per-parameter posterior statistics over the retained rows."""

    names: tuple[str, ...]
    mean: np.ndarray
    sd: np.ndarray
    q025: np.ndarray
    median: np.ndarray
    q975: np.ndarray
    ess: np.ndarray
    burnin: int


def summarize(chain: Chain, burnin="half") -> Summary:
    """Statistics over rows ``burnin .. n_samples - 1`` of the chain.

    ``burnin="half"`` (the default) discards the first ``floor(n/2)``
    rows.  An explicit integer burn-in must be smaller than the number of
    samples.
    """
    n = chain.n_samples
    if isinstance(burnin, str):
        if burnin != "half":
            raise ValueError(f"burnin must be an integer or 'half', got {burnin!r}")
        b = n // 2
    else:
        b = int(burnin)
        if b < 0:
            raise ValueError(f"burnin must be >= 0, got {b}")
        if b >= n:
            raise ValueError(f"burnin {b} leaves no rows out of {n}")
    kept = chain.draws[b:]
    rows = kept.shape[0]
    mean = kept.mean(axis=0)
    sd = kept.std(axis=0, ddof=1) if rows >= 2 else np.zeros(chain.n_dims)
    q = np.quantile(kept, [0.025, 0.5, 0.975], axis=0, method="linear")
    if rows >= 10:
        ess_vals = np.array([ess(kept[:, j]) for j in range(chain.n_dims)])
    else:
        # too short to estimate autocorrelation; report the retained count
        ess_vals = np.full(chain.n_dims, float(rows))
    return Summary(
        names=chain.names,
        mean=mean,
        sd=sd,
        q025=q[0],
        median=q[1],
        q975=q[2],
        ess=ess_vals,
        burnin=b,
    )


def ess(series) -> float:
    """Effective sample size ``n / (1 + 2 sum of autocorrelations)``.

    The autocorrelation sum is truncated by Geyer's initial positive
    sequence rule: adjacent pairs ``rho[2m] + rho[2m+1]`` are accumulated
    while they stay positive.  The result is clamped to ``[1, n]``; a
    constant series returns ``n`` by convention.
    """
    x = np.asarray(series, dtype=float).reshape(-1)
    n = x.size
    if n < 10:
        raise ValueError(f"need at least 10 points, got {n}")
    if np.ptp(x) == 0.0:
        return float(n)
    xc = x - x.mean()
    m = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(xc, m)
    acov = np.fft.irfft(f * np.conj(f), m)[:n] / n
    rho = acov / acov[0]
    tau = -1.0
    any_pair = False
    for t in range(0, n - 1, 2):
        pair = rho[t] + rho[t + 1]
        if pair <= 0.0:
            break
        tau += 2.0 * pair
        any_pair = True
    if not any_pair or tau <= 0.0:
        return float(n)
    return float(min(max(n / tau, 1.0), n))


def ks_stat(samples, cdf) -> float:
    """Kolmogorov-Smirnov sup distance between samples and a CDF.

    ``cdf`` may be vectorized or scalar; it must be non-decreasing into
    [0, 1].  Uses the standard sorted-sample formula.
    """
    xs = np.sort(np.asarray(samples, dtype=float).reshape(-1))
    n = xs.size
    if n < 1:
        raise ValueError("need at least one sample")
    try:
        f = np.asarray(cdf(xs), dtype=float)
        if f.shape != xs.shape:
            raise ValueError
    except (TypeError, ValueError):
        f = np.array([float(cdf(v)) for v in xs])
    i = np.arange(n)
    d_plus = np.max((i + 1) / n - f)
    d_minus = np.max(f - i / n)
    return float(max(d_plus, d_minus))
