"""Example posteriors: Bayesian logistic regression and heteroscedastic
linear regression, with simulators and an MLE oracle.

The logistic model has a Gaussian prior on each coefficient; the
heteroscedastic model bounds the per-observation residual variance by
``sigmamax**2`` through a logistic transform of a second linear predictor
and uses non-informative (ignored) priors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit, log_expit

from .core import NonConvergenceError, RngStream

__all__ = [
    "LogisticData",
    "logistic_log_posterior",
    "logistic_log_posterior_grad",
    "simulate_logistic_data",
    "logistic_mle",
    "HeteroData",
    "hetero_log_likelihood",
    "hetero_components",
    "hetero_conditional",
    "hetero_joint_log_likelihood",
    "hetero_pack",
    "hetero_unpack",
    "simulate_hetero_data",
]

LOG_2PI = math.log(2.0 * math.pi)

# fitted |log-odds| beyond this are treated as perfect separation; a fit
# this extreme would put some probabilities within 3e-7 of 0 or 1
_SEPARATION_BOUND = 15.0


def _as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise ValueError("X must be a non-empty 2-D array")
    return X


@dataclass(frozen=True)
class LogisticData:
    """Covariates, binary responses, and the Gaussian prior for the coefficients."""

    X: np.ndarray
    y: np.ndarray
    mu: float = 0.0
    sigma: float = 1.0e6

    def __post_init__(self):
        X = _as_matrix(self.X)
        y = np.asarray(self.y, dtype=float).reshape(-1)
        if y.size != X.shape[0]:
            raise ValueError(f"y has {y.size} rows but X has {X.shape[0]}")
        if not np.all((y == 0.0) | (y == 1.0)):
            raise ValueError("responses must be 0 or 1")
        if not self.sigma > 0.0:
            raise ValueError(f"prior sd must be positive, got {self.sigma}")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def n_obs(self) -> int:
        return self.X.shape[0]

    @property
    def n_coef(self) -> int:
        return self.X.shape[1]


def _check_coef(beta, n_coef: int) -> np.ndarray:
    beta = np.asarray(beta, dtype=float).reshape(-1)
    if beta.size != n_coef:
        raise ValueError(f"got {beta.size} coefficients for {n_coef} covariate columns")
    return beta


def logistic_log_posterior(beta, data: LogisticData) -> float:
    """Log posterior of the coefficients, up to an additive constant.

    Negative log-likelihood term per observation is
    ``(1 - y) * x'beta + log(1 + exp(-x'beta))``, computed overflow-safely,
    plus the Gaussian log-prior ``-(beta - mu)^2 / (2 sigma^2)`` per
    coefficient.
    """
    beta = _check_coef(beta, data.n_coef)
    xb = data.X @ beta
    loglik = -np.sum((1.0 - data.y) * xb + np.logaddexp(0.0, -xb))
    log_prior = -np.sum((beta - data.mu) ** 2) / (2.0 * data.sigma**2)
    return float(loglik + log_prior)


def logistic_log_posterior_grad(beta, data: LogisticData) -> np.ndarray:
    """Exact gradient of :func:`logistic_log_posterior`."""
    beta = _check_coef(beta, data.n_coef)
    xb = data.X @ beta
    resid = data.y - 1.0 + expit(-xb)
    return data.X.T @ resid - (beta - data.mu) / data.sigma**2


def simulate_logistic_data(n_obs: int, n_coef: int, rng: RngStream):
    """Simulated design, true coefficients, and Bernoulli responses.

    Covariates and coefficients are iid uniform on (-0.5, 0.5); responses
    are Bernoulli with logistic success probability.
    """
    if n_obs < 1 or n_coef < 1:
        raise ValueError("n_obs and n_coef must be >= 1")
    X = rng.uniform(-0.5, 0.5, size=(n_obs, n_coef))
    beta_true = rng.uniform(-0.5, 0.5, size=n_coef)
    y = (rng.uniform(size=n_obs) < expit(X @ beta_true)).astype(float)
    return X, beta_true, y


def logistic_mle(data: LogisticData, max_iter: int = 50, tol: float = 1e-8) -> np.ndarray:
    """Unpenalized maximum-likelihood coefficients via IRLS.

    Converged when the largest score component falls below ``tol``.
    Fitted log-odds beyond +/-15 in absolute value, or a singular
    information matrix, are reported as non-convergence (perfect
    separation or rank deficiency).
    """
    X, y = data.X, data.y
    beta = np.zeros(data.n_coef)
    for _ in range(max_iter):
        xb = X @ beta
        if np.max(np.abs(xb)) > _SEPARATION_BOUND:
            raise NonConvergenceError(
                "fitted log-odds diverged; data look separated or rank-deficient"
            )
        p = expit(xb)
        score = X.T @ (y - p)
        if np.max(np.abs(score)) < tol:
            return beta
        w = p * (1.0 - p)
        info = X.T @ (X * w[:, None])
        try:
            step = np.linalg.solve(info, score)
        except np.linalg.LinAlgError as err:
            raise NonConvergenceError(
                "singular information matrix (separation or rank deficiency)"
            ) from err
        beta = beta + step
    raise NonConvergenceError(f"IRLS did not converge in {max_iter} iterations")


@dataclass(frozen=True)
class HeteroData:
    """Covariates and real responses for the heteroscedastic regression.

    The joint sampler packs its coefficient vector as
    ``[beta (K), gamma (K), sigmamax]`` of length ``2K + 1``; see
    :func:`hetero_pack` / :func:`hetero_unpack`.
    """

    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        X = _as_matrix(self.X)
        y = np.asarray(self.y, dtype=float).reshape(-1)
        if y.size != X.shape[0]:
            raise ValueError(f"y has {y.size} rows but X has {X.shape[0]}")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def n_obs(self) -> int:
        return self.X.shape[0]

    @property
    def n_coef(self) -> int:
        return self.X.shape[1]


def _check_sigmamax(sigmamax: float) -> float:
    sigmamax = float(sigmamax)
    if not sigmamax > 0.0:
        raise ValueError(f"sigmamax must be positive, got {sigmamax}")
    return sigmamax


def hetero_log_likelihood(beta, gamma, sigmamax, X, y) -> float:
    """Gaussian log-likelihood with variance sigmamax^2 * logistic(x'gamma).

    Includes the -0.5*log(2*pi) constants, matching a direct sum of
    normal log-densities.
    """
    sigmamax = _check_sigmamax(sigmamax)
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    xg = X @ np.asarray(gamma, dtype=float)
    resid = y - X @ np.asarray(beta, dtype=float)
    n = y.size
    log_var = 2.0 * math.log(sigmamax) + log_expit(xg)
    var = sigmamax**2 * expit(xg)
    return float(-0.5 * n * LOG_2PI - 0.5 * np.sum(log_var) - 0.5 * np.sum(resid**2 / var))


def hetero_components(beta, gamma, sigmamax, X, y) -> tuple[float, float, float]:
    """The three additive terms of the expanded log-likelihood.

    ``c1`` depends on sigmamax only, ``c2`` on gamma only, and ``c3`` on
    all three blocks; their sum equals :func:`hetero_log_likelihood` plus
    the dropped ``(n/2) log(2 pi)`` constant.
    """
    sigmamax = _check_sigmamax(sigmamax)
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    xg = X @ np.asarray(gamma, dtype=float)
    resid = y - X @ np.asarray(beta, dtype=float)
    n = y.size
    c1 = -n * math.log(sigmamax)
    c2 = 0.5 * float(np.sum(np.logaddexp(0.0, -xg)))
    with np.errstate(over="ignore"):
        c3 = -float(np.sum(resid**2 * (1.0 + np.exp(-xg)))) / (2.0 * sigmamax**2)
    return float(c1), c2, c3


def hetero_conditional(block: str, beta, gamma, sigmamax, X, y) -> float:
    """Block conditional log-likelihood with constant terms dropped.

    ``block`` selects which terms survive: ``"beta"`` keeps only the
    weighted residual term, ``"gamma"`` adds the log-variance term, and
    ``"sigmamax"`` adds the scale term.  Each equals the full
    log-likelihood up to a constant in that block, so block-wise samplers
    target the same posterior.
    """
    sigmamax = _check_sigmamax(sigmamax)
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    xg = X @ np.asarray(gamma, dtype=float)
    resid = y - X @ np.asarray(beta, dtype=float)
    with np.errstate(over="ignore"):
        c3 = -float(np.sum(resid**2 * (1.0 + np.exp(-xg)))) / (2.0 * sigmamax**2)
    if block == "beta":
        return c3
    if block == "gamma":
        return 0.5 * float(np.sum(np.logaddexp(0.0, -xg))) + c3
    if block == "sigmamax":
        return -y.size * math.log(sigmamax) + c3
    raise ValueError(f"unknown block {block!r}; expected 'beta', 'gamma' or 'sigmamax'")


def hetero_pack(beta, gamma, sigmamax) -> np.ndarray:
    """Coefficient vector [beta, gamma, sigmamax] for the joint sampler."""
    return np.concatenate([np.asarray(beta, float).reshape(-1),
                           np.asarray(gamma, float).reshape(-1),
                           [float(sigmamax)]])


def hetero_unpack(coeff, n_coef: int):
    """Inverse of :func:`hetero_pack`."""
    coeff = np.asarray(coeff, dtype=float).reshape(-1)
    if coeff.size != 2 * n_coef + 1:
        raise ValueError(f"packed vector must have length {2 * n_coef + 1}, got {coeff.size}")
    return coeff[:n_coef], coeff[n_coef : 2 * n_coef], float(coeff[-1])


def hetero_joint_log_likelihood(coeff, data: HeteroData) -> float:
    """Joint log-likelihood over the packed [beta, gamma, sigmamax] vector."""
    beta, gamma, sigmamax = hetero_unpack(coeff, data.n_coef)
    return hetero_log_likelihood(beta, gamma, sigmamax, data.X, data.y)


def simulate_hetero_data(n_obs: int, n_coef: int, sigmamax: float, rng: RngStream):
    """Simulated design, true coefficient blocks, and noisy responses."""
    sigmamax = _check_sigmamax(sigmamax)
    if n_obs < 1 or n_coef < 1:
        raise ValueError("n_obs and n_coef must be >= 1")
    X = rng.uniform(-0.5, 0.5, size=(n_obs, n_coef))
    beta_true = rng.uniform(-0.5, 0.5, size=n_coef)
    gamma_true = rng.uniform(-0.5, 0.5, size=n_coef)
    sd = sigmamax * np.sqrt(expit(X @ gamma_true))
    y = rng.normal(X @ beta_true, sd)
    return X, beta_true, gamma_true, y
