"""Univariate slice sampling with stepout and shrinkage.

One call to :func:`slice_step` performs a single Markov transition whose
invariant distribution is proportional to ``exp(g)`` for the wrapped
log-density ``g``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .core import InvalidStartError, NonConvergenceError, RngStream

__all__ = ["UnivariateTarget", "slice_step", "MAX_STEPOUT", "MAX_SHRINK"]

# Caps that turn non-integrable or misbounded targets into diagnosable
# errors instead of hangs.
MAX_STEPOUT = 10_000
MAX_SHRINK = 10_000


@dataclass(frozen=True)
class UnivariateTarget:
    """Log-density of a single coordinate on an open interval.

    Calling the target clamps to the domain: points at or outside the
    bounds evaluate to ``-inf`` without invoking ``log_density``.
    """

    log_density: Callable[[float], float]
    lower: float = -math.inf
    upper: float = math.inf

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError(f"requires lower < upper, got ({self.lower}, {self.upper})")

    def __call__(self, x: float) -> float:
        if not (self.lower < x < self.upper):
            return -math.inf
        return float(self.log_density(x))


def slice_step(
    target: UnivariateTarget,
    x0: float,
    w: float,
    m: int,
    rng: RngStream,
) -> float:
    """One stepout-and-shrinkage slice transition from ``x0``.

    ``w`` is the initial interval width, ``m`` the stepout expansion limit
    (0 means unlimited).  The returned point ``x1`` satisfies
    ``g(x1) >= z`` for the slice level ``z`` drawn in this step, and lies
    strictly inside the target's bounds.

    Draw order, relied on by replay-based tests: one Exponential(1) for
    the slice level, one uniform to position the interval, one uniform to
    split the stepout budget when ``m > 0``, then one uniform per
    shrinkage proposal.
    """
    if w <= 0.0:
        raise ValueError(f"w must be positive, got {w}")
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    if not (target.lower < x0 < target.upper):
        raise InvalidStartError(
            f"start {x0} outside bounds ({target.lower}, {target.upper})"
        )
    g0 = target(x0)
    if math.isnan(g0) or g0 == -math.inf:
        raise InvalidStartError(f"zero density at start point {x0}")

    z = g0 - rng.exponential()

    u = rng.uniform()
    left = x0 - w * u
    right = left + w

    if m == 0:
        n_expand = 0
        while target(left) > z:
            left -= w
            n_expand += 1
            if n_expand >= MAX_STEPOUT:
                raise NonConvergenceError(
                    f"stepout did not terminate after {MAX_STEPOUT} left expansions"
                )
        n_expand = 0
        while target(right) > z:
            right += w
            n_expand += 1
            if n_expand >= MAX_STEPOUT:
                raise NonConvergenceError(
                    f"stepout did not terminate after {MAX_STEPOUT} right expansions"
                )
    else:
        j = int(math.floor(m * rng.uniform()))
        k = m - 1 - j
        while j > 0 and target(left) > z:
            left -= w
            j -= 1
        while k > 0 and target(right) > z:
            right += w
            k -= 1

    # Clamp before shrinking so shrinkage alone guarantees termination.
    left = max(left, target.lower)
    right = min(right, target.upper)

    for _ in range(MAX_SHRINK):
        x1 = left + rng.uniform() * (right - left)
        if target(x1) >= z:
            return float(x1)
        if x1 < x0:
            left = x1
        else:
            right = x1
    raise NonConvergenceError(
        f"shrinkage did not find an acceptable point in {MAX_SHRINK} iterations"
    )
