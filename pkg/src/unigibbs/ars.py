"""Adaptive rejection sampling for log-concave univariate densities.

The envelope is the classic tangent construction: piecewise-linear upper
hull through tangents at the abscissae, chord-based lower hull used as a
squeeze.  All hull arithmetic is carried out in log space; segment masses
are stored as log-masses and combined with log-sum-exp so peaked
conditionals cannot overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from .core import (
    EnvelopeInitError,
    NonConvergenceError,
    NonLogConcaveError,
    RngStream,
)

__all__ = [
    "HullPoint",
    "Envelope",
    "ars_init",
    "envelope_sample",
    "envelope_update",
    "ars_draw",
]

SLOPE_TOL = 1e-9        # slack on slope ordering; absorbs gradient noise
PARALLEL_TOL = 1e-12    # adjacent tangents flatter than this are parallel
DUPLICATE_TOL = 1e-12   # inserts this close to an abscissa are ignored
MAX_HULL_POINTS = 100
MAX_DOUBLINGS = 60
MAX_REJECTIONS = 10_000


def _logsumexp(a: np.ndarray) -> float:
    m = float(np.max(a))
    if not math.isfinite(m):
        return m
    return m + math.log(float(np.sum(np.exp(a - m))))


@dataclass(frozen=True)
class HullPoint:
    """One envelope support point: abscissa, log-density, derivative."""

    x: float
    h: float
    hp: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.h) and math.isfinite(self.hp)):
            raise ValueError(
                f"hull point requires finite (x, h, hp), got ({self.x}, {self.h}, {self.hp})"
            )


@dataclass(frozen=True)
class Envelope:
    """Tangent upper hull and chord lower hull over sorted abscissae.

    ``z`` holds the tangent intersection abscissae (one between each pair
    of neighbors); segment ``j`` spans ``(z[j-1], z[j])`` with the domain
    bounds closing the two ends, and carries the tangent at point ``j``.
    """

    x: np.ndarray
    h: np.ndarray
    hp: np.ndarray
    lower: float
    upper: float
    z: np.ndarray
    log_seg_mass: np.ndarray

    @property
    def n_points(self) -> int:
        return self.x.size

    @cached_property
    def log_total_mass(self) -> float:
        return _logsumexp(self.log_seg_mass)

    @property
    def total_mass(self) -> float:
        return float(math.exp(self.log_total_mass))

    def segment_bounds(self, j: int) -> tuple[float, float]:
        a = self.lower if j == 0 else float(self.z[j - 1])
        b = self.upper if j == self.n_points - 1 else float(self.z[j])
        return a, b

    def upper_hull(self, v: float) -> float:
        """Value of the piecewise-linear upper hull at ``v``."""
        j = min(int(np.searchsorted(self.z, v, side="right")), self.n_points - 1)
        return float(self.h[j] + self.hp[j] * (v - self.x[j]))

    def lower_hull(self, v: float) -> float:
        """Chord value at ``v``; -inf outside the abscissa range."""
        xs = self.x
        if v < xs[0] or v > xs[-1]:
            return -math.inf
        i = int(np.searchsorted(xs, v, side="right")) - 1
        i = min(max(i, 0), xs.size - 2)
        x0, x1 = xs[i], xs[i + 1]
        return float(((x1 - v) * self.h[i] + (v - x0) * self.h[i + 1]) / (x1 - x0))

    def validate(self) -> None:
        """Check every structural invariant; raises ValueError on violation."""
        if not np.all(np.diff(self.x) > 0):
            raise ValueError("abscissae not strictly increasing")
        if np.any(np.diff(self.hp) > SLOPE_TOL):
            raise ValueError("slopes not non-increasing")
        if not (self.lower < self.x[0] and self.x[-1] < self.upper):
            raise ValueError("abscissae not strictly inside the bounds")
        if self.z.size != self.x.size - 1:
            raise ValueError("need exactly one intersection per neighbor pair")
        if self.z.size and not np.all(np.diff(self.z) > 0):
            raise ValueError("intersections not strictly increasing")
        for i in range(self.z.size):
            if not (self.x[i] <= self.z[i] <= self.x[i + 1]):
                raise ValueError("intersections do not interleave the abscissae")
        if np.any(np.isnan(self.log_seg_mass)) or np.any(self.log_seg_mass == math.inf):
            raise ValueError("segment masses must be finite")
        if not math.isfinite(self.log_total_mass):
            raise ValueError("total mass must be finite and positive")


def _log1mexp(d: float) -> float:
    """log(1 - exp(-d)) for d > 0, stable near both ends."""
    if d == math.inf:
        return 0.0
    if d > math.log(2.0):
        return math.log1p(-math.exp(-d))
    return math.log(-math.expm1(-d))


def _intersections(x: np.ndarray, h: np.ndarray, hp: np.ndarray) -> np.ndarray:
    """Abscissae where adjacent tangents cross, clamped to their span."""
    num = h[1:] - h[:-1] + x[:-1] * hp[:-1] - x[1:] * hp[1:]
    den = hp[:-1] - hp[1:]
    parallel = np.abs(den) < PARALLEL_TOL
    safe_den = np.where(parallel, 1.0, den)
    mid = 0.5 * (x[:-1] + x[1:])
    z = np.where(parallel, mid, num / safe_den)
    return np.clip(z, x[:-1], x[1:])


def _log_segment_masses(
    x: np.ndarray, h: np.ndarray, hp: np.ndarray, z: np.ndarray, lower: float, upper: float
) -> np.ndarray:
    n = x.size
    out = np.empty(n)
    for j in range(n):
        a = lower if j == 0 else z[j - 1]
        b = upper if j == n - 1 else z[j]
        s = hp[j]
        if abs(s) <= PARALLEL_TOL:
            if not (math.isfinite(a) and math.isfinite(b)):
                raise EnvelopeInitError(
                    "flat tangent over an unbounded segment has infinite mass"
                )
            out[j] = h[j] + (math.log(b - a) if b > a else -math.inf)
        elif s > 0.0:
            if b == math.inf:
                raise EnvelopeInitError(
                    "rising tangent over an unbounded right segment has infinite mass"
                )
            out[j] = h[j] + s * (b - x[j]) + _log1mexp(s * (b - a)) - math.log(s)
        else:
            if a == -math.inf:
                raise EnvelopeInitError(
                    "falling tangent over an unbounded left segment has infinite mass"
                )
            out[j] = h[j] + s * (a - x[j]) + _log1mexp(-s * (b - a)) - math.log(-s)
    return out


def _check_concavity(x: np.ndarray, h: np.ndarray, hp: np.ndarray) -> None:
    """Reject hulls a concave function could not have produced.

    Two witnesses: tangent slopes must be non-increasing, and each tangent
    must dominate the log-density at its neighboring abscissae.
    """
    if np.any(np.diff(hp) > SLOPE_TOL):
        raise NonLogConcaveError("tangent slopes increase; target is not log-concave")
    dx = np.diff(x)
    # tangent at the left point, evaluated at the right neighbor, and vice versa
    left_at_right = h[:-1] + hp[:-1] * dx
    right_at_left = h[1:] - hp[1:] * dx
    if np.any(left_at_right < h[1:] - SLOPE_TOL) or np.any(right_at_left < h[:-1] - SLOPE_TOL):
        raise NonLogConcaveError(
            "a tangent falls below the log-density; target is not log-concave"
        )


def _build_envelope(
    x: np.ndarray, h: np.ndarray, hp: np.ndarray, lower: float, upper: float
) -> Envelope:
    _check_concavity(x, h, hp)
    z = _intersections(x, h, hp)
    log_mass = _log_segment_masses(x, h, hp, z, lower, upper)
    return Envelope(x=x, h=h, hp=hp, lower=lower, upper=upper, z=z, log_seg_mass=log_mass)


def _eval_point(h: Callable, hp: Callable, v: float) -> tuple[float, float]:
    hv = float(h(v))
    hpv = float(hp(v))
    if not math.isfinite(hv) or not math.isfinite(hpv):
        raise EnvelopeInitError(
            f"log-density or derivative not finite at envelope point {v}"
        )
    return hv, hpv


def _auto_abscissae(center: float, lower: float, upper: float) -> list[float]:
    c = min(max(center, lower), upper)
    left = c - 1.0
    right = c + 1.0
    if left <= lower:
        left = lower + 0.5 * (c - lower)
    if right >= upper:
        right = upper - 0.5 * (upper - c)
    pts = sorted({left, c, right})
    return [p for p in pts if lower < p < upper]


def ars_init(
    h: Callable[[float], float],
    hp: Callable[[float], float],
    x_init,
    lower: float = -math.inf,
    upper: float = math.inf,
    center: float = 0.0,
) -> Envelope:
    """Build the initial envelope for ``exp(h)`` on ``(lower, upper)``.

    With explicit ``x_init`` the abscissae are used as given; when empty,
    three points around ``center`` seed the hull.  On an unbounded side
    the boundary slope must make the tail mass finite (positive slope on
    an infinite left, negative on an infinite right); when it does not,
    the offset from the outermost point is doubled up to 60 times until it
    does.
    """
    if not lower < upper:
        raise ValueError(f"requires lower < upper, got ({lower}, {upper})")
    xs = [float(v) for v in x_init] if x_init is not None else []
    if xs:
        for a, b in zip(xs, xs[1:]):
            if not a < b:
                raise ValueError("x_init must be strictly increasing")
        for v in xs:
            if not lower < v < upper:
                raise ValueError(f"x_init value {v} outside bounds ({lower}, {upper})")
    else:
        xs = _auto_abscissae(center, lower, upper)
        if not xs:
            raise EnvelopeInitError("could not place initial abscissae inside the bounds")

    pts = [(v, *_eval_point(h, hp, v)) for v in xs]

    if lower == -math.inf:
        anchor = pts[0][0]
        offset = 1.0
        doublings = 0
        while pts[0][2] <= PARALLEL_TOL:
            if doublings >= MAX_DOUBLINGS:
                raise EnvelopeInitError(
                    f"no positive slope found left of {anchor} after {MAX_DOUBLINGS} doublings"
                )
            probe = anchor - offset
            pts.insert(0, (probe, *_eval_point(h, hp, probe)))
            offset *= 2.0
            doublings += 1
    if upper == math.inf:
        anchor = pts[-1][0]
        offset = 1.0
        doublings = 0
        while pts[-1][2] >= -PARALLEL_TOL:
            if doublings >= MAX_DOUBLINGS:
                raise EnvelopeInitError(
                    f"no negative slope found right of {anchor} after {MAX_DOUBLINGS} doublings"
                )
            probe = anchor + offset
            pts.append((probe, *_eval_point(h, hp, probe)))
            offset *= 2.0
            doublings += 1

    arr = np.asarray(pts, dtype=float)
    return _build_envelope(arr[:, 0], arr[:, 1], arr[:, 2], float(lower), float(upper))


def envelope_sample(env: Envelope, rng: RngStream) -> tuple[float, float, float]:
    """Exact draw from the normalized upper-hull density.

    Returns ``(x, u_at_x, l_at_x)``: the sampled point, the upper-hull
    value there, and the lower-hull (chord) value there (-inf outside the
    abscissa range).  Consumes two uniforms: segment choice, then
    inverse-CDF position within the piecewise-exponential segment.
    """
    log_total = env.log_total_mass
    if not math.isfinite(log_total):
        raise OverflowError("envelope mass overflowed")
    weights = np.exp(env.log_seg_mass - log_total)
    cum = np.cumsum(weights)
    j = min(int(np.searchsorted(cum, rng.uniform(), side="right")), env.n_points - 1)

    a, b = env.segment_bounds(j)
    s = float(env.hp[j])
    r = 1.0 - rng.uniform()  # in (0, 1]; keeps the inverse CDF finite
    if abs(s) <= PARALLEL_TOL:
        v = a + r * (b - a)
    elif s > 0.0:
        v = b + math.log(r + (1.0 - r) * math.exp(-s * (b - a))) / s
    else:
        v = a + math.log(r + (1.0 - r) * math.exp(s * (b - a))) / s

    # measure-zero guard: keep the draw strictly inside the open domain
    if v <= env.lower:
        v = math.nextafter(env.lower, env.upper)
    elif v >= env.upper:
        v = math.nextafter(env.upper, env.lower)

    u_at = float(env.h[j] + s * (v - env.x[j]))
    return float(v), u_at, env.lower_hull(v)


def envelope_update(env: Envelope, point: HullPoint) -> Envelope:
    """Envelope with ``point`` inserted in sorted position.

    Inserts within ``DUPLICATE_TOL`` of an existing abscissa, or once the
    hull holds ``MAX_HULL_POINTS`` points, return the envelope unchanged.
    """
    if not env.lower < point.x < env.upper:
        raise ValueError(f"insert point {point.x} outside bounds ({env.lower}, {env.upper})")
    if env.n_points >= MAX_HULL_POINTS:
        return env
    i = int(np.searchsorted(env.x, point.x))
    if i > 0 and abs(point.x - env.x[i - 1]) < DUPLICATE_TOL:
        return env
    if i < env.n_points and abs(env.x[i] - point.x) < DUPLICATE_TOL:
        return env
    x = np.insert(env.x, i, point.x)
    h = np.insert(env.h, i, point.h)
    hp = np.insert(env.hp, i, point.hp)
    return _build_envelope(x, h, hp, env.lower, env.upper)


def ars_draw(
    h: Callable[[float], float],
    hp: Callable[[float], float],
    lower: float = -math.inf,
    upper: float = math.inf,
    x_init=(),
    rng: RngStream | None = None,
    center: float = 0.0,
) -> float:
    """One exact, independent draw from the density proportional to exp(h).

    Requires ``h`` log-concave on ``(lower, upper)`` with finite integral.
    Each proposal consumes three uniforms (segment, position, squeeze);
    rejected proposals refine the envelope before the next attempt.
    """
    if rng is None:
        raise ValueError("rng is required")
    env = ars_init(h, hp, x_init, lower, upper, center)
    for _ in range(MAX_REJECTIONS):
        v, u_at, l_at = envelope_sample(env, rng)
        w = rng.uniform()
        log_w = math.log(w) if w > 0.0 else -math.inf
        if log_w <= l_at - u_at:
            return v
        hv = float(h(v))
        # domination witness: hulls of a truly concave target bracket it
        tol = SLOPE_TOL * max(1.0, abs(hv), abs(u_at))
        if hv > u_at + tol:
            raise NonLogConcaveError(
                f"log-density exceeds the upper hull at {v}; target is not log-concave"
            )
        if l_at > hv + tol:
            raise NonLogConcaveError(
                f"lower hull exceeds the log-density at {v}; target is not log-concave"
            )
        if log_w <= hv - u_at:
            return v
        env = envelope_update(env, HullPoint(v, hv, float(hp(v))))
    raise NonConvergenceError(
        f"no acceptance after {MAX_REJECTIONS} proposals; is the target proper?"
    )
