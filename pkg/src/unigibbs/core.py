"""Shared domain types: control parameters, random streams, and chains.

Evaluator conventions used throughout the package:

* A log-density evaluator is a plain callable ``f(x) -> float`` taking a
  1-D float array and returning the natural-log density up to an additive
  constant.  It must be deterministic and may return ``-inf`` (zero
  density) but never NaN for finite inputs inside its declared bounds.
* A gradient evaluator is a callable ``fg(x) -> ndarray`` returning the
  full gradient of the paired log-density at ``x``.

Fixed data (covariate matrices, responses) is bound into the callables by
the caller, e.g. via ``functools.partial`` or a closure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "LogDensity",
    "GradLogDensity",
    "SamplerError",
    "InvalidStartError",
    "NonConvergenceError",
    "NonLogConcaveError",
    "EnvelopeInitError",
    "Engine",
    "RngStream",
    "Chain",
    "ControlSpec",
    "make_control",
]

LogDensity = Callable[[np.ndarray], float]
GradLogDensity = Callable[[np.ndarray], np.ndarray]


class SamplerError(Exception):
    """Base class for sampling failures."""


class InvalidStartError(SamplerError):
    """The sampler was started at a point of zero density or out of bounds."""


class NonConvergenceError(SamplerError):
    """An internal iteration cap was exceeded; the target is likely pathological."""


class NonLogConcaveError(SamplerError):
    """A log-concavity requirement of the rejection sampler was violated."""


class EnvelopeInitError(SamplerError):
    """The rejection envelope could not be initialized with finite mass."""


class Engine(str, Enum):
    """Univariate engine applied to one coordinate."""

    SLICE = "slice"
    ARS = "ars"


_MAX_SEED = 2**64


class RngStream:
    """Seedable, reproducible random stream.

    Backed by numpy's PCG64 bit generator: the same seed yields a
    bit-identical sequence on every run with the same numpy build.
    ``uniform()`` draws lie in [0, 1); ``exponential()`` is derived from a
    single uniform as ``-log(1 - u)`` so stream accounting stays simple.
    """

    def __init__(self, seed: int):
        seed = int(seed)
        if not 0 <= seed < _MAX_SEED:
            raise ValueError(f"seed must be in [0, 2**64), got {seed}")
        self.seed = seed
        self._gen = np.random.Generator(np.random.PCG64(seed))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed})"

    def uniform(self, low: float = 0.0, high: float = 1.0, size=None):
        """Uniform draw(s) on [low, high); advances the stream."""
        r = self._gen.random() if size is None else self._gen.random(size)
        if low == 0.0 and high == 1.0:
            return r
        return low + (high - low) * r

    def exponential(self, size=None):
        """Exponential(1) draw(s) via inversion of one uniform each."""
        u = self.uniform(size=size)
        if size is None:
            return -math.log1p(-u)
        return -np.log1p(-u)

    def normal(self, loc=0.0, scale=1.0, size=None):
        """Gaussian draw(s) using the generator's ziggurat method.

        With ``size=None`` the output shape follows from broadcasting
        ``loc`` against ``scale``, one independent draw per element.
        """
        if size is None:
            shape = np.broadcast_shapes(np.shape(loc), np.shape(scale))
            size = shape if shape else None
        z = self._gen.standard_normal(size)
        return loc + scale * z


@dataclass(frozen=True)
class Chain:
    """Retained draws from a sampling run.

    Row ``i`` of ``draws`` is the full state after the i-th complete Gibbs
    cycle.  ``seed`` records the seed of the stream that produced the run.
    """

    draws: np.ndarray
    names: tuple[str, ...]
    seed: int

    def __post_init__(self):
        draws = np.asarray(self.draws, dtype=float)
        if draws.ndim != 2 or draws.shape[0] < 1 or draws.shape[1] < 1:
            raise ValueError("draws must be a non-empty 2-D array")
        if np.isnan(draws).any():
            raise ValueError("chain contains NaN entries")
        names = tuple(str(n) for n in self.names)
        if len(names) != draws.shape[1]:
            raise ValueError(
                f"got {len(names)} names for {draws.shape[1]} parameters"
            )
        object.__setattr__(self, "draws", draws)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def n_samples(self) -> int:
        return self.draws.shape[0]

    @property
    def n_dims(self) -> int:
        return self.draws.shape[1]


@dataclass(frozen=True)
class ControlSpec:
    """Per-coordinate tuning for the univariate engines.

    ``slice_w`` is the initial slice interval width, ``slice_m`` the
    stepout expansion limit (0 means unlimited), ``lower``/``upper`` the
    open domain bounds (infinities allowed), and ``ars_init`` the optional
    fixed abscissae used to seed the rejection envelope (empty tuple means
    auto-initialize around the current value).
    """

    n_dims: int
    engine: tuple[Engine, ...]
    slice_w: tuple[float, ...]
    slice_m: tuple[int, ...]
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    ars_init: tuple[tuple[float, ...], ...]

    def validate(self) -> None:
        """Re-check every invariant; raises ValueError on violation."""
        if self.n_dims < 1:
            raise ValueError("n_dims must be >= 1")
        for name in ("engine", "slice_w", "slice_m", "lower", "upper", "ars_init"):
            if len(getattr(self, name)) != self.n_dims:
                raise ValueError(f"{name} must have length {self.n_dims}")
        for k in range(self.n_dims):
            if not isinstance(self.engine[k], Engine):
                raise ValueError(f"engine[{k}] is not a valid Engine")
            w = self.slice_w[k]
            if not (w > 0.0) or math.isinf(w) or math.isnan(w):
                raise ValueError(f"slice_w[{k}] must be a positive finite real, got {w}")
            if self.slice_m[k] < 0:
                raise ValueError(f"slice_m[{k}] must be >= 0, got {self.slice_m[k]}")
            lo, hi = self.lower[k], self.upper[k]
            if math.isnan(lo) or math.isnan(hi) or not lo < hi:
                raise ValueError(f"bounds for coordinate {k} must satisfy lower < upper")
            init = self.ars_init[k]
            if len(init) > 10:
                raise ValueError(f"ars_init[{k}] has {len(init)} points; at most 10 allowed")
            for a, b in zip(init, init[1:]):
                if not a < b:
                    raise ValueError(f"ars_init[{k}] must be strictly increasing")
            for v in init:
                if not lo < v < hi:
                    raise ValueError(f"ars_init[{k}] value {v} outside bounds ({lo}, {hi})")


def _is_scalar(value) -> bool:
    if isinstance(value, (str, Engine)):
        return True
    if isinstance(value, np.ndarray):
        return value.ndim == 0
    return not isinstance(value, Sequence)


def _broadcast(value, n: int, name: str, conv) -> tuple:
    if _is_scalar(value):
        return (conv(value),) * n
    out = tuple(conv(v) for v in value)
    if len(out) != n:
        raise ValueError(f"{name} must have length {n}, got {len(out)}")
    return out


def _as_engine(value) -> Engine:
    if isinstance(value, Engine):
        return value
    try:
        return Engine(str(value).lower())
    except ValueError:
        raise ValueError(f"unknown engine {value!r}; expected 'slice' or 'ars'") from None


def _as_ars_init(value, n: int) -> tuple[tuple[float, ...], ...]:
    if value is None:
        return ((),) * n
    value = list(value) if not _is_scalar(value) else [float(value)]
    if not value:
        return ((),) * n
    if all(_is_scalar(v) for v in value):
        # one flat list of abscissae, shared by every coordinate
        shared = tuple(float(v) for v in value)
        return (shared,) * n
    out = tuple(tuple(float(x) for x in (v if v is not None else ())) for v in value)
    if len(out) != n:
        raise ValueError(f"ars_init must have length {n}, got {len(out)}")
    return out


def make_control(
    n_dims: int,
    *,
    engine="slice",
    slice_w=1.0,
    slice_m=0,
    lower=-math.inf,
    upper=math.inf,
    ars_init=(),
) -> ControlSpec:
    """Build and validate a fully populated ControlSpec.

    Scalar overrides broadcast to every coordinate; sequence overrides
    must have length ``n_dims``.  Defaults: slice engine, width 1.0,
    unlimited stepout, unbounded domain, auto-initialized envelopes.
    """
    if int(n_dims) != n_dims or n_dims < 1:
        raise ValueError("n_dims must be >= 1")
    n = int(n_dims)
    spec = ControlSpec(
        n_dims=n,
        engine=_broadcast(engine, n, "engine", _as_engine),
        slice_w=_broadcast(slice_w, n, "slice_w", float),
        slice_m=_broadcast(slice_m, n, "slice_m", int),
        lower=_broadcast(lower, n, "lower", float),
        upper=_broadcast(upper, n, "upper", float),
        ars_init=_as_ars_init(ars_init, n),
    )
    spec.validate()
    return spec
