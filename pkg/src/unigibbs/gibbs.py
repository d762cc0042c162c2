"""Coordinate-wise Gibbs driver over univariate Markov engines.

Each cycle visits the coordinates in ascending order and replaces
coordinate ``k`` with one univariate transition targeting its conditional
distribution.  The conditional is obtained from the joint log-density by
substitution: for fixed remaining coordinates the joint is proportional
to the conditional, so the joint log-density serves as the conditional up
to an additive constant.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial

import numpy as np

from .ars import ars_draw
from .core import (
    Chain,
    ControlSpec,
    Engine,
    GradLogDensity,
    LogDensity,
    RngStream,
    SamplerError,
)
from .slice_sampler import UnivariateTarget, slice_step

__all__ = ["GibbsState", "conditional_eval", "conditional_grad", "gibbs_cycle", "run_chain"]


@dataclass(frozen=True)
class GibbsState:
    """Current point of a Gibbs run plus the number of completed cycles."""

    x: np.ndarray
    cycle_count: int = 0

    def __post_init__(self):
        x = np.array(self.x, dtype=float, copy=True).reshape(-1)
        if x.size < 1:
            raise ValueError("state must have at least one coordinate")
        if np.isnan(x).any():
            raise ValueError("state contains NaN")
        object.__setattr__(self, "x", x)

    @property
    def n_dims(self) -> int:
        return self.x.size


def _check_index(k: int, n: int) -> None:
    if not 0 <= k < n:
        raise IndexError(f"coordinate index {k} out of range for {n} dimensions")


def conditional_eval(f: LogDensity, x: np.ndarray, k: int, xk: float) -> float:
    """Joint log-density with coordinate ``k`` replaced by ``xk``.

    Up to an additive constant this is the conditional log-density of
    coordinate ``k`` given the others.  The caller's ``x`` is not mutated.
    """
    x = np.asarray(x, dtype=float)
    _check_index(k, x.size)
    replaced = x.copy()
    replaced[k] = xk
    return float(f(replaced))


def conditional_grad(fg: GradLogDensity, x: np.ndarray, k: int, xk: float) -> float:
    """Derivative of the conditional log-density of coordinate ``k`` at ``xk``.

    Evaluates the full joint gradient at the replaced point and returns
    component ``k``.
    """
    x = np.asarray(x, dtype=float)
    _check_index(k, x.size)
    replaced = x.copy()
    replaced[k] = xk
    return float(np.asarray(fg(replaced))[k])


def gibbs_cycle(
    state: GibbsState,
    f: LogDensity,
    control: ControlSpec,
    rng: RngStream,
    fg: GradLogDensity | None = None,
) -> GibbsState:
    """One full Gibbs cycle: every coordinate updated once, in order.

    The value drawn for coordinate ``k`` is visible to the conditional of
    coordinate ``k + 1`` within the same cycle.  Engines are chosen per
    coordinate from ``control``; ARS coordinates require ``fg``.
    """
    if state.n_dims != control.n_dims:
        raise ValueError(
            f"state has {state.n_dims} dims but control was built for {control.n_dims}"
        )
    if fg is None and any(e is Engine.ARS for e in control.engine):
        raise ValueError("ARS coordinates require a gradient evaluator")

    x = state.x.copy()
    for k in range(control.n_dims):
        lo, hi = control.lower[k], control.upper[k]
        try:
            if control.engine[k] is Engine.SLICE:
                target = UnivariateTarget(partial(conditional_eval, f, x, k), lo, hi)
                x[k] = slice_step(target, x[k], control.slice_w[k], control.slice_m[k], rng)
            else:
                x[k] = ars_draw(
                    partial(conditional_eval, f, x, k),
                    partial(conditional_grad, fg, x, k),
                    lo,
                    hi,
                    control.ars_init[k],
                    rng,
                    center=x[k],
                )
        except SamplerError as err:
            raise type(err)(f"coordinate {k}: {err}") from err
    return GibbsState(x=x, cycle_count=state.cycle_count + 1)


def run_chain(
    x0,
    f: LogDensity,
    control: ControlSpec,
    n_samples: int,
    rng: RngStream,
    fg: GradLogDensity | None = None,
    names=None,
) -> Chain:
    """Run ``n_samples`` Gibbs cycles from ``x0`` and retain every state.

    Row ``i`` of the result is the state after cycle ``i``.  The run is a
    pure function of ``(x0, seed)``; errors abort the run (no partial
    chains).
    """
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    state = GibbsState(x=x0)
    if names is None:
        names = tuple(f"x{i + 1}" for i in range(state.n_dims))
    draws = np.empty((int(n_samples), state.n_dims))
    for i in range(int(n_samples)):
        state = gibbs_cycle(state, f, control, rng, fg=fg)
        draws[i] = state.x
    return Chain(draws=draws, names=tuple(names), seed=rng.seed)
