"""Command-line front end: demo workflows, CSV ingestion, chain export.

Exit codes are a stable contract for scripting: 0 on success, 2 on usage
errors, 3 on runtime sampler/model/data errors.  Console numbers are
rendered with fixed formats, so identical command lines print identical
output (the wall-clock ``time:`` line excepted) and write byte-identical
chain CSVs.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import dataclass
from functools import partial

import numpy as np

from .chain_io import read_csv_matrix, write_chain_csv
from .core import Chain, RngStream, SamplerError, make_control
from .diagnostics import Summary, summarize
from .gibbs import GibbsState, gibbs_cycle, run_chain
from .models import (
    HeteroData,
    LogisticData,
    hetero_conditional,
    hetero_joint_log_likelihood,
    logistic_log_posterior,
    logistic_log_posterior_grad,
    logistic_mle,
    simulate_hetero_data,
    simulate_logistic_data,
)

__all__ = ["main", "entry", "RunConfig"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RUNTIME = 3

DEMO_N_OBS = 1000
DEMO_N_COEF = 5
DEMO_SIGMAMAX = 0.75
SIGMAMAX_FLOOR = 1e-3
SIGMAMAX_START = 0.5


@dataclass(frozen=True)
class RunConfig:
    """Validated run options shared by every subcommand."""

    command: str
    n_samples: int = 100
    burnin: int | str = "half"
    seed: int = 0
    sampler: str = "slice"
    out_path: str | None = None
    data_path: str | None = None
    model: str | None = None


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _seed_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be in [0, 2**64)")
    return value


def _burnin_arg(text: str):
    if text == "half":
        return "half"
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected 'half' or a non-negative integer, got {text!r}"
        ) from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"burnin must be >= 0, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unigibbs",
        description="Sample multivariate log-densities with coordinate-wise "
        "univariate engines (slice, adaptive rejection).",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n-samples", type=_positive_int, default=100,
                        help="number of Gibbs cycles to retain (default 100)")
    common.add_argument("--seed", type=_seed_int, default=0,
                        help="random seed (default 0)")
    common.add_argument("--sampler", choices=("slice", "ars"), default="slice",
                        help="univariate engine (default slice)")
    common.add_argument("--burnin", type=_burnin_arg, default="half",
                        help="rows to discard before summaries: 'half' or an integer")
    common.add_argument("--out", metavar="PATH", default=None,
                        help="write the chain as CSV to PATH")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("demo-logistic", parents=[common],
                   help="simulated Bayesian logistic regression, posterior mean vs MLE")
    sub.add_parser("demo-hetero", parents=[common],
                   help="heteroscedastic regression, joint sampler over [beta, gamma, sigmamax]")
    sub.add_parser("demo-hetero-blocked", parents=[common],
                   help="heteroscedastic regression, three-block cycle with reduced conditionals")
    p_sample = sub.add_parser("sample", parents=[common],
                              help="sample a model posterior for a CSV data set")
    p_sample.add_argument("--data", required=True, metavar="PATH",
                          help="CSV with the response in the first column")
    p_sample.add_argument("--model", required=True, choices=("logistic", "hetero"))
    return parser


def _config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command,
        n_samples=ns.n_samples,
        burnin=ns.burnin,
        seed=ns.seed,
        sampler=ns.sampler,
        out_path=ns.out,
        data_path=getattr(ns, "data", None),
        model=getattr(ns, "model", None),
    )


def _validate_config(cfg: RunConfig) -> str | None:
    if cfg.burnin != "half" and cfg.burnin >= cfg.n_samples:
        return f"--burnin {cfg.burnin} must be smaller than --n-samples {cfg.n_samples}"
    gradless = cfg.command in ("demo-hetero", "demo-hetero-blocked") or cfg.model == "hetero"
    if cfg.sampler == "ars" and gradless:
        return "the ars engine needs gradients; the heteroscedastic model provides none"
    return None


def _print_table(out, headers: list[str], rows: list[list[str]]) -> None:
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(headers)]
    fmt = "  ".join(f"{{:>{w}}}" for w in widths)
    print(fmt.format(*headers), file=out)
    for row in rows:
        print(fmt.format(*row), file=out)


def _print_summary(summary: Summary, out) -> None:
    headers = ["param", "mean", "sd", "2.5%", "50%", "97.5%", "ess"]
    rows = [
        [
            summary.names[j],
            f"{summary.mean[j]:.6f}",
            f"{summary.sd[j]:.6f}",
            f"{summary.q025[j]:.6f}",
            f"{summary.median[j]:.6f}",
            f"{summary.q975[j]:.6f}",
            f"{summary.ess[j]:.1f}",
        ]
        for j in range(len(summary.names))
    ]
    _print_table(out, headers, rows)


def run_demo_logistic(cfg: RunConfig, out=None) -> Chain:
    """Simulate logistic data, sample the posterior, print MLE vs MCMC means."""
    out = out or sys.stdout
    rng = RngStream(cfg.seed)
    X, _beta_true, y = simulate_logistic_data(DEMO_N_OBS, DEMO_N_COEF, rng)
    data = LogisticData(X, y)
    f = partial(logistic_log_posterior, data=data)
    fg = partial(logistic_log_posterior_grad, data=data)
    control = make_control(DEMO_N_COEF, engine=cfg.sampler)
    names = tuple(f"beta{i + 1}" for i in range(DEMO_N_COEF))
    chain = run_chain(np.zeros(DEMO_N_COEF), f, control, cfg.n_samples, rng, fg=fg, names=names)
    mle = logistic_mle(data)
    summary = summarize(chain, cfg.burnin)
    rows = [
        [names[j], f"{mle[j]:.6f}", f"{summary.mean[j]:.6f}"]
        for j in range(DEMO_N_COEF)
    ]
    _print_table(out, ["param", "mle", "mcmc"], rows)
    if cfg.out_path:
        write_chain_csv(chain, cfg.out_path)
    return chain


def _hetero_names(n_coef: int) -> tuple[str, ...]:
    return tuple(
        [f"beta{i + 1}" for i in range(n_coef)]
        + [f"gamma{i + 1}" for i in range(n_coef)]
        + ["sigmamax"]
    )


def _print_hetero_report(summary: Summary, beta_true, gamma_true, sigmamax_true, out) -> None:
    n_coef = len(beta_true)
    truths = np.concatenate([beta_true, gamma_true])
    rows = [
        [summary.names[j], f"{truths[j]:.6f}", f"{summary.mean[j]:.6f}"]
        for j in range(2 * n_coef)
    ]
    _print_table(out, ["param", "true", "estimate"], rows)
    print(f"sigmamax: {sigmamax_true:.6f} {summary.mean[2 * n_coef]:.6f}", file=out)


def run_demo_hetero(cfg: RunConfig, blocked: bool, out=None) -> Chain:
    """Simulate heteroscedastic data and sample, jointly or in three blocks."""
    out = out or sys.stdout
    rng = RngStream(cfg.seed)
    X, beta_true, gamma_true, y = simulate_hetero_data(
        DEMO_N_OBS, DEMO_N_COEF, DEMO_SIGMAMAX, rng
    )
    names = _hetero_names(DEMO_N_COEF)
    t0 = time.perf_counter()
    if blocked:
        chain = _run_hetero_blocked(X, y, cfg.n_samples, rng)
    else:
        data = HeteroData(X, y)
        f = partial(hetero_joint_log_likelihood, data=data)
        n_dims = 2 * DEMO_N_COEF + 1
        control = make_control(
            n_dims, lower=[-math.inf] * (2 * DEMO_N_COEF) + [SIGMAMAX_FLOOR]
        )
        x0 = np.concatenate([np.zeros(2 * DEMO_N_COEF), [SIGMAMAX_START]])
        chain = run_chain(x0, f, control, cfg.n_samples, rng, names=names)
    elapsed = time.perf_counter() - t0
    print(f"time: {elapsed:.3f}", file=out)
    summary = summarize(chain, cfg.burnin)
    _print_hetero_report(summary, beta_true, gamma_true, DEMO_SIGMAMAX, out)
    if cfg.out_path:
        write_chain_csv(chain, cfg.out_path)
    return chain


def _run_hetero_blocked(X, y, n_samples: int, rng: RngStream) -> Chain:
    """Three sub-updates per cycle, each with its reduced conditional."""
    n_coef = X.shape[1]
    beta = np.zeros(n_coef)
    gamma = np.zeros(n_coef)
    smax = SIGMAMAX_START
    control_block = make_control(n_coef)
    control_smax = make_control(1, lower=SIGMAMAX_FLOOR)
    draws = np.empty((n_samples, 2 * n_coef + 1))
    for i in range(n_samples):
        f_beta = partial(_beta_cond, gamma=gamma, sigmamax=smax, X=X, y=y)
        beta = gibbs_cycle(GibbsState(beta), f_beta, control_block, rng).x
        f_gamma = partial(_gamma_cond, beta=beta, sigmamax=smax, X=X, y=y)
        gamma = gibbs_cycle(GibbsState(gamma), f_gamma, control_block, rng).x
        f_smax = partial(_smax_cond, beta=beta, gamma=gamma, X=X, y=y)
        smax = float(gibbs_cycle(GibbsState([smax]), f_smax, control_smax, rng).x[0])
        draws[i, :n_coef] = beta
        draws[i, n_coef : 2 * n_coef] = gamma
        draws[i, -1] = smax
    return Chain(draws=draws, names=_hetero_names(n_coef), seed=rng.seed)


def _beta_cond(b, gamma, sigmamax, X, y):
    return hetero_conditional("beta", b, gamma, sigmamax, X, y)


def _gamma_cond(g, beta, sigmamax, X, y):
    return hetero_conditional("gamma", beta, g, sigmamax, X, y)


def _smax_cond(s, beta, gamma, X, y):
    return hetero_conditional("sigmamax", beta, gamma, float(s[0]), X, y)


def run_sample(cfg: RunConfig, out=None) -> Chain:
    """Sample a named model posterior for an external CSV data set."""
    out = out or sys.stdout
    col_names, matrix = read_csv_matrix(cfg.data_path)
    if matrix.shape[1] < 2:
        raise ValueError("data must have a response column plus at least one covariate")
    y = matrix[:, 0]
    X = matrix[:, 1:]
    covariates = col_names[1:]
    rng = RngStream(cfg.seed)
    if cfg.model == "logistic":
        data = LogisticData(X, y)
        f = partial(logistic_log_posterior, data=data)
        fg = partial(logistic_log_posterior_grad, data=data)
        control = make_control(data.n_coef, engine=cfg.sampler)
        chain = run_chain(
            np.zeros(data.n_coef), f, control, cfg.n_samples, rng,
            fg=fg, names=tuple(covariates),
        )
    else:
        data = HeteroData(X, y)
        n_dims = 2 * data.n_coef + 1
        f = partial(hetero_joint_log_likelihood, data=data)
        control = make_control(
            n_dims, lower=[-math.inf] * (2 * data.n_coef) + [SIGMAMAX_FLOOR]
        )
        x0 = np.concatenate([np.zeros(2 * data.n_coef), [SIGMAMAX_START]])
        names = tuple(
            [f"beta_{c}" for c in covariates]
            + [f"gamma_{c}" for c in covariates]
            + ["sigmamax"]
        )
        chain = run_chain(x0, f, control, cfg.n_samples, rng, names=names)
    _print_summary(summarize(chain, cfg.burnin), out)
    if cfg.out_path:
        write_chain_csv(chain, cfg.out_path)
    return chain


def main(argv=None) -> int:
    """Parse arguments, dispatch, and map failures to exit codes."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    cfg = _config_from_args(ns)
    usage_problem = _validate_config(cfg)
    if usage_problem is not None:
        print(f"usage error: {usage_problem}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if cfg.command == "demo-logistic":
            run_demo_logistic(cfg)
        elif cfg.command == "demo-hetero":
            run_demo_hetero(cfg, blocked=False)
        elif cfg.command == "demo-hetero-blocked":
            run_demo_hetero(cfg, blocked=True)
        else:
            run_sample(cfg)
    except (SamplerError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
