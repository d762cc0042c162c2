"""Multivariate MCMC via univariate engines applied one coordinate at a time.

The package couples two univariate engines (slice sampling with stepout
and shrinkage; adaptive rejection sampling for log-concave conditionals
with gradients) to a Gibbs driver that needs nothing from a model beyond
its joint log-density, plus example regression posteriors, posterior
diagnostics, and a CLI.
"""

from .ars import Envelope, HullPoint, ars_draw, ars_init, envelope_sample, envelope_update
from .chain_io import read_csv_matrix, write_chain_csv
from .core import (
    Chain,
    ControlSpec,
    Engine,
    EnvelopeInitError,
    GradLogDensity,
    InvalidStartError,
    LogDensity,
    NonConvergenceError,
    NonLogConcaveError,
    RngStream,
    SamplerError,
    make_control,
)
from .diagnostics import Summary, ess, ks_stat, summarize
from .gibbs import GibbsState, conditional_eval, conditional_grad, gibbs_cycle, run_chain
from .models import (
    HeteroData,
    LogisticData,
    hetero_components,
    hetero_conditional,
    hetero_joint_log_likelihood,
    hetero_log_likelihood,
    hetero_pack,
    hetero_unpack,
    logistic_log_posterior,
    logistic_log_posterior_grad,
    logistic_mle,
    simulate_hetero_data,
    simulate_logistic_data,
)
from .slice_sampler import UnivariateTarget, slice_step

__version__ = "0.1.0"

__all__ = [
    "Chain",
    "ControlSpec",
    "Engine",
    "Envelope",
    "EnvelopeInitError",
    "GibbsState",
    "GradLogDensity",
    "HeteroData",
    "HullPoint",
    "InvalidStartError",
    "LogDensity",
    "LogisticData",
    "NonConvergenceError",
    "NonLogConcaveError",
    "RngStream",
    "SamplerError",
    "Summary",
    "UnivariateTarget",
    "ars_draw",
    "ars_init",
    "conditional_eval",
    "conditional_grad",
    "envelope_sample",
    "envelope_update",
    "ess",
    "gibbs_cycle",
    "hetero_components",
    "hetero_conditional",
    "hetero_joint_log_likelihood",
    "hetero_log_likelihood",
    "hetero_pack",
    "hetero_unpack",
    "ks_stat",
    "logistic_log_posterior",
    "logistic_log_posterior_grad",
    "logistic_mle",
    "make_control",
    "read_csv_matrix",
    "run_chain",
    "simulate_hetero_data",
    "simulate_logistic_data",
    "slice_step",
    "summarize",
    "write_chain_csv",
]
