"""Bayesian preference localization from paired comparisons.

Estimate a user's ideal point in [0, 1]^d from "do you prefer a or b?"
answers, actively choosing each query to cut the posterior where it is
widest.
"""

from .attributes import AnsweredQuery, Query, sample_uniform, squared_distance
from .model import (
    ChainDivergenceError,
    McmcConfig,
    PosteriorSamples,
    log_posterior_unnormalized,
    posterior_summary,
    query_likelihood,
    sample_posterior,
)
from .oracle import OracleConfig, Triplet, answer, fit_noise_constant, generate_triplets
from .selection import (
    QueryPlane,
    SelectionConfig,
    mcmv_utility,
    query_plane,
    select_best_of_n,
    select_closed_form,
    select_random,
)
from .session import (
    NoPendingQueryError,
    SessionState,
    create_session,
    current_estimate,
    from_snapshot,
    run_scripted,
    submit_answer,
    to_snapshot,
)

__version__ = "0.1.0"

__all__ = [
    "AnsweredQuery",
    "ChainDivergenceError",
    "McmcConfig",
    "NoPendingQueryError",
    "OracleConfig",
    "PosteriorSamples",
    "Query",
    "QueryPlane",
    "SelectionConfig",
    "SessionState",
    "Triplet",
    "answer",
    "create_session",
    "current_estimate",
    "fit_noise_constant",
    "from_snapshot",
    "generate_triplets",
    "log_posterior_unnormalized",
    "mcmv_utility",
    "posterior_summary",
    "query_likelihood",
    "query_plane",
    "run_scripted",
    "sample_posterior",
    "sample_uniform",
    "select_best_of_n",
    "select_closed_form",
    "select_random",
    "squared_distance",
    "submit_answer",
    "to_snapshot",
    "__version__",
]
