"""Shared test fixtures and independent numerical oracles.

The helpers here deliberately re-derive the math from scratch (direct
sigmoid/integration arithmetic) rather than calling package internals, so
they stay valid as checks on the implementation.
"""

import numpy as np
import pytest

from prefloc.model import McmcConfig, PosteriorSamples


def grid_posterior_mean(answered_pairs, k, n=200):
    """Posterior mean on [0,1]^2 by direct integration over an n x n grid.

    ``answered_pairs`` is a list of (preferred, rejected) coordinate tuples.
    Uses cell-center quadrature with its own likelihood arithmetic.
    """
    centers = (np.arange(n) + 0.5) / n
    gx, gy = np.meshgrid(centers, centers, indexing="ij")
    points = np.stack([gx.ravel(), gy.ravel()], axis=1)
    log_w = np.zeros(len(points))
    for preferred, rejected in answered_pairs:
        preferred = np.asarray(preferred, dtype=float)
        rejected = np.asarray(rejected, dtype=float)
        margin = ((points - rejected) ** 2).sum(axis=1) - ((points - preferred) ** 2).sum(axis=1)
        log_w += -np.logaddexp(0.0, -k * margin)
    weights = np.exp(log_w - log_w.max())
    weights /= weights.sum()
    return weights @ points


def make_posterior(mean, covariance, n_draws=64, seed=0):
    """PosteriorSamples with prescribed summary statistics (for selection tests)."""
    mean = np.asarray(mean, dtype=float)
    covariance = np.asarray(covariance, dtype=float)
    draws = np.clip(
        np.random.default_rng(seed).multivariate_normal(mean, covariance, size=n_draws),
        0.0,
        1.0,
    )
    return PosteriorSamples(
        draws=draws, mean=mean, covariance=covariance, acceptance_rate=0.3
    )


@pytest.fixture
def small_mcmc():
    """Cheap sampler settings for unit tests (still >= 100 kept draws)."""
    return McmcConfig(chains=2, burn_in=400, keep=300, seed=11)
