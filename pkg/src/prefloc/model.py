"""Preference likelihood, posterior, and MCMC sampling.

A user's choices are modeled with an ideal-point rule: the probability that
``preferred`` beats ``rejected`` given an ideal point ``a`` is

    sigmoid(k * (|a - rejected|^2 - |a - preferred|^2))

with a single signal-to-noise constant ``k``. The prior over ``a`` is uniform
on [0, 1]^d, so the unnormalized log posterior is the sum of per-answer log
likelihoods inside the box and -inf outside. Sampling uses random-walk
Metropolis with isotropic Gaussian proposals, rejecting proposals that leave
the box, with the proposal scale adapted during burn-in.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .attributes import AnsweredQuery

# Eigenvalues below this floor are clamped before taking log-determinants of
# posterior covariances, so a fully collapsed posterior stays finite.
EIGENVALUE_FLOOR = 1e-12

ADAPT_WINDOW = 100             # burn-in steps between proposal-scale updates
ADAPT_BAND = 0.05              # dead zone around the target acceptance rate
MIN_ACCEPTANCE = 0.01          # below this after adaptation a chain has failed


class ChainDivergenceError(RuntimeError):
    """A chain's post-adaptation acceptance rate collapsed."""

    def __init__(self, acceptance_rates, scales):
        self.acceptance_rates = list(acceptance_rates)
        self.scales = list(scales)
        rates = ", ".join(f"{r:.4f}" for r in self.acceptance_rates)
        super().__init__(f"MCMC chain failure: per-chain acceptance rates [{rates}]")


def validate_noise_constant(k: float) -> float:
    """Return ``k`` if it is a valid signal-to-noise constant (finite, > 0)."""
    k = float(k)
    if not math.isfinite(k) or k <= 0.0:
        raise ValueError(f"noise constant must be finite and > 0, got {k}")
    return k


@dataclass(frozen=True)
class McmcConfig:
    """Random-walk Metropolis settings.

    ``keep`` draws per chain are pooled after ``burn_in`` adaptation steps.
    Chain ``i`` owns the RNG stream seeded ``seed + i``, so results are
    independent of chain scheduling.
    """

    chains: int = 4
    burn_in: int = 1000
    keep: int = 1000
    initial_proposal_scale: float = 0.2
    target_acceptance: float = 0.3
    seed: int = 0

    def __post_init__(self):
        if self.chains < 1:
            raise ValueError(f"chains must be >= 1, got {self.chains}")
        if self.keep < 100:
            raise ValueError(f"keep must be >= 100, got {self.keep}")
        if self.burn_in < 0:
            raise ValueError(f"burn_in must be >= 0, got {self.burn_in}")
        if not 0.0 < self.initial_proposal_scale < math.inf:
            raise ValueError("initial_proposal_scale must be positive and finite")
        if not 0.0 < self.target_acceptance < 1.0:
            raise ValueError("target_acceptance must lie in (0, 1)")

    def to_jsonable(self) -> dict:
        return {
            "chains": self.chains,
            "burn_in": self.burn_in,
            "keep": self.keep,
            "initial_proposal_scale": self.initial_proposal_scale,
            "target_acceptance": self.target_acceptance,
            "seed": self.seed,
        }

    @classmethod
    def from_jsonable(cls, payload: dict) -> "McmcConfig":
        return cls(**payload)


@dataclass(frozen=True, eq=False)
class PosteriorSamples:
    """Pooled posterior draws with summary statistics."""

    draws: np.ndarray            # (n_draws, d), all inside [0, 1]^d
    mean: np.ndarray             # (d,)
    covariance: np.ndarray       # (d, d), unbiased sample covariance
    acceptance_rate: float

    @classmethod
    def from_draws(cls, draws: np.ndarray, acceptance_rate: float) -> "PosteriorSamples":
        draws = np.asarray(draws, dtype=float)
        if draws.ndim != 2 or draws.shape[0] < draws.shape[1] + 1:
            raise ValueError(
                f"need at least d+1 draws of shape (n, d), got shape {draws.shape}"
            )
        mean, cov, _ = _summarize(draws)
        return cls(draws=draws, mean=mean, covariance=cov, acceptance_rate=float(acceptance_rate))

    @property
    def dimension(self) -> int:
        return self.draws.shape[1]

    @property
    def log_det_covariance(self) -> float:
        return _log_det(self.covariance)

    def to_jsonable(self, stride: int = 1) -> dict:
        """JSON form with draws down-sampled by ``stride`` (every stride-th row)."""
        if stride < 1:
            raise ValueError(f"stride must be >= 1, got {stride}")
        return {
            "draws": self.draws[::stride].tolist(),
            "mean": self.mean.tolist(),
            "covariance": self.covariance.tolist(),
            "acceptance_rate": self.acceptance_rate,
            "stride": stride,
            "n_total_draws": int(self.draws.shape[0]),
        }

    def draws_to_csv(self, path) -> None:
        """Persist the full draw matrix, one row per draw."""
        d = self.dimension
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([f"a{i}" for i in range(d)])
            writer.writerows(self.draws.tolist())


def query_likelihood(a, query: AnsweredQuery, k: float) -> float:
    """Probability of the observed answer under ideal point ``a``.

    Equals 0.5 when ``a`` is equidistant from the two members and approaches 1
    as ``a`` nears the preferred member. Always strictly inside (0, 1).
    """
    k = validate_noise_constant(k)
    a = np.asarray(a, dtype=float)
    if a.shape != query.preferred.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {query.preferred.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("non-finite ideal point")
    margin = _margin(a, query)
    p = _sigmoid(k * margin)
    return float(np.clip(p, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0)))


def log_posterior_unnormalized(a, queries: list[AnsweredQuery], k: float) -> float:
    """Sum of log answer likelihoods at ``a``; -inf outside the unit box."""
    k = validate_noise_constant(k)
    a = np.asarray(a, dtype=float)
    if np.any(a < 0.0) or np.any(a > 1.0):
        return -math.inf
    w, b = _linear_terms(queries, a.size, k)
    scores = w @ a + b
    return float(-np.logaddexp(0.0, -scores).sum())


def sample_posterior(
    dimension: int,
    queries: list[AnsweredQuery],
    k: float,
    cfg: McmcConfig,
) -> PosteriorSamples:
    """Sample the posterior over [0, 1]^dimension given answered queries.

    Runs ``cfg.chains`` random-walk Metropolis chains. Each chain starts at an
    independent uniform point, adapts its proposal scale toward the target
    acceptance rate during burn-in, then freezes and records ``cfg.keep``
    draws. Proposals outside the box are rejected. Deterministic in
    ``cfg.seed``; raises ChainDivergenceError if any chain's frozen acceptance
    rate falls below 1%.
    """
    if dimension < 1:
        raise ValueError(f"dimension must be >= 1, got {dimension}")
    k = validate_noise_constant(k)
    for q in queries:
        if q.dimension != dimension:
            raise ValueError(f"query dimension {q.dimension} != {dimension}")

    w, b = _linear_terms(queries, dimension, k)

    def logpost(points: np.ndarray) -> np.ndarray:
        in_box = ((points >= 0.0) & (points <= 1.0)).all(axis=1)
        scores = points @ w.T + b
        values = -np.logaddexp(0.0, -scores).sum(axis=1)
        return np.where(in_box, values, -np.inf)

    chains = cfg.chains
    steps = cfg.burn_in + cfg.keep
    rngs = [np.random.default_rng(cfg.seed + c) for c in range(chains)]
    # Fixed per-chain draw order (init, normals, uniforms) keeps each chain's
    # stream schedule-invariant.
    position = np.stack([rng.random(dimension) for rng in rngs])
    noise = np.stack([rng.standard_normal((steps, dimension)) for rng in rngs])
    accept_u = np.stack([rng.random(steps) for rng in rngs])

    scale = np.full(chains, cfg.initial_proposal_scale)
    log_p = logpost(position)
    kept = np.empty((chains, cfg.keep, dimension))
    window_accepts = np.zeros(chains)
    frozen_accepts = np.zeros(chains)

    with np.errstate(divide="ignore"):
        log_accept_u = np.log(accept_u)

    for step in range(steps):
        proposal = position + scale[:, None] * noise[:, step, :]
        log_p_prop = logpost(proposal)
        accepted = log_accept_u[:, step] < log_p_prop - log_p
        position = np.where(accepted[:, None], proposal, position)
        log_p = np.where(accepted, log_p_prop, log_p)

        if step < cfg.burn_in:
            window_accepts += accepted
            if (step + 1) % ADAPT_WINDOW == 0:
                rate = window_accepts / ADAPT_WINDOW
                # Near-zero windows shrink hard so the scale can traverse
                # orders of magnitude within a standard burn-in; otherwise
                # nudge by +/-10% toward the target band.
                scale = np.where(
                    rate < 0.02,
                    scale * 0.5,
                    np.where(
                        rate > cfg.target_acceptance + ADAPT_BAND,
                        scale * 1.1,
                        np.where(rate < cfg.target_acceptance - ADAPT_BAND, scale * 0.9, scale),
                    ),
                )
                window_accepts[:] = 0.0
        else:
            frozen_accepts += accepted
            kept[:, step - cfg.burn_in, :] = position

    rates = frozen_accepts / cfg.keep
    if np.any(rates < MIN_ACCEPTANCE):
        raise ChainDivergenceError(rates, scale)

    draws = kept.reshape(chains * cfg.keep, dimension)
    return PosteriorSamples.from_draws(draws, acceptance_rate=float(rates.mean()))


def posterior_summary(samples: PosteriorSamples):
    """(mean, covariance, log-det covariance) of a posterior sample set.

    The covariance is the unbiased sample covariance; its log-determinant is
    computed from eigenvalues clamped at 1e-12 so degenerate clouds stay
    finite.
    """
    return _summarize(samples.draws)


def _summarize(draws: np.ndarray):
    draws = np.asarray(draws, dtype=float)
    n, d = draws.shape
    if n < d + 1:
        raise ValueError(f"need at least d+1={d + 1} draws for a full-rank covariance, got {n}")
    mean = draws.mean(axis=0)
    centered = draws - mean
    cov = (centered.T @ centered) / (n - 1)
    cov = (cov + cov.T) / 2.0
    return mean, cov, _log_det(cov)


def _log_det(cov: np.ndarray) -> float:
    eigenvalues = np.linalg.eigvalsh(np.asarray(cov, dtype=float))
    return float(np.log(np.clip(eigenvalues, EIGENVALUE_FLOOR, None)).sum())


def _margin(a: np.ndarray, query: AnsweredQuery) -> float:
    """|a - rejected|^2 - |a - preferred|^2, the answer's evidence margin."""
    dn = a - query.rejected
    dp = a - query.preferred
    return float(dn @ dn - dp @ dp)


def _linear_terms(queries: list[AnsweredQuery], dimension: int, k: float):
    """Coefficients (w, b) with k * margin_j(a) == w[j] @ a + b[j].

    The margin difference of squared norms is linear in ``a``, which lets the
    sampler score whole batches of points with one matrix product.
    """
    if not queries:
        return np.zeros((0, dimension)), np.zeros(0)
    preferred = np.stack([q.preferred for q in queries])
    rejected = np.stack([q.rejected for q in queries])
    w = 2.0 * k * (preferred - rejected)
    b = k * ((rejected**2).sum(axis=1) - (preferred**2).sum(axis=1))
    return w, b


def _sigmoid(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)
