"""Query selection strategies: random, scored candidates, and closed form.

A candidate query (a_p, a_n) is judged by how much it would cut the current
posterior: the bisecting hyperplane has normal v = 2(a_p - a_n) and offset
tau = |a_p|^2 - |a_n|^2. The utility k * (v Sigma v^T) - lambda * |mean-to-
plane distance| rewards planes aligned with the posterior's widest direction
that pass through its mean. The closed-form strategy constructs the optimal
mean-cutting pair directly from the top covariance eigenvector instead of
scoring random candidates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .attributes import DEGENERACY_TOL, Query, squared_distance
from .model import EIGENVALUE_FLOOR, PosteriorSamples, validate_noise_constant

STRATEGIES = ("random", "best_of_n", "closed_form")


@dataclass(frozen=True)
class QueryPlane:
    """Hyperplane of points equidistant from a query's two members: v.a = tau."""

    normal: np.ndarray
    offset: float


@dataclass(frozen=True)
class SelectionConfig:
    """Which strategy picks the next query, and its knobs."""

    strategy: str = "closed_form"
    n_candidates: int = 500
    mean_cut_weight: float = 1.0      # lambda: weight of the mean-cut penalty
    spacing_stddevs: float = 4.0      # closed form: half-separation in posterior stddevs
    seed: int = 0

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        # A pool of one degenerates to plain random selection, which is still
        # a meaningful (if vacuous) argmax; zero candidates is an error.
        if self.strategy == "best_of_n" and self.n_candidates < 1:
            raise ValueError(f"n_candidates must be >= 1, got {self.n_candidates}")
        if not np.isfinite(self.mean_cut_weight) or self.mean_cut_weight < 0:
            raise ValueError("mean_cut_weight must be finite and >= 0")
        if self.spacing_stddevs <= 0:
            raise ValueError("spacing_stddevs must be > 0")

    def to_jsonable(self) -> dict:
        return {
            "strategy": self.strategy,
            "n_candidates": self.n_candidates,
            "mean_cut_weight": self.mean_cut_weight,
            "spacing_stddevs": self.spacing_stddevs,
            "seed": self.seed,
        }

    @classmethod
    def from_jsonable(cls, payload: dict) -> "SelectionConfig":
        return cls(**payload)


def query_plane(query: Query) -> QueryPlane:
    """Bisecting hyperplane of a query pair."""
    v = 2.0 * (query.first - query.second)
    tau = float((query.first**2).sum() - (query.second**2).sum())
    return QueryPlane(normal=v, offset=tau)


def mcmv_utility(
    query: Query,
    samples: PosteriorSamples,
    k: float,
    mean_cut_weight: float,
) -> float:
    """k * directional variance - lambda * |mean-to-plane distance|; higher is better.

    The variance term v Sigma v^T is quadratic in the plane normal, so wider
    pairs score higher; the mean-cut term uses the absolute point-plane
    distance so planes missing the mean on either side are penalized alike.
    """
    k = validate_noise_constant(k)
    plane = query_plane(query)
    v = plane.normal
    sigma_q = float(v @ samples.covariance @ v)
    mu_q = float(v @ samples.mean - plane.offset) / float(np.linalg.norm(v))
    return k * sigma_q - mean_cut_weight * abs(mu_q)


def select_random(dimension: int, seed) -> Query:
    """Uniform random pair from the box, redrawn until non-degenerate."""
    if dimension < 1:
        raise ValueError(f"dimension must be >= 1, got {dimension}")
    rng = np.random.default_rng(seed)
    while True:
        first = rng.random(dimension)
        second = rng.random(dimension)
        if squared_distance(first, second) >= DEGENERACY_TOL:
            return Query(first=first, second=second)


def select_best_of_n(samples: PosteriorSamples, cfg: SelectionConfig, k: float) -> Query:
    """Score ``n_candidates`` random pairs by utility, return the argmax.

    Ties break by draw order. Degenerate candidates are skipped; if every
    candidate degenerates (vanishing probability) falls back to a random
    query from the same seed.
    """
    if cfg.strategy != "best_of_n":
        raise ValueError(f"expected strategy 'best_of_n', got {cfg.strategy!r}")
    k = validate_noise_constant(k)
    rng = np.random.default_rng(cfg.seed)
    d = samples.dimension
    first = rng.random((cfg.n_candidates, d))
    second = rng.random((cfg.n_candidates, d))

    v = 2.0 * (first - second)
    separation = (v**2).sum(axis=1) / 4.0
    usable = separation >= DEGENERACY_TOL
    if not usable.any():
        return select_random(d, cfg.seed)

    tau = (first**2).sum(axis=1) - (second**2).sum(axis=1)
    sigma_q = np.einsum("ij,jk,ik->i", v, samples.covariance, v)
    mu_q = (v @ samples.mean - tau) / np.linalg.norm(v, axis=1)
    utility = k * sigma_q - cfg.mean_cut_weight * np.abs(mu_q)
    utility[~usable] = -np.inf
    best = int(np.argmax(utility))
    return Query(first=first[best], second=second[best])


def select_closed_form(samples: PosteriorSamples, cfg: SelectionConfig) -> Query:
    """Construct the mean-cut max-variance query directly from the posterior.

    Places the pair at mean +/- s*u where u is the top covariance eigenvector
    and s = spacing_stddevs * sqrt(top eigenvalue). If either point would
    leave the box, s shrinks symmetrically (preserving the midpoint, hence
    the exact mean cut). A collapsed posterior falls back to a short query
    along a random direction.
    """
    if cfg.strategy != "closed_form":
        raise ValueError(f"expected strategy 'closed_form', got {cfg.strategy!r}")
    mean = samples.mean
    eigenvalues, eigenvectors = np.linalg.eigh(samples.covariance)
    top = float(eigenvalues[-1])
    direction = eigenvectors[:, -1]

    if top < EIGENVALUE_FLOOR:
        rng = np.random.default_rng(cfg.seed)
        direction = rng.standard_normal(mean.size)
        direction /= np.linalg.norm(direction)
        spacing = 0.01
    else:
        spacing = cfg.spacing_stddevs * np.sqrt(top)

    # Fix the eigenvector's sign so the constructed pair does not depend on
    # the factorization's sign convention.
    pivot = int(np.argmax(np.abs(direction)))
    if direction[pivot] < 0:
        direction = -direction

    # The floor keeps the pair non-degenerate even when the mean hugs a
    # boundary; it can only bind in pathologically collapsed corners.
    spacing = max(min(spacing, _max_in_box_spacing(mean, direction)), 1e-5)
    first = np.clip(mean + spacing * direction, 0.0, 1.0)
    second = np.clip(mean - spacing * direction, 0.0, 1.0)
    return Query(first=first, second=second)


def _max_in_box_spacing(mean: np.ndarray, direction: np.ndarray) -> float:
    """Largest s with both mean +/- s*direction inside [0, 1]^d."""
    moving = np.abs(direction) > 0.0
    headroom = np.minimum(mean, 1.0 - mean)
    return float(np.min(headroom[moving] / np.abs(direction[moving])))
