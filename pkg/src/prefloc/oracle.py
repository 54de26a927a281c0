"""Simulated responders and noise-constant calibration.

A simulated oracle holds a hidden ideal point and answers queries by noisy
squared-distance comparison: the margin |a* - second|^2 - |a* - first|^2 gets
one Gaussian perturbation per query, and the sign of the perturbed margin
decides the answer. The same rule labels triplet datasets, from which the
likelihood's signal-to-noise constant is fit by maximum likelihood.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .attributes import AnsweredQuery, Query, as_attribute_vector, squared_distance
from .rng import derived_rng

GOLDEN_RATIO = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class OracleConfig:
    """Hidden ideal point, response noise level, and seed of a simulated user."""

    ideal_point: np.ndarray
    noise_stddev: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "ideal_point", as_attribute_vector(self.ideal_point))
        if not math.isfinite(self.noise_stddev) or self.noise_stddev < 0:
            raise ValueError(f"noise_stddev must be finite and >= 0, got {self.noise_stddev}")

    @property
    def dimension(self) -> int:
        return self.ideal_point.size


@dataclass(frozen=True, eq=False)
class Triplet:
    """Anchor plus a (closer, farther) pair labeled by the noisy margin rule."""

    anchor: np.ndarray
    positive: np.ndarray
    negative: np.ndarray

    def __post_init__(self):
        anchor = as_attribute_vector(self.anchor)
        positive = as_attribute_vector(self.positive, dimension=anchor.size)
        negative = as_attribute_vector(self.negative, dimension=anchor.size)
        object.__setattr__(self, "anchor", anchor)
        object.__setattr__(self, "positive", positive)
        object.__setattr__(self, "negative", negative)


def answer(oracle: OracleConfig, query: Query, query_index: int = 0) -> AnsweredQuery:
    """Answer one query from the oracle's hidden ideal point.

    The margin |a* - second|^2 - |a* - first|^2 is perturbed by one draw from
    Normal(0, noise_stddev); ``first`` wins when the perturbed margin is >= 0
    (exact ties prefer ``first``). The noise draw comes from a stream derived
    from (seed, query_index), so concurrent trials stay reproducible, and it
    is attached to a fixed orientation of the pair, so presenting the same
    two points in either order yields the same winner.
    """
    if query.dimension != oracle.dimension:
        raise ValueError(f"query dimension {query.dimension} != oracle {oracle.dimension}")
    margin = squared_distance(oracle.ideal_point, query.second) - squared_distance(
        oracle.ideal_point, query.first
    )
    noise = 0.0
    if oracle.noise_stddev > 0:
        noise = float(derived_rng(oracle.seed, query_index).normal(0.0, oracle.noise_stddev))
        if tuple(query.second) < tuple(query.first):
            noise = -noise
    if margin + noise >= 0:
        return AnsweredQuery(preferred=query.first, rejected=query.second)
    return AnsweredQuery(preferred=query.second, rejected=query.first)


def generate_triplets(
    oracle_noise: float,
    count: int,
    dimension: int,
    seed: int,
) -> list[Triplet]:
    """Draw ``count`` uniform (anchor, candidate, candidate) triples and label them.

    Labeling uses the same noisy squared-margin rule as ``answer``: one
    Gaussian perturbation per triplet decides which candidate is positive.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if dimension < 1:
        raise ValueError(f"dimension must be >= 1, got {dimension}")
    if not math.isfinite(oracle_noise) or oracle_noise < 0:
        raise ValueError(f"oracle_noise must be finite and >= 0, got {oracle_noise}")

    rng = np.random.default_rng(seed)
    points = rng.random((count, 3, dimension))
    anchors, one, two = points[:, 0], points[:, 1], points[:, 2]
    noise = rng.normal(0.0, oracle_noise, size=count) if oracle_noise > 0 else np.zeros(count)

    margins = ((anchors - two) ** 2).sum(axis=1) - ((anchors - one) ** 2).sum(axis=1)
    one_wins = margins + noise >= 0
    triplets = []
    for i in range(count):
        pos, neg = (one[i], two[i]) if one_wins[i] else (two[i], one[i])
        triplets.append(Triplet(anchor=anchors[i], positive=pos, negative=neg))
    return triplets


def triplet_log_likelihood(triplets: list[Triplet], k: float) -> float:
    """Log likelihood of the observed labels under signal-to-noise ``k``."""
    margins = _triplet_margins(triplets)
    return float(-np.logaddexp(0.0, -k * margins).sum())


def fit_noise_constant(triplets: list[Triplet], k_min: float = 0.1, k_max: float = 1000.0) -> float:
    """Maximum-likelihood signal-to-noise constant over [k_min, k_max].

    The log likelihood is concave in k, so golden-section search converges to
    the global argmax; the result is clamped to the bracket (noiseless data
    pushes the optimum to k_max).
    """
    if not triplets:
        raise ValueError("cannot fit a noise constant from an empty triplet list")
    if not 0 < k_min < k_max:
        raise ValueError(f"need 0 < k_min < k_max, got [{k_min}, {k_max}]")

    margins = _triplet_margins(triplets)

    def objective(k: float) -> float:
        return float(-np.logaddexp(0.0, -k * margins).sum())

    low, high = k_min, k_max
    inner_low = high - GOLDEN_RATIO * (high - low)
    inner_high = low + GOLDEN_RATIO * (high - low)
    value_low, value_high = objective(inner_low), objective(inner_high)
    while (high - low) > 1e-4 * max(abs(low), abs(high), 1.0):
        if value_low < value_high:
            low, inner_low, value_low = inner_low, inner_high, value_high
            inner_high = low + GOLDEN_RATIO * (high - low)
            value_high = objective(inner_high)
        else:
            high, inner_high, value_high = inner_high, inner_low, value_low
            inner_low = high - GOLDEN_RATIO * (high - low)
            value_low = objective(inner_low)
    # Monotone objectives (noiseless data) legitimately clamp to a bracket
    # endpoint; pick whichever of the endpoints and the interior optimum wins.
    candidates = (k_min, (low + high) / 2.0, k_max)
    return float(max(candidates, key=objective))


def triplets_to_csv(triplets: list[Triplet], path) -> None:
    """Persist triplets with columns a_a0..,a_p0..,a_n0.. (one row per triplet)."""
    if not triplets:
        raise ValueError("no triplets to write")
    d = triplets[0].anchor.size
    header = [f"a_a{i}" for i in range(d)] + [f"a_p{i}" for i in range(d)] + [
        f"a_n{i}" for i in range(d)
    ]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for t in triplets:
            writer.writerow([*t.anchor.tolist(), *t.positive.tolist(), *t.negative.tolist()])


def triplets_from_csv(path) -> list[Triplet]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        d = len(header) // 3
        rows = [[float(x) for x in row] for row in reader]
    return [
        Triplet(anchor=row[:d], positive=row[d : 2 * d], negative=row[2 * d :]) for row in rows
    ]


def _triplet_margins(triplets: list[Triplet]) -> np.ndarray:
    anchors = np.stack([t.anchor for t in triplets])
    positives = np.stack([t.positive for t in triplets])
    negatives = np.stack([t.negative for t in triplets])
    return ((anchors - negatives) ** 2).sum(axis=1) - ((anchors - positives) ** 2).sum(axis=1)
