"""Attribute space primitives: bounded vectors, queries, and distance geometry.

The attribute space is the unit hypercube [0, 1]^d. All preference math in
this package is expressed through squared Euclidean distances between points
of that cube.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Below this squared separation a query pair is considered degenerate: its
# two members are indistinguishable and the answer carries no information.
DEGENERACY_TOL = 1e-12


def as_attribute_vector(values, dimension: int | None = None) -> np.ndarray:
    """Validate and return a point of [0, 1]^d as a float array.

    Raises ValueError for non-finite values, out-of-box coordinates, empty
    vectors, or a dimension mismatch against ``dimension``.
    """
    a = np.asarray(values, dtype=float)
    if a.ndim != 1 or a.size < 1:
        raise ValueError(f"attribute vector must be 1-D and non-empty, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("attribute vector has non-finite coordinates")
    if np.any(a < 0.0) or np.any(a > 1.0):
        raise ValueError(f"attribute vector outside [0, 1]^d: {a.tolist()}")
    if dimension is not None and a.size != dimension:
        raise ValueError(f"expected dimension {dimension}, got {a.size}")
    return a


def squared_distance(a, b) -> float:
    """Squared Euclidean distance between two attribute vectors."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    return float(diff @ diff)


def sample_uniform(dimension: int, count: int, seed) -> np.ndarray:
    """Draw ``count`` points uniformly from [0, 1]^d, shape (count, d).

    Deterministic for a given seed.
    """
    if dimension < 1:
        raise ValueError(f"dimension must be >= 1, got {dimension}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = np.random.default_rng(seed)
    return rng.random((count, dimension))


@dataclass(frozen=True, eq=False)
class Query:
    """An unanswered paired comparison: which of ``first``/``second`` is preferred?"""

    first: np.ndarray
    second: np.ndarray

    def __post_init__(self):
        first = as_attribute_vector(self.first)
        second = as_attribute_vector(self.second, dimension=first.size)
        if squared_distance(first, second) < DEGENERACY_TOL:
            raise ValueError("degenerate query: members coincide within tolerance")
        object.__setattr__(self, "first", first)
        object.__setattr__(self, "second", second)

    @property
    def dimension(self) -> int:
        return self.first.size


@dataclass(frozen=True, eq=False)
class AnsweredQuery:
    """A paired comparison with its outcome: ``preferred`` beat ``rejected``."""

    preferred: np.ndarray
    rejected: np.ndarray

    def __post_init__(self):
        preferred = as_attribute_vector(self.preferred)
        rejected = as_attribute_vector(self.rejected, dimension=preferred.size)
        object.__setattr__(self, "preferred", preferred)
        object.__setattr__(self, "rejected", rejected)

    @property
    def dimension(self) -> int:
        return self.preferred.size

    def to_jsonable(self) -> dict:
        return {"preferred": self.preferred.tolist(), "rejected": self.rejected.tolist()}

    @classmethod
    def from_jsonable(cls, payload: dict) -> "AnsweredQuery":
        return cls(preferred=payload["preferred"], rejected=payload["rejected"])
