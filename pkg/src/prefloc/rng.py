"""Seed derivation helpers.

Every stochastic component takes an explicit integer seed. Sub-streams (one
per trial, per chain, per query, ...) are derived by mixing the base seed
with integer context tags through a SeedSequence, so concurrent or reordered
execution cannot perturb results.
"""

from __future__ import annotations

import numpy as np


def derive_seed(base: int, *context: int) -> int:
    """Mix ``base`` with integer context tags into a fresh 64-bit seed."""
    state = np.random.SeedSequence([int(base), *[int(c) for c in context]])
    return int(state.generate_state(1, dtype=np.uint64)[0])


def derived_rng(base: int, *context: int) -> np.random.Generator:
    """Generator seeded from (base, context...); independent across contexts."""
    return np.random.default_rng(np.random.SeedSequence([int(base), *[int(c) for c in context]]))
