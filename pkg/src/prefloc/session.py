"""Interactive preference-localization sessions.

A session runs the select -> answer -> update loop: it always holds at most
one pending query, appends each answer to an immutable history, and fully
recomputes the posterior from that history after every answer. Because the
posterior is recomputed from scratch with fixed seeds, a session snapshot
(configs + answered queries) is sufficient to rebuild the exact state.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, replace
from datetime import datetime, timezone

import numpy as np

from .attributes import AnsweredQuery, Query
from .model import McmcConfig, PosteriorSamples, sample_posterior, validate_noise_constant
from .oracle import OracleConfig, answer
from .rng import derive_seed
from .selection import (
    SelectionConfig,
    select_best_of_n,
    select_closed_form,
    select_random,
)

CHOICES = ("first", "second")


class NoPendingQueryError(RuntimeError):
    """An answer was submitted while no query was pending."""


@dataclass(frozen=True, eq=False)
class SessionState:
    """Immutable snapshot of one elicitation session."""

    id: str
    dimension: int
    answered: tuple[AnsweredQuery, ...]
    pending: Query | None
    selection: SelectionConfig
    k: float
    mcmc: McmcConfig
    posterior: PosteriorSamples
    created_at: str
    updated_at: str

    @property
    def n_answered(self) -> int:
        return len(self.answered)


def create_session(
    dimension: int,
    selection: SelectionConfig,
    k: float,
    mcmc: McmcConfig,
    session_id: str | None = None,
) -> SessionState:
    """Start a session: prior posterior plus an immediately selected first query."""
    if dimension < 1:
        raise ValueError(f"dimension must be >= 1, got {dimension}")
    k = validate_noise_constant(k)
    posterior = sample_posterior(dimension, [], k, mcmc)
    pending = _select_next(dimension, posterior, selection, k, step=0)
    now = _utcnow()
    return SessionState(
        id=session_id or uuid.uuid4().hex,
        dimension=dimension,
        answered=(),
        pending=pending,
        selection=selection,
        k=k,
        mcmc=mcmc,
        posterior=posterior,
        created_at=now,
        updated_at=now,
    )


def submit_answer(state: SessionState, choice: str) -> SessionState:
    """Fold the pending query's answer into the session.

    Appends the answered query, recomputes the posterior over the full
    history, and selects the next pending query. Returns the new state; the
    input state is untouched.
    """
    if state.pending is None:
        raise NoPendingQueryError(f"session {state.id} has no pending query")
    if choice not in CHOICES:
        raise ValueError(f"choice must be one of {CHOICES}, got {choice!r}")
    q = state.pending
    if choice == "first":
        answered_query = AnsweredQuery(preferred=q.first, rejected=q.second)
    else:
        answered_query = AnsweredQuery(preferred=q.second, rejected=q.first)

    answered = state.answered + (answered_query,)
    posterior = sample_posterior(state.dimension, list(answered), state.k, state.mcmc)
    pending = _select_next(state.dimension, posterior, state.selection, state.k, step=len(answered))
    return replace(
        state,
        answered=answered,
        pending=pending,
        posterior=posterior,
        updated_at=_utcnow(),
    )


def current_estimate(state: SessionState):
    """(posterior mean, posterior covariance, number of answered queries)."""
    return state.posterior.mean, state.posterior.covariance, state.n_answered


def run_scripted(state: SessionState, oracle: OracleConfig, n_queries: int) -> SessionState:
    """Let a simulated oracle answer the next ``n_queries`` pending queries.

    Equivalent to the same number of manual submit_answer calls fed by the
    oracle; the oracle noise stream is indexed by the answered count.
    """
    if n_queries < 1:
        raise ValueError(f"n_queries must be >= 1, got {n_queries}")
    for _ in range(n_queries):
        if state.pending is None:
            raise NoPendingQueryError(f"session {state.id} has no pending query")
        answered = answer(oracle, state.pending, query_index=state.n_answered)
        choice = "first" if np.array_equal(answered.preferred, state.pending.first) else "second"
        state = submit_answer(state, choice)
    return state


def to_snapshot(state: SessionState) -> dict:
    """JSON-ready snapshot sufficient to rebuild the session exactly."""
    return {
        "id": state.id,
        "dimension": state.dimension,
        "k_q": state.k,
        "selection": state.selection.to_jsonable(),
        "mcmc": state.mcmc.to_jsonable(),
        "answered": [a.to_jsonable() for a in state.answered],
        "pending": (
            {"first": state.pending.first.tolist(), "second": state.pending.second.tolist()}
            if state.pending is not None
            else None
        ),
        "created_at": state.created_at,
        "updated_at": state.updated_at,
    }


def from_snapshot(payload: dict) -> SessionState:
    """Rebuild a session from its snapshot, recomputing the posterior."""
    dimension = int(payload["dimension"])
    k = validate_noise_constant(payload["k_q"])
    selection = SelectionConfig.from_jsonable(payload["selection"])
    mcmc = McmcConfig.from_jsonable(payload["mcmc"])
    answered = tuple(AnsweredQuery.from_jsonable(a) for a in payload["answered"])
    posterior = sample_posterior(dimension, list(answered), k, mcmc)
    pending = None
    if payload.get("pending") is not None:
        pending = Query(first=payload["pending"]["first"], second=payload["pending"]["second"])
    now = _utcnow()
    return SessionState(
        id=payload["id"],
        dimension=dimension,
        answered=answered,
        pending=pending,
        selection=selection,
        k=k,
        mcmc=mcmc,
        posterior=posterior,
        created_at=payload.get("created_at", now),
        updated_at=payload.get("updated_at", now),
    )


def _select_next(
    dimension: int,
    posterior: PosteriorSamples,
    selection: SelectionConfig,
    k: float,
    step: int,
) -> Query:
    """Pick the pending query for ``step`` with a per-step derived seed."""
    step_seed = derive_seed(selection.seed, step)
    if selection.strategy == "random":
        return select_random(dimension, step_seed)
    step_cfg = replace(selection, seed=step_seed)
    if selection.strategy == "best_of_n":
        return select_best_of_n(posterior, step_cfg, k)
    return select_closed_form(posterior, step_cfg)


def _utcnow() -> str:
    return datetime.now(timezone.utc).isoformat()
