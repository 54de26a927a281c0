"""HTTP/JSON gateway exposing sessions, estimates, and stimuli.

One session maps to one JSON snapshot file; snapshots are authoritative, so a
restarted server rebuilds any session's posterior exactly from its history.
Mutations on a session are serialized by a per-session lock; distinct
sessions proceed concurrently on the worker thread pool.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, HTTPException, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .model import McmcConfig
from .rng import derive_seed
from .selection import SelectionConfig
from .session import (
    NoPendingQueryError,
    SessionState,
    create_session,
    from_snapshot,
    submit_answer,
    to_snapshot,
)
from .stimulus import FAMILIES, StimulusSpec, render

POSTERIOR_PREVIEW_LIMIT = 500


class CreateSessionBody(BaseModel):
    dimension: int = Field(ge=1, le=4)
    strategy: Literal["random", "best_of_n", "closed_form"] = "closed_form"
    k_q: float = Field(default=10.0, gt=0)
    family: Literal["color_shape", "face_glyph"] = "color_shape"
    seed: int | None = None
    n_candidates: int = Field(default=500, ge=2)
    mean_cut_weight: float = Field(default=1.0, ge=0)
    spacing_stddevs: float = Field(default=2.0, gt=0)


class AnswerBody(BaseModel):
    choice: Literal["first", "second"]
    idempotency_token: str | None = None


@dataclass
class _Entry:
    state: SessionState
    family: str
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_token: str | None = None
    last_view: dict | None = None


class SessionStore:
    """In-memory session registry backed by one snapshot file per session."""

    def __init__(self, snapshot_dir):
        self.snapshot_dir = Path(snapshot_dir)
        self.snapshot_dir.mkdir(parents=True, exist_ok=True)
        self._entries: dict[str, _Entry] = {}
        self._registry_lock = threading.Lock()

    def add(self, state: SessionState, family: str) -> _Entry:
        entry = _Entry(state=state, family=family)
        with self._registry_lock:
            self._entries[state.id] = entry
        self.persist(entry)
        return entry

    def get(self, session_id: str) -> _Entry | None:
        with self._registry_lock:
            entry = self._entries.get(session_id)
        if entry is not None:
            return entry
        return self._load(session_id)

    def persist(self, entry: _Entry) -> None:
        snapshot = to_snapshot(entry.state)
        snapshot["family"] = entry.family
        path = self._path(entry.state.id)
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(snapshot, indent=2))
        os.replace(tmp, path)

    def _load(self, session_id: str) -> _Entry | None:
        path = self._path(session_id)
        if not path.exists():
            return None
        payload = json.loads(path.read_text())
        state = from_snapshot(payload)
        entry = _Entry(state=state, family=payload.get("family", "color_shape"))
        with self._registry_lock:
            # Another thread may have loaded it concurrently; keep the first.
            entry = self._entries.setdefault(session_id, entry)
        return entry

    def _path(self, session_id: str) -> Path:
        return self.snapshot_dir / f"{session_id}.json"


def stimulus_url(family: str, attributes) -> str:
    coords = ",".join(f"{float(v):.6f}" for v in attributes)
    return f"/stimuli?family={family}&a={coords}"


def build_view(entry: _Entry) -> dict:
    state = entry.state
    draws = state.posterior.draws
    stride = max(1, -(-draws.shape[0] // POSTERIOR_PREVIEW_LIMIT))
    pending = None
    if state.pending is not None:
        pending = {
            "first": state.pending.first.tolist(),
            "second": state.pending.second.tolist(),
            "first_stimulus_url": stimulus_url(entry.family, state.pending.first),
            "second_stimulus_url": stimulus_url(entry.family, state.pending.second),
        }
    estimate = state.posterior.mean
    return {
        "id": state.id,
        "dimension": state.dimension,
        "n_answered": state.n_answered,
        "pending": pending,
        "estimate": estimate.tolist(),
        "estimate_stimulus_url": stimulus_url(entry.family, estimate),
        "posterior_preview": draws[::stride][:POSTERIOR_PREVIEW_LIMIT].tolist(),
        "log_det_cov": state.posterior.log_det_covariance,
    }


def create_app(snapshot_dir, mcmc_defaults: McmcConfig | None = None) -> FastAPI:
    store = SessionStore(snapshot_dir)
    mcmc_defaults = mcmc_defaults or McmcConfig()
    app = FastAPI(title="prefloc gateway", version="0.1.0")
    app.state.store = store

    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    def _validation_error(request, exc):
        details = [
            {"field": ".".join(str(p) for p in err["loc"]), "message": err["msg"]}
            for err in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"detail": details})

    @app.post("/sessions", status_code=201)
    def create(body: CreateSessionBody) -> dict:
        session_id = uuid.uuid4().hex
        seed = body.seed if body.seed is not None else int(uuid.uuid4().int % 2**31)
        selection = SelectionConfig(
            strategy=body.strategy,
            n_candidates=body.n_candidates,
            mean_cut_weight=body.mean_cut_weight,
            spacing_stddevs=body.spacing_stddevs,
            seed=derive_seed(seed, 0),
        )
        mcmc = McmcConfig(
            chains=mcmc_defaults.chains,
            burn_in=mcmc_defaults.burn_in,
            keep=mcmc_defaults.keep,
            initial_proposal_scale=mcmc_defaults.initial_proposal_scale,
            target_acceptance=mcmc_defaults.target_acceptance,
            seed=derive_seed(seed, 1),
        )
        state = create_session(body.dimension, selection, body.k_q, mcmc, session_id=session_id)
        entry = store.add(state, body.family)
        return build_view(entry)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        entry = store.get(session_id)
        if entry is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        return build_view(entry)

    @app.post("/sessions/{session_id}/answer")
    def answer_session(session_id: str, body: AnswerBody) -> dict:
        entry = store.get(session_id)
        if entry is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        if not entry.lock.acquire(blocking=False):
            raise HTTPException(status_code=409, detail="another answer is in flight")
        try:
            if body.idempotency_token is not None and body.idempotency_token == entry.last_token:
                return entry.last_view
            try:
                entry.state = submit_answer(entry.state, body.choice)
            except NoPendingQueryError as exc:
                raise HTTPException(status_code=409, detail=str(exc)) from exc
            store.persist(entry)
            view = build_view(entry)
            entry.last_token = body.idempotency_token
            entry.last_view = view
            return view
        finally:
            entry.lock.release()

    @app.get("/stimuli")
    def get_stimulus(family: str, a: str) -> Response:
        if family not in FAMILIES:
            raise HTTPException(status_code=400, detail=f"unknown family {family!r}")
        try:
            coords = [float(part) for part in a.split(",") if part != ""]
            spec = StimulusSpec(family=family, dimension=len(coords))
            document = render(spec, coords)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return Response(
            content=document,
            media_type="image/svg+xml",
            headers={"Cache-Control": "public, max-age=31536000, immutable"},
        )

    return app


def serve(host: str, port: int, snapshot_dir, mcmc_defaults: McmcConfig | None = None) -> None:
    import uvicorn

    uvicorn.run(create_app(snapshot_dir, mcmc_defaults), host=host, port=port, log_level="info")
