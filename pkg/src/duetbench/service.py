"""HTTP session service for live human-vs-giver play.

The human is the guesser. Each session owns a seeded board, a culture-
adaptive giver, and its posterior; every guess updates the posterior before
the next clue is computed. The service is a thin shell over the core
modules: every response field can be recomputed offline from the session's
seed and guess sequence.

Wire format for external guesser adapters (the reverse direction, a remote
model guessing for the harness): POST {"clue": str, "candidates": [str]}
returning {"word": str}.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .agents import C3Giver, CulturePosterior, RsaConfig
from .game import GameState, Status, TurnLog, apply_guess, end_turn, generate_board, log_turn, new_game
from .harness import ExperimentResources


class RsaParams(BaseModel):
    alpha: float = 0.5
    delta: float = 0.1
    clue_vocab_size: int = 2000


class CreateSession(BaseModel):
    cultures: list[str]
    rsa: RsaParams = RsaParams()
    beta: float = 0.5
    seed: int = 0
    max_turns: int = 15


class GuessBody(BaseModel):
    word: str


@dataclass
class Session:
    id: str
    state: GameState
    giver: C3Giver
    clue: str
    target: str
    created_at: float
    updated_at: float
    lock: threading.Lock = field(default_factory=threading.Lock)
    guess_log: list = field(default_factory=list)  # dicts: clue/guess/outcome/posterior


def _posterior_payload(giver: C3Giver) -> list[dict]:
    normalized = giver.posterior.normalized()
    return [
        {"culture": c, "weight": float(w), "raw": float(r)}
        for c, w, r in zip(
            giver.posterior.cultures, normalized, giver.posterior.weights
        )
    ]


def _board_payload(state: GameState) -> dict:
    revealed = {
        w: state.board.role_of(w).value
        for w in state.board.words
        if w in state.revealed
    }
    payload = {"words": list(state.board.words), "revealed": revealed}
    if state.status is not Status.ONGOING:
        # Game over: roles are no longer secret.
        payload["roles"] = {w: state.board.role_of(w).value for w in state.board.words}
    return payload


def _session_payload(sess: Session) -> dict:
    state = sess.state
    payload = {
        "id": sess.id,
        "board": _board_payload(state),
        "status": state.status.value,
        "turn": state.turn,
        "max_turns": state.max_turns,
        "target_count": 1,
        "posterior": _posterior_payload(sess.giver),
        "history": list(sess.guess_log),
        "created_at": sess.created_at,
        "updated_at": sess.updated_at,
    }
    if state.status is Status.ONGOING:
        payload["clue"] = sess.clue
    return payload


def create_app(
    resources: ExperimentResources,
    transcript_path=None,
    allow_origins=("*",),
) -> FastAPI:
    app = FastAPI(title="duetbench session service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(allow_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def get_session(session_id: str) -> Session:
        with registry_lock:
            sess = sessions.get(session_id)
        if sess is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return sess

    @app.post("/sessions")
    def create_session(body: CreateSession):
        if not body.cultures:
            raise HTTPException(status_code=422, detail="at least one culture required")
        try:
            listeners = [resources.listener(c) for c in body.cultures]
        except Exception as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        board = generate_board(resources.wordpool, body.seed, vocab=resources.table)
        state = new_game(board, max_turns=body.max_turns)
        cfg = RsaConfig(
            alpha=body.rsa.alpha,
            delta=body.rsa.delta,
            clue_vocab_size=body.rsa.clue_vocab_size,
        )
        posterior = CulturePosterior.uniform(body.cultures, listeners, beta=body.beta)
        giver = C3Giver(posterior, board, cfg)
        clue, target = giver.clue(state)
        now = time.time()
        sess = Session(
            id=uuid.uuid4().hex,
            state=state,
            giver=giver,
            clue=clue,
            target=target,
            created_at=now,
            updated_at=now,
        )
        with registry_lock:
            sessions[sess.id] = sess
        return {
            "id": sess.id,
            "board": _board_payload(state),
            "clue": clue,
            "target_count": 1,
            "status": state.status.value,
            "posterior": _posterior_payload(giver),
        }

    @app.post("/sessions/{session_id}/guess")
    def submit_guess(session_id: str, body: GuessBody):
        sess = get_session(session_id)
        with sess.lock:
            state = sess.state
            if state.status is not Status.ONGOING:
                raise HTTPException(status_code=409, detail="game is over")
            word = body.word.strip().lower()
            if word not in state.board.roles or word in state.revealed:
                raise HTTPException(status_code=422, detail="not an unrevealed board word")
            unrevealed = state.unrevealed()
            state, outcome = apply_guess(state, word)
            sess.giver.observe(sess.clue, word, unrevealed)
            state = log_turn(
                state, TurnLog(sess.clue, (sess.target,), ((word, outcome),))
            )
            state = end_turn(state)
            posterior = _posterior_payload(sess.giver)
            sess.guess_log.append(
                {
                    "clue": sess.clue,
                    "guess": word,
                    "outcome": outcome.value,
                    "posterior": posterior,
                }
            )
            response = {
                "outcome": outcome.value,
                "status": state.status.value,
                "posterior": posterior,
            }
            if state.status is Status.ONGOING:
                sess.clue, sess.target = sess.giver.clue(state)
                response["next_clue"] = sess.clue
            else:
                response["board"] = _board_payload(state)
                if transcript_path is not None:
                    with open(transcript_path, "a", encoding="utf-8") as fh:
                        fh.write(json.dumps(state.to_json(), sort_keys=True) + "\n")
            sess.state = state
            sess.updated_at = time.time()
            return response

    @app.get("/sessions/{session_id}")
    def fetch_session(session_id: str):
        sess = get_session(session_id)
        with sess.lock:
            return _session_payload(sess)

    @app.get("/sessions/{session_id}/posterior")
    def fetch_posterior(session_id: str):
        sess = get_session(session_id)
        with sess.lock:
            return {"posterior": _posterior_payload(sess.giver)}

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        with registry_lock:
            if session_id not in sessions:
                raise HTTPException(status_code=404, detail="unknown session")
            del sessions[session_id]

    @app.get("/healthz")
    def healthz():
        return {"ok": True, "sessions": len(sessions)}

    return app
