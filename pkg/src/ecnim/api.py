"""HTTP/JSON facade over the engine for the web UI and scripted clients.

Positions and rulesets travel as the shared text syntax inside JSON
strings.  Sessions live in memory with TTL eviction; they are play aids,
not records.  Error mapping: 400 malformed input, 404 unknown session,
409 illegal move or dead game, 422 budget exceeded.
"""
from __future__ import annotations

import itertools
import math
import time
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import solver
from .core import (
    IllegalMoveError,
    Move,
    Position,
    Ruleset,
    apply_move,
    check_move,
    iter_legal_moves,
)
from .notation import format_position, format_ruleset, parse_position, parse_ruleset
from .reductions import (
    Evaluation,
    best_move,
    classify,
    evaluate,
    resolution_doc,
    ruleset_catalog,
)
from .solver import BudgetError, CapacityError, Outcome

MOVES_PAGE = 500
RESISTANCE_CAP = 2000
SESSION_TTL = 3600.0


class GameBody(BaseModel):
    ruleset: str
    position: str


class MovesBody(GameBody):
    offset: int = Field(default=0, ge=0)


class MoveBody(BaseModel):
    removals: dict[int, int]


@dataclass
class Session:
    id: str
    rs: Ruleset
    initial: Position
    position: Position
    history: list[dict] = field(default_factory=list)
    touched: float = field(default_factory=time.monotonic)


def _parse_pair(ruleset: str, position: str) -> tuple[Ruleset, Position]:
    try:
        rs = parse_ruleset(ruleset)
        pos = parse_position(position)
        if len(pos) != rs.m:
            raise HTTPException(400, f"expected {rs.m} piles, got {len(pos)}")
        return rs, pos
    except ValueError as exc:
        raise HTTPException(400, str(exc)) from exc


def _evaluate(rs: Ruleset, pos: Position) -> Evaluation:
    try:
        return evaluate(rs, pos)
    except (CapacityError, BudgetError) as exc:
        raise HTTPException(422, str(exc)) from exc


def _eval_doc(rs: Ruleset, pos: Position) -> dict:
    ev = _evaluate(rs, pos)
    grundy = ev.grundy
    if grundy is None and ev.method[-1] == "search":
        # the outcome search already fit the budget; the grundy sweep is
        # the same downset
        grundy = solver.grundy(ev.resolved_ruleset, ev.resolved_position)
    return {
        "ruleset": format_ruleset(rs),
        "position": format_position(pos),
        "outcome": ev.outcome.value,
        "method": list(ev.method),
        "witness": None if ev.witness is None else
        {"reflected": ev.witness.reflected, "start": ev.witness.start},
        "grundy": grundy,
    }


def _move_doc(move: Move, before: Position) -> dict:
    return {
        "removals": {str(p): a for p, a in move.removals},
        "support": sorted(move.support),
        "result": format_position(apply_move(before, move)),
    }


def _best(rs: Ruleset, pos: Position) -> Move | None:
    try:
        return best_move(rs, pos)
    except (CapacityError, BudgetError) as exc:
        raise HTTPException(422, str(exc)) from exc


def _resistance_move(rs: Ruleset, pos: Position) -> Move:
    """No winning move exists: minimize the opponent's winning replies.

    Depth-1 lookahead over a capped candidate set, deterministic tie-break
    on the removal vector.
    """
    candidates = sorted(
        itertools.islice(iter_legal_moves(rs, pos), RESISTANCE_CAP),
        key=lambda mv: mv.removals,
    )
    best_mv, best_count = None, math.inf
    for mv in candidates:
        succ = apply_move(pos, mv)
        count = 0
        for reply in itertools.islice(iter_legal_moves(rs, succ), RESISTANCE_CAP):
            after = _evaluate(rs, apply_move(succ, reply))
            if after.outcome is Outcome.P:
                count += 1
        if count < best_count:
            best_mv, best_count = mv, count
    assert best_mv is not None
    return best_mv


def create_app(*, session_ttl: float = SESSION_TTL, allow_origin: str = "*") -> FastAPI:
    app = FastAPI(title="ecnim", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[allow_origin],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, Session] = {}

    @app.exception_handler(RequestValidationError)
    async def malformed(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    def _session(sid: str) -> Session:
        now = time.monotonic()
        for stale in [s for s in sessions.values() if now - s.touched > session_ttl]:
            del sessions[stale.id]
        sess = sessions.get(sid)
        if sess is None:
            raise HTTPException(404, f"no session {sid!r}")
        sess.touched = now
        return sess

    def _session_doc(sess: Session) -> dict:
        return {
            "id": sess.id,
            "ruleset": format_ruleset(sess.rs),
            "initial": format_position(sess.initial),
            "position": format_position(sess.position),
            "history": sess.history,
            "evaluation": _eval_doc(sess.rs, sess.position),
            "over": not any(sess.position),
        }

    @app.get("/rulesets")
    def rulesets() -> dict:
        rows = []
        for entry in ruleset_catalog():
            rs = Ruleset.ecn(entry.m, entry.steps, entry.k)
            rows.append(
                {
                    "ruleset": entry.notation,
                    "m": entry.m,
                    "steps": list(entry.steps),
                    "k": entry.k,
                    "kind": entry.kind,
                    "summary": entry.summary,
                    "solved": entry.solved,
                    "resolution": resolution_doc(classify(rs)),
                }
            )
        return {"rulesets": rows}

    @app.post("/evaluate")
    def evaluate_route(body: GameBody) -> dict:
        rs, pos = _parse_pair(body.ruleset, body.position)
        return _eval_doc(rs, pos)

    @app.post("/moves")
    def moves_route(body: MovesBody) -> dict:
        rs, pos = _parse_pair(body.ruleset, body.position)
        page = list(
            itertools.islice(
                iter_legal_moves(rs, pos), body.offset, body.offset + MOVES_PAGE + 1
            )
        )
        more = len(page) > MOVES_PAGE
        page = page[:MOVES_PAGE]
        return {
            "moves": [_move_doc(mv, pos) for mv in page],
            "offset": body.offset,
            "next": body.offset + MOVES_PAGE if more else None,
        }

    @app.post("/bestmove")
    def bestmove_route(body: GameBody) -> dict:
        rs, pos = _parse_pair(body.ruleset, body.position)
        mv = _best(rs, pos)
        if mv is None:
            return {"outcome": "P", "move": None}
        return {"outcome": "N", "move": _move_doc(mv, pos)}

    @app.post("/sessions", status_code=201)
    def create_session(body: GameBody) -> dict:
        rs, pos = _parse_pair(body.ruleset, body.position)
        sid = uuid.uuid4().hex
        sessions[sid] = Session(sid, rs, pos, pos)
        return _session_doc(sessions[sid])

    @app.get("/sessions/{sid}")
    def get_session(sid: str) -> dict:
        return _session_doc(_session(sid))

    @app.post("/sessions/{sid}/move")
    def human_move(sid: str, body: MoveBody) -> dict:
        sess = _session(sid)
        try:
            mv = Move.from_mapping(body.removals)
            check_move(sess.rs, sess.position, mv)
        except IllegalMoveError as exc:
            raise HTTPException(409, str(exc)) from exc
        except ValueError as exc:
            raise HTTPException(400, str(exc)) from exc
        doc = _move_doc(mv, sess.position)
        sess.position = apply_move(sess.position, mv)
        sess.history.append({"by": "human", "move": doc})
        return _session_doc(sess)

    @app.post("/sessions/{sid}/engine-move")
    def engine_move(sid: str) -> dict:
        sess = _session(sid)
        if not any(sess.position):
            raise HTTPException(409, "game over: no tokens left")
        before = _evaluate(sess.rs, sess.position)
        if before.outcome is Outcome.N:
            mv = _best(sess.rs, sess.position)
            assert mv is not None
            played = "winning"
        else:
            mv = _resistance_move(sess.rs, sess.position)
            played = "resistance"
        doc = _move_doc(mv, sess.position)
        sess.position = apply_move(sess.position, mv)
        after = _evaluate(sess.rs, sess.position)
        if played == "winning":
            # invincibility: a winning move always lands on P
            assert after.outcome is Outcome.P
        sess.history.append({"by": "engine", "move": doc, "played": played})
        out = _session_doc(sess)
        out["engine"] = {"played": played, "move": doc}
        return out

    @app.get("/schema")
    def schema() -> JSONResponse:
        return JSONResponse(app.openapi())

    return app


app = create_app()
