"""HTTP API for the pairwise study, consumed by the browser rater UI.

Endpoints:
    GET  /session       -> next unclaimed session, blinded pair list
    POST /vote          -> append one vote (fsync'd), returns a receipt
    GET  /study/status  -> aggregate progress

Sessions are handed out once each.  The wire payload never contains method
names: media URLs are content-addressed, and the two sides of a pair are
just "a" and "b".  The client randomizes left/right placement.
"""

from __future__ import annotations

import hashlib
import threading
import time
from pathlib import Path
from typing import Callable, Dict, Optional, Set, Tuple

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .schedule import SessionPlan
from .votes import Choice, Vote, append_vote


def blinded_media_id(method: str, clip_id: str, salt: str = "") -> str:
    digest = hashlib.sha256(f"{salt}|{method}|{clip_id}".encode()).hexdigest()
    return digest[:20]


def default_media_url(method: str, clip_id: str, salt: str = "") -> str:
    return f"/media/{blinded_media_id(method, clip_id, salt)}.y4m"


class VoteRequest(BaseModel):
    session_id: str
    pair_index: int
    choice: str


def create_study_app(
    plan: SessionPlan,
    log_path,
    media_dir: Optional[str] = None,
    media_url_for: Optional[Callable[[str, str], str]] = None,
    salt: str = "",
) -> FastAPI:
    app = FastAPI(title="pairwise study")
    log_path = Path(log_path)
    resolve = media_url_for or (lambda m, c: default_media_url(m, c, salt))

    lock = threading.Lock()
    state = {
        "next_session": 0,
        "vote_count": 0,
    }
    voted: Set[Tuple[str, int]] = set()
    sessions_by_id = {s.session_id: s for s in plan.sessions}
    participant_of: Dict[str, str] = {}

    if media_dir:
        app.mount("/media", StaticFiles(directory=media_dir), name="media")

    @app.get("/session")
    def get_session():
        with lock:
            if state["next_session"] >= len(plan.sessions):
                raise HTTPException(status_code=410, detail="study complete")
            session = plan.sessions[state["next_session"]]
            state["next_session"] += 1
            participant = f"participant-{session.session_id}"
            participant_of[session.session_id] = participant
        return {
            "session_id": session.session_id,
            "participant_id": participant,
            "pairs": [
                {
                    "index": i,
                    "media_a": resolve(slot.pair.method_a, slot.pair.clip_id),
                    "media_b": resolve(slot.pair.method_b, slot.pair.clip_id),
                }
                for i, slot in enumerate(session.slots)
            ],
        }

    @app.post("/vote")
    def post_vote(req: VoteRequest):
        session = sessions_by_id.get(req.session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        if not 0 <= req.pair_index < len(session.slots):
            raise HTTPException(status_code=400, detail="pair index out of range")
        try:
            choice = Choice(req.choice)
        except ValueError:
            raise HTTPException(status_code=400, detail=f"bad choice {req.choice!r}")
        slot = session.slots[req.pair_index]
        with lock:
            participant = participant_of.get(
                req.session_id, f"participant-{req.session_id}"
            )
            key = (req.session_id, req.pair_index)
            if key in voted:
                raise HTTPException(status_code=409, detail="pair already voted")
            vote = Vote(
                participant_id=participant,
                pair_id=slot.pair,
                choice=choice,
                is_verification=slot.is_verification,
                expected_choice=slot.expected,
                timestamp=time.time(),
            )
            append_vote(vote, log_path)
            voted.add(key)
            state["vote_count"] += 1
            vote_id = state["vote_count"]
        return {
            "vote_id": vote_id,
            "session_id": req.session_id,
            "pair_index": req.pair_index,
        }

    @app.get("/study/status")
    def study_status():
        with lock:
            expected = sum(len(s.slots) for s in plan.sessions)
            return {
                "sessions_total": len(plan.sessions),
                "sessions_claimed": state["next_session"],
                "votes_recorded": state["vote_count"],
                "votes_expected": expected,
            }

    return app
