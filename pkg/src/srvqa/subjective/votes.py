"""Pairwise vote records, JSONL persistence and participant screening.

The vote log is JSON-lines, one vote per line, schema version "v1".
Verification votes carry the predefined correct answer so a log is
self-contained for screening.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Set, Tuple

VOTE_SCHEMA_VERSION = "v1"


class Choice(Enum):
    A = "A"
    B = "B"
    TIE = "TIE"


class VoteLogError(Exception):
    pass


@dataclass(frozen=True)
class PairId:
    """Ordered pair of method identifiers on one clip."""

    method_a: str
    method_b: str
    clip_id: str

    def __post_init__(self):
        if self.method_a == self.method_b:
            raise VoteLogError(
                f"a pair needs two distinct methods, got {self.method_a!r} twice"
            )

    @property
    def key(self) -> Tuple[str, str, str]:
        return (self.method_a, self.method_b, self.clip_id)


@dataclass(frozen=True)
class Vote:
    participant_id: str
    pair_id: PairId
    choice: Choice
    is_verification: bool = False
    expected_choice: Optional[Choice] = None
    timestamp: float = 0.0

    def __post_init__(self):
        if self.is_verification and self.expected_choice is None:
            raise VoteLogError(
                f"verification vote on {self.pair_id.key} lacks its expected answer"
            )

    def to_dict(self) -> dict:
        return {
            "v": VOTE_SCHEMA_VERSION,
            "participant_id": self.participant_id,
            "pair": {
                "a": self.pair_id.method_a,
                "b": self.pair_id.method_b,
                "clip": self.pair_id.clip_id,
            },
            "choice": self.choice.value,
            "is_verification": self.is_verification,
            "expected_choice": (
                self.expected_choice.value if self.expected_choice else None
            ),
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "Vote":
        if payload.get("v") != VOTE_SCHEMA_VERSION:
            raise VoteLogError(f"unsupported vote schema {payload.get('v')!r}")
        pair = payload["pair"]
        expected = payload.get("expected_choice")
        return cls(
            participant_id=str(payload["participant_id"]),
            pair_id=PairId(pair["a"], pair["b"], pair["clip"]),
            choice=Choice(payload["choice"]),
            is_verification=bool(payload.get("is_verification", False)),
            expected_choice=Choice(expected) if expected else None,
            timestamp=float(payload.get("timestamp", 0.0)),
        )


def vote_line(vote: Vote) -> str:
    return json.dumps(vote.to_dict(), sort_keys=True, separators=(",", ":"))


def write_votes(votes: Iterable[Vote], path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for vote in votes:
            f.write(vote_line(vote) + "\n")


def append_vote(vote: Vote, path) -> None:
    """Append one vote and fsync so a crash cannot drop acknowledged votes."""
    import os

    with open(path, "a", encoding="utf-8") as f:
        f.write(vote_line(vote) + "\n")
        f.flush()
        os.fsync(f.fileno())


def read_votes(path) -> List[Vote]:
    votes = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                votes.append(Vote.from_dict(json.loads(line)))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise VoteLogError(f"{path}:{lineno}: {exc}") from exc
    return votes


@dataclass(frozen=True)
class FilterReport:
    total_participants: int
    excluded_participants: int
    retained_votes: int
    dropped_votes: int


def filter_participants(
    votes: List[Vote], known_pairs: Optional[Set[Tuple[str, str, str]]] = None
) -> Tuple[List[Vote], FilterReport]:
    """Drop every vote from participants who missed any verification answer.

    ``known_pairs`` optionally restricts the valid pair universe; a vote
    referencing an unknown pair is an error.  Idempotent.
    """
    if known_pairs is not None:
        for v in votes:
            if v.pair_id.key not in known_pairs:
                raise VoteLogError(f"vote references unknown pair {v.pair_id.key}")
    failed: Set[str] = set()
    participants: Set[str] = set()
    for v in votes:
        participants.add(v.participant_id)
        if v.is_verification and v.choice is not v.expected_choice:
            failed.add(v.participant_id)
    kept = [v for v in votes if v.participant_id not in failed]
    return kept, FilterReport(
        total_participants=len(participants),
        excluded_participants=len(failed),
        retained_votes=len(kept),
        dropped_votes=len(votes) - len(kept),
    )
