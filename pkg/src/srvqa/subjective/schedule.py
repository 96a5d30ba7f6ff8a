"""Deterministic study-session scheduling.

Each scored (method pair, clip) combination must be seen exactly
``views_per_pair`` times, no participant may see the same pair twice, and
every session embeds 3 verification pairs with predefined answers at
seeded-random positions.  Sessions hold ``session_size`` pairs when demand
fills them; the tail of the demand produces shorter sessions (the padding
policy: short scored list, verification count unchanged).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .votes import Choice, PairId

VERIFICATIONS_PER_SESSION = 3
DEFAULT_VIEWS_PER_PAIR = 15
DEFAULT_SESSION_SIZE = 25


class ScheduleError(Exception):
    pass


@dataclass(frozen=True)
class VerificationPair:
    pair: PairId
    expected: Choice


@dataclass(frozen=True)
class SessionSlot:
    pair: PairId
    is_verification: bool = False
    expected: Optional[Choice] = None


@dataclass(frozen=True)
class Session:
    session_id: str
    slots: Tuple[SessionSlot, ...]

    @property
    def scored_count(self) -> int:
        return sum(1 for s in self.slots if not s.is_verification)

    @property
    def verification_count(self) -> int:
        return sum(1 for s in self.slots if s.is_verification)


@dataclass(frozen=True)
class SessionPlan:
    sessions: Tuple[Session, ...]
    seed: int
    views_per_pair: int
    session_size: int

    def assignment_counts(self) -> Dict[Tuple[str, str, str], int]:
        counts: Dict[Tuple[str, str, str], int] = {}
        for session in self.sessions:
            for slot in session.slots:
                if not slot.is_verification:
                    counts[slot.pair.key] = counts.get(slot.pair.key, 0) + 1
        return counts

    @property
    def total_scored_slots(self) -> int:
        return sum(s.scored_count for s in self.sessions)


def scored_pairs(methods: Sequence[str], clips: Sequence[str]) -> List[PairId]:
    return [
        PairId(a, b, clip)
        for clip in clips
        for a, b in itertools.combinations(methods, 2)
    ]


def schedule_pairs(
    methods: Sequence[str],
    clips: Sequence[str],
    verification_pool: Sequence[VerificationPair],
    views_per_pair: int = DEFAULT_VIEWS_PER_PAIR,
    session_size: int = DEFAULT_SESSION_SIZE,
    seed: int = 0,
) -> SessionPlan:
    """Build the full session plan; identical seeds give identical plans."""
    if len(methods) < 2:
        raise ScheduleError(f"need at least 2 methods, got {len(methods)}")
    if not clips:
        raise ScheduleError("need at least one clip")
    if views_per_pair < 1:
        raise ScheduleError(f"views_per_pair must be >= 1, got {views_per_pair}")
    if not verification_pool:
        raise ScheduleError("verification pool is empty")
    scored_per_session = session_size - VERIFICATIONS_PER_SESSION
    if scored_per_session < 1:
        raise ScheduleError(
            f"session_size {session_size} leaves no room for scored pairs "
            f"next to {VERIFICATIONS_PER_SESSION} verification ones"
        )

    pairs = scored_pairs(methods, clips)
    total_slots = len(pairs) * views_per_pair
    # A pair's views must land in distinct sessions, so the session count is
    # at least views_per_pair even when demand alone would need fewer.
    n_sessions = max(-(-total_slots // scored_per_session), views_per_pair)

    rng = np.random.RandomState(seed)
    order = list(rng.permutation(len(pairs)))

    per_session: List[List[PairId]] = [[] for _ in range(n_sessions)]
    cursor = 0
    for idx in order:
        for _ in range(views_per_pair):
            per_session[cursor % n_sessions].append(pairs[idx])
            cursor += 1

    sessions = []
    pool = list(verification_pool)
    for s_idx, scored in enumerate(per_session):
        if not scored:
            continue
        if len(pool) >= VERIFICATIONS_PER_SESSION:
            picks = rng.choice(len(pool), VERIFICATIONS_PER_SESSION, replace=False)
        else:
            picks = rng.choice(len(pool), VERIFICATIONS_PER_SESSION, replace=True)
        slots = [SessionSlot(pair=p) for p in scored]
        for pick in picks:
            vp = pool[int(pick)]
            position = int(rng.randint(0, len(slots) + 1))
            slots.insert(
                position,
                SessionSlot(pair=vp.pair, is_verification=True, expected=vp.expected),
            )
        sessions.append(Session(session_id=f"s{s_idx:05d}", slots=tuple(slots)))

    plan = SessionPlan(
        sessions=tuple(sessions),
        seed=seed,
        views_per_pair=views_per_pair,
        session_size=session_size,
    )
    counts = plan.assignment_counts()
    for pair in pairs:
        if counts.get(pair.key, 0) != views_per_pair:
            raise ScheduleError(
                f"pair {pair.key} scheduled {counts.get(pair.key, 0)} times, "
                f"expected {views_per_pair}"
            )
    for session in plan.sessions:
        keys = [s.pair.key for s in session.slots if not s.is_verification]
        if len(keys) != len(set(keys)):
            raise ScheduleError(f"session {session.session_id} repeats a pair")
    return plan
