from .bradley_terry import (
    AbilityVector,
    BradleyTerryError,
    bradley_terry_fit,
    fit_abilities,
    log_likelihood,
    rescale_scores,
    win_matrix,
)
from .schedule import (
    ScheduleError,
    Session,
    SessionPlan,
    SessionSlot,
    VerificationPair,
    schedule_pairs,
    scored_pairs,
)
from .votes import (
    Choice,
    FilterReport,
    PairId,
    Vote,
    VoteLogError,
    append_vote,
    filter_participants,
    read_votes,
    write_votes,
)

__all__ = [
    "AbilityVector",
    "BradleyTerryError",
    "Choice",
    "FilterReport",
    "PairId",
    "ScheduleError",
    "Session",
    "SessionPlan",
    "SessionSlot",
    "VerificationPair",
    "Vote",
    "VoteLogError",
    "append_vote",
    "bradley_terry_fit",
    "filter_participants",
    "fit_abilities",
    "log_likelihood",
    "read_votes",
    "rescale_scores",
    "schedule_pairs",
    "scored_pairs",
    "win_matrix",
    "write_votes",
]
