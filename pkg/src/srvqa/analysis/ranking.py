"""Leaderboard-style ranking of processing chains by subjective score."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Sequence, Tuple

# Metrics where smaller values are better.
ASCENDING_METRICS = frozenset({"lpips"})

TOP_MARKERS = ("best", "second", "third")


@dataclass(frozen=True)
class RankEntry:
    label: str
    subjective_score: float
    metrics: Mapping[str, float]


@dataclass(frozen=True)
class RankedRow:
    rank: int
    label: str
    subjective_score: float
    metrics: Mapping[str, float]
    markers: Mapping[str, str] = field(default_factory=dict)  # column -> marker


def _top3(values: List[Tuple[str, float]], ascending: bool) -> Dict[str, str]:
    ordered = sorted(values, key=lambda lv: (lv[1] if ascending else -lv[1], lv[0]))
    return {label: TOP_MARKERS[i] for i, (label, _) in enumerate(ordered[:3])}


def rank_table(entries: Sequence[RankEntry]) -> List[RankedRow]:
    """Sort by subjective score descending (stable, label tie-break) and mark
    the top-3 per column, honoring each metric's direction."""
    if not entries:
        raise ValueError("rank_table needs at least one entry")
    metric_names = list(entries[0].metrics.keys())
    ordered = sorted(entries, key=lambda e: (-e.subjective_score, e.label))

    column_markers: Dict[str, Dict[str, str]] = {
        "subjective_score": _top3(
            [(e.label, e.subjective_score) for e in entries], ascending=False
        )
    }
    for name in metric_names:
        column_markers[name] = _top3(
            [(e.label, e.metrics[name]) for e in entries],
            ascending=name in ASCENDING_METRICS,
        )

    rows = []
    for rank, entry in enumerate(ordered, start=1):
        markers = {
            column: by_label[entry.label]
            for column, by_label in column_markers.items()
            if entry.label in by_label
        }
        rows.append(
            RankedRow(
                rank=rank,
                label=entry.label,
                subjective_score=entry.subjective_score,
                metrics=dict(entry.metrics),
                markers=markers,
            )
        )
    return rows
