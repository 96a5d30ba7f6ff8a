"""Pearson and Spearman correlation with strict degenerate-input handling."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import rankdata


def _validate(x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1 or x.shape != y.shape:
        raise ValueError(f"x and y must be equal-length vectors, got {x.shape}, {y.shape}")
    if x.size < 2:
        raise ValueError(f"need at least 2 points, got {x.size}")
    return x, y


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample Pearson linear correlation; errors on zero variance."""
    x, y = _validate(np.asarray(x), np.asarray(y))
    xc = x - x.mean()
    yc = y - y.mean()
    vx = np.dot(xc, xc)
    vy = np.dot(yc, yc)
    if vx == 0.0 or vy == 0.0:
        raise ValueError("pearson is undefined for zero-variance input")
    return float(np.dot(xc, yc) / np.sqrt(vx * vy))


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman rank correlation with average (fractional) tie ranks."""
    x, y = _validate(np.asarray(x), np.asarray(y))
    rx = rankdata(x, method="average")
    ry = rankdata(y, method="average")
    return pearson(rx, ry)


@dataclass(frozen=True)
class CorrelationReport:
    """Per-metric correlation against subjective scores."""

    metric: str
    plcc: float
    srcc: float
    per_clip: Optional[Dict[str, Tuple[float, float]]] = None  # clip -> (plcc, srcc)

    def __post_init__(self):
        for name, v in (("plcc", self.plcc), ("srcc", self.srcc)):
            if not -1.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [-1, 1], got {v}")

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "plcc": self.plcc,
            "srcc": self.srcc,
            "per_clip": self.per_clip,
        }


def correlate_metric(
    metric_values: Sequence[float],
    subjective: Sequence[float],
    metric_name: str,
    clip_ids: Optional[Sequence[str]] = None,
) -> CorrelationReport:
    """Overall (and optionally per-clip) PLCC/SRCC for one metric column."""
    per_clip = None
    if clip_ids is not None:
        per_clip = {}
        values = np.asarray(metric_values, dtype=np.float64)
        subj = np.asarray(subjective, dtype=np.float64)
        ids = np.asarray(clip_ids)
        for clip in sorted(set(ids)):
            sel = ids == clip
            if sel.sum() >= 2:
                per_clip[str(clip)] = (
                    pearson(values[sel], subj[sel]),
                    spearman(values[sel], subj[sel]),
                )
    return CorrelationReport(
        metric=metric_name,
        plcc=pearson(metric_values, subjective),
        srcc=spearman(metric_values, subjective),
        per_clip=per_clip,
    )
