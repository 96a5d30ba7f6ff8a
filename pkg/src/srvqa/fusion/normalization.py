"""Per-feature min-max normalization fitted on the training portion only."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np


@dataclass(frozen=True)
class NormalizationStats:
    """Training-set (min, max) per feature.

    Degenerate features (max == min) map to 0.  At inference, normalized
    values are clamped to [0, 1] so unseen extremes cannot extrapolate.
    """

    feature_names: Tuple[str, ...]
    mins: np.ndarray
    maxs: np.ndarray

    def __post_init__(self):
        mins = np.asarray(self.mins, dtype=np.float64)
        maxs = np.asarray(self.maxs, dtype=np.float64)
        if mins.shape != maxs.shape or mins.shape != (len(self.feature_names),):
            raise ValueError("mins/maxs must align with feature_names")
        if (maxs < mins).any():
            raise ValueError("max must be >= min for every feature")
        mins.setflags(write=False)
        maxs.setflags(write=False)
        object.__setattr__(self, "mins", mins)
        object.__setattr__(self, "maxs", maxs)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def degenerate(self) -> np.ndarray:
        return self.maxs == self.mins

    def apply(self, X: np.ndarray, clamp: bool = True) -> np.ndarray:
        """Map raw feature rows to [0, 1]; clamp at inference time."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        span = self.maxs - self.mins
        safe_span = np.where(self.degenerate, 1.0, span)
        out = (X - self.mins) / safe_span
        out[:, self.degenerate] = 0.0
        if clamp:
            out = np.clip(out, 0.0, 1.0)
        return out


def fit_normalization(
    X: np.ndarray, feature_names: Sequence[str]
) -> NormalizationStats:
    """Per-feature min/max over the training matrix (rows are samples)."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[0] < 2:
        raise ValueError(f"need at least 2 samples to fit normalization, got {X.shape[0]}")
    if X.shape[1] != len(feature_names):
        raise ValueError("feature count does not match feature_names")
    return NormalizationStats(
        feature_names=tuple(feature_names),
        mins=X.min(axis=0),
        maxs=X.max(axis=0),
    )
