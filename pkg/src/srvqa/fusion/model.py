"""The fused quality model: normalization stats + linear SVR weights."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Mapping, Optional, Sequence, Tuple

import numpy as np

from .features import DEFAULT_ACTIVE_FEATURES, FEATURE_NAMES, FeatureVector, TrainingSample
from .normalization import NormalizationStats, fit_normalization
from .svr import SvrSolution, svr_fit

MODEL_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class FusionModel:
    active_features: Tuple[str, ...]
    weights: np.ndarray
    bias: float
    norm: NormalizationStats
    hyperparams: Mapping[str, float]
    provider_hashes: Mapping[str, str] = field(default_factory=dict)
    created_at: str = ""

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=np.float64)
        if weights.shape != (len(self.active_features),):
            raise ValueError("need exactly one weight per active feature")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "active_features", tuple(self.active_features))
        if tuple(self.norm.feature_names) != tuple(self.active_features):
            raise ValueError("normalization stats must cover the active features")

    def predict(self, features: FeatureVector) -> float:
        """Fused quality score (unclamped; intended for ranking)."""
        raw = features.as_array(self.active_features)
        x = self.norm.apply(raw, clamp=True)[0]
        return float(x @ self.weights + self.bias)

    def predict_rows(self, X: np.ndarray) -> np.ndarray:
        """Predict from raw feature rows ordered like ``active_features``."""
        return self.norm.apply(X, clamp=True) @ self.weights + self.bias

    def to_dict(self) -> dict:
        return {
            "schema_version": MODEL_SCHEMA_VERSION,
            "active_features": list(self.active_features),
            "weights": self.weights.tolist(),
            "bias": self.bias,
            "norm": {
                "min": self.norm.mins.tolist(),
                "max": self.norm.maxs.tolist(),
            },
            "hyperparams": dict(self.hyperparams),
            "provider_hashes": dict(self.provider_hashes),
            "created_at": self.created_at,
        }


def save_model(model: FusionModel, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(model.to_dict(), f, indent=2, sort_keys=True)
        f.write("\n")


def load_model(path) -> FusionModel:
    with open(path, "r", encoding="utf-8") as f:
        payload = json.load(f)
    if payload.get("schema_version") != MODEL_SCHEMA_VERSION:
        raise ValueError(f"unsupported model schema {payload.get('schema_version')!r}")
    names = tuple(payload["active_features"])
    norm = NormalizationStats(
        feature_names=names,
        mins=np.asarray(payload["norm"]["min"], dtype=np.float64),
        maxs=np.asarray(payload["norm"]["max"], dtype=np.float64),
    )
    return FusionModel(
        active_features=names,
        weights=np.asarray(payload["weights"], dtype=np.float64),
        bias=float(payload["bias"]),
        norm=norm,
        hyperparams=payload.get("hyperparams", {}),
        provider_hashes=payload.get("provider_hashes", {}),
        created_at=payload.get("created_at", ""),
    )


def samples_matrix(
    samples: Sequence[TrainingSample], names: Sequence[str] = FEATURE_NAMES
) -> Tuple[np.ndarray, np.ndarray]:
    X = np.array([s.features.as_array(names) for s in samples], dtype=np.float64)
    y = np.array([s.subjective_score for s in samples], dtype=np.float64)
    return X, y


def train_fusion_model(
    samples: Sequence[TrainingSample],
    active_features: Sequence[str] = DEFAULT_ACTIVE_FEATURES,
    C: float = 1.0,
    epsilon: float = 0.1,
    tol: float = 1e-6,
    provider_hashes: Optional[Mapping[str, str]] = None,
) -> Tuple[FusionModel, SvrSolution]:
    """Fit normalization on the samples, then the linear SVR on top."""
    if len(samples) < 2:
        raise ValueError(f"need at least 2 training samples, got {len(samples)}")
    active = tuple(active_features)
    X_raw, y = samples_matrix(samples, active)
    norm = fit_normalization(X_raw, active)
    X = norm.apply(X_raw, clamp=True)
    solution = svr_fit(X, y, C=C, epsilon=epsilon, tol=tol)
    model = FusionModel(
        active_features=active,
        weights=solution.w,
        bias=solution.b,
        norm=norm,
        hyperparams={"C": C, "epsilon": epsilon, "tol": tol},
        provider_hashes=dict(provider_hashes or {}),
        created_at=datetime.now(timezone.utc).isoformat(),
    )
    return model, solution
