"""K-means selection of representative videos for dataset curation.

Feature rows are z-score standardized, clustered with seeded k-means++
initialization and Lloyd iterations, and the video nearest each centroid is
selected.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

MAX_LLOYD_ITERATIONS = 300


@dataclass(frozen=True)
class KMeansSelection:
    selected: Tuple[str, ...]  # one video id per cluster, cluster order
    assignments: Tuple[int, ...]  # cluster index per input row
    inertia_history: Tuple[float, ...]  # total within-cluster distance per sweep
    iterations: int


def _standardize(X: np.ndarray) -> np.ndarray:
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    std = np.where(std == 0.0, 1.0, std)
    return (X - mean) / std


def _kmeanspp_init(X: np.ndarray, k: int, rng: np.random.RandomState) -> np.ndarray:
    n = X.shape[0]
    centers = [X[rng.randint(n)]]
    for _ in range(1, k):
        d2 = np.min(
            [np.sum((X - c) ** 2, axis=1) for c in centers], axis=0
        )
        total = d2.sum()
        if total == 0.0:
            centers.append(X[rng.randint(n)])
            continue
        probs = d2 / total
        centers.append(X[rng.choice(n, p=probs)])
    return np.array(centers)


def kmeans_select(
    video_ids: Sequence[str],
    features: np.ndarray,
    k: int,
    seed: int = 0,
) -> KMeansSelection:
    """Cluster videos and pick the one nearest each centroid.

    Lloyd iterations run to an assignment fixpoint (capped at 300 sweeps);
    nearest-to-centroid ties break lexicographically on video id.
    """
    X = np.atleast_2d(np.asarray(features, dtype=np.float64))
    ids = [str(v) for v in video_ids]
    if X.shape[0] != len(ids):
        raise ValueError("one feature row per video id required")
    if X.shape[0] < k:
        raise ValueError(f"need at least {k} videos, got {X.shape[0]}")
    distinct = np.unique(X, axis=0).shape[0]
    if distinct < k:
        raise ValueError(
            f"only {distinct} distinct feature rows for k={k} clusters"
        )
    Z = _standardize(X)
    rng = np.random.RandomState(seed)
    centers = _kmeanspp_init(Z, k, rng)

    assignments = np.full(len(ids), -1, dtype=int)
    inertia_history: List[float] = []
    iterations = 0
    for _ in range(MAX_LLOYD_ITERATIONS):
        d2 = ((Z[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_assignments = d2.argmin(axis=1)
        inertia_history.append(float(d2[np.arange(len(ids)), new_assignments].sum()))
        iterations += 1
        if (new_assignments == assignments).all():
            break
        assignments = new_assignments
        for c in range(k):
            members = Z[assignments == c]
            if len(members):
                centers[c] = members.mean(axis=0)

    selected = []
    for c in range(k):
        member_idx = np.flatnonzero(assignments == c)
        if member_idx.size == 0:
            # empty cluster: fall back to the globally nearest unselected video
            member_idx = np.arange(len(ids))
        dists = np.sqrt(((Z[member_idx] - centers[c]) ** 2).sum(axis=1))
        order = sorted(zip(dists, [ids[i] for i in member_idx]))
        chosen = next(
            (vid for _, vid in order if vid not in selected), order[0][1]
        )
        selected.append(chosen)
    return KMeansSelection(
        selected=tuple(selected),
        assignments=tuple(int(a) for a in assignments),
        inertia_history=tuple(inertia_history),
        iterations=iterations,
    )
