"""Group-aware cross-validation and feature-pair ablation for the fused metric."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..analysis.correlation import pearson, spearman
from .features import FEATURE_NAMES, TrainingSample
from .model import train_fusion_model


@dataclass(frozen=True)
class FoldResult:
    fold: int
    srcc: float
    plcc: float
    train_size: int
    test_size: int


@dataclass(frozen=True)
class AblationEntry:
    removed_pair: Tuple[str, str]
    worst_srcc: float
    fold_srcc: Tuple[float, ...]


@dataclass(frozen=True)
class AblationReport:
    entries: Tuple[AblationEntry, ...]  # sorted by worst_srcc descending
    best_removed_pair: Tuple[str, str]
    best_subset: Tuple[str, ...]


def assign_folds(
    group_ids: Sequence[str], folds: int, grouped: bool = True, seed: int = 0
) -> Dict[str, int]:
    """Deterministic group -> fold map: sorted group ids dealt round-robin.

    ``grouped=False`` shuffles the sorted ids with the seed first, which
    approximates ungrouped random folding while keeping determinism.
    """
    unique = sorted(set(group_ids))
    if len(unique) < folds:
        raise ValueError(
            f"need at least {folds} distinct groups for {folds} folds, "
            f"got {len(unique)}"
        )
    if not grouped:
        rng = np.random.RandomState(seed)
        unique = list(rng.permutation(unique))
    return {g: i % folds for i, g in enumerate(unique)}


def _canonical_order(samples: Sequence[TrainingSample]) -> List[TrainingSample]:
    # solver results depend (within tolerance) on sample order; sorting makes
    # fold metrics invariant to caller-side shuffling
    return sorted(
        samples,
        key=lambda s: (s.group_id, s.subjective_score, tuple(s.features.as_array())),
    )


def cross_validate(
    samples: Sequence[TrainingSample],
    folds: int = 3,
    active_features: Sequence[str] = FEATURE_NAMES,
    C: float = 1.0,
    epsilon: float = 0.1,
    grouped: bool = True,
    seed: int = 0,
) -> List[FoldResult]:
    """Per-fold SRCC/PLCC with normalization and SVR refit on each train split.

    All distortions of one source video share a group id and always land in
    the same fold, preventing content leakage.
    """
    samples = _canonical_order(samples)
    fold_of = assign_folds([s.group_id for s in samples], folds, grouped, seed)
    results = []
    for fold in range(folds):
        train = [s for s in samples if fold_of[s.group_id] != fold]
        test = [s for s in samples if fold_of[s.group_id] == fold]
        if not train or not test:
            raise ValueError(f"fold {fold} has an empty split")
        model, _ = train_fusion_model(
            train, active_features=active_features, C=C, epsilon=epsilon
        )
        predictions = np.array([model.predict(s.features) for s in test])
        truth = np.array([s.subjective_score for s in test])
        results.append(
            FoldResult(
                fold=fold,
                srcc=spearman(predictions, truth),
                plcc=pearson(predictions, truth),
                train_size=len(train),
                test_size=len(test),
            )
        )
    return results


def ablate_feature_pairs(
    samples: Sequence[TrainingSample],
    candidates: Sequence[str] = FEATURE_NAMES,
    folds: int = 3,
    C: float = 1.0,
    epsilon: float = 0.1,
    seed: int = 0,
) -> AblationReport:
    """Try removing every unordered feature pair and rank the removals.

    The objective per pair is the worst SRCC over the cross-validation
    folds; the winning removal maximizes it (ties broken by pair name).
    The same fold split is reused for every pair.
    """
    candidates = tuple(candidates)
    entries = []
    for f, g in itertools.combinations(sorted(candidates), 2):
        active = tuple(name for name in candidates if name not in (f, g))
        fold_results = cross_validate(
            samples,
            folds=folds,
            active_features=active,
            C=C,
            epsilon=epsilon,
            grouped=True,
            seed=seed,
        )
        srccs = tuple(r.srcc for r in fold_results)
        entries.append(
            AblationEntry(removed_pair=(f, g), worst_srcc=min(srccs), fold_srcc=srccs)
        )
    entries.sort(key=lambda e: (-e.worst_srcc, e.removed_pair))
    best = entries[0]
    best_subset = tuple(n for n in candidates if n not in best.removed_pair)
    return AblationReport(
        entries=tuple(entries),
        best_removed_pair=best.removed_pair,
        best_subset=best_subset,
    )
