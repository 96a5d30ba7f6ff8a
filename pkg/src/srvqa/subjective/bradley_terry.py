"""Bradley-Terry ability fitting from pairwise votes, per clip.

P(i beats j) = pi_i / (pi_i + pi_j).  Abilities are fitted by the standard
minorization-maximization iteration, which increases the likelihood every
sweep.  Ties count as half a win for each side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .votes import Choice, Vote

CONVERGENCE_TOL = 1e-10
MAX_SWEEPS = 10_000


class BradleyTerryError(Exception):
    pass


@dataclass(frozen=True)
class AbilityVector:
    """Fitted abilities for one clip's comparison graph.

    Abilities are normalized to sum 1; log-abilities are shift-invariant
    and feed the per-clip [0, 1] rescaling.
    """

    clip_id: str
    methods: Tuple[str, ...]
    abilities: np.ndarray
    loglik_history: Tuple[float, ...]
    smoothed: bool
    sweeps: int

    def __post_init__(self):
        a = np.ascontiguousarray(self.abilities, dtype=np.float64)
        a.setflags(write=False)
        object.__setattr__(self, "abilities", a)
        object.__setattr__(self, "methods", tuple(self.methods))

    @property
    def log_abilities(self) -> np.ndarray:
        return np.log(self.abilities)

    def ability_of(self, method: str) -> float:
        return float(self.abilities[self.methods.index(method)])

    def win_probability(self, method_i: str, method_j: str) -> float:
        pi = self.ability_of(method_i)
        pj = self.ability_of(method_j)
        return pi / (pi + pj)


def win_matrix(
    votes: Iterable[Vote], clip_id: str
) -> Tuple[Tuple[str, ...], np.ndarray]:
    """Aggregate votes on one clip into a wins matrix W[i, j] = wins of i
    over j; ties add 0.5 to each direction. Verification votes are ignored."""
    methods: List[str] = []
    index: Dict[str, int] = {}
    counts: Dict[Tuple[int, int], float] = {}

    def idx(name: str) -> int:
        if name not in index:
            index[name] = len(methods)
            methods.append(name)
        return index[name]

    for v in votes:
        if v.pair_id.clip_id != clip_id or v.is_verification:
            continue
        i, j = idx(v.pair_id.method_a), idx(v.pair_id.method_b)
        if v.choice is Choice.A:
            counts[(i, j)] = counts.get((i, j), 0.0) + 1.0
        elif v.choice is Choice.B:
            counts[(j, i)] = counts.get((j, i), 0.0) + 1.0
        else:
            counts[(i, j)] = counts.get((i, j), 0.0) + 0.5
            counts[(j, i)] = counts.get((j, i), 0.0) + 0.5
    n = len(methods)
    W = np.zeros((n, n))
    for (i, j), c in counts.items():
        W[i, j] = c
    return tuple(methods), W


def _components(observed: np.ndarray, n: int) -> List[List[int]]:
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in np.flatnonzero(observed[u]):
                if not seen[v]:
                    seen[v] = True
                    stack.append(int(v))
        comps.append(sorted(comp))
    return comps


def log_likelihood(W: np.ndarray, pi: np.ndarray) -> float:
    n = len(pi)
    ll = 0.0
    for i in range(n):
        for j in range(n):
            if i != j and W[i, j] > 0:
                ll += W[i, j] * math.log(pi[i] / (pi[i] + pi[j]))
    return ll


def fit_abilities(
    methods: Sequence[str],
    W: np.ndarray,
    clip_id: str = "",
    tol: float = CONVERGENCE_TOL,
    max_sweeps: int = MAX_SWEEPS,
) -> AbilityVector:
    """MM iteration on a wins matrix; raises on a disconnected graph.

    A method with zero effective wins makes the MLE degenerate; in that
    case every observed pair count gets +0.5 smoothing (flagged).
    """
    n = len(methods)
    if n < 2:
        raise BradleyTerryError(f"need at least 2 methods, got {n}")
    observed = (W + W.T) > 0
    np.fill_diagonal(observed, False)
    comps = _components(observed, n)
    if len(comps) > 1:
        names = [[methods[i] for i in comp] for comp in comps]
        raise BradleyTerryError(f"comparison graph is disconnected: {names}")

    smoothed = False
    wins = W.sum(axis=1)
    if (wins == 0).any() or (W.sum(axis=0) == 0).any():
        # zero-win (or zero-loss) methods push abilities to the boundary
        W = W + np.where(observed, 0.5, 0.0)
        wins = W.sum(axis=1)
        smoothed = True

    N = W + W.T  # comparisons per pair
    pi = np.full(n, 1.0 / n)
    history = [log_likelihood(W, pi)]
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        denom = np.where(N > 0, N / np.add.outer(pi, pi), 0.0).sum(axis=1)
        new_pi = wins / denom
        new_pi = new_pi / new_pi.sum()
        delta = np.abs(np.log(new_pi) - np.log(pi)).max()
        pi = new_pi
        history.append(log_likelihood(W, pi))
        if delta <= tol:
            break
    return AbilityVector(
        clip_id=clip_id,
        methods=tuple(methods),
        abilities=pi,
        loglik_history=tuple(history),
        smoothed=smoothed,
        sweeps=sweeps,
    )


def bradley_terry_fit(
    votes: Iterable[Vote],
    clip_id: str,
    tol: float = CONVERGENCE_TOL,
    max_sweeps: int = MAX_SWEEPS,
) -> AbilityVector:
    """Fit abilities for one clip from a filtered vote log."""
    methods, W = win_matrix(votes, clip_id)
    if len(methods) < 2:
        raise BradleyTerryError(f"clip {clip_id!r} has votes for {len(methods)} methods")
    return fit_abilities(methods, W, clip_id=clip_id, tol=tol, max_sweeps=max_sweeps)


def rescale_scores(abilities: AbilityVector) -> Dict[str, float]:
    """Min-max rescale log-abilities to [0, 1] within the clip.

    A degenerate spread maps every method to 0.5.
    """
    logs = abilities.log_abilities
    lo, hi = logs.min(), logs.max()
    if hi - lo < 1e-12:
        return {m: 0.5 for m in abilities.methods}
    return {
        m: float((v - lo) / (hi - lo)) for m, v in zip(abilities.methods, logs)
    }
