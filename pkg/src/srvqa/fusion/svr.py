"""Epsilon-insensitive linear SVR trained by SMO on the dual.

Primal objective:

    P(w, b) = 1/2 ||w||^2 + C * sum_i max(0, |w.x_i + b - y_i| - epsilon)

The dual is a box-constrained QP with one equality constraint, solved by
sequential minimal optimization with maximal-violating-pair working-set
selection.  The bias is unregularized and recovered from the KKT
conditions.  Deterministic given a fixed sample order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

log = logging.getLogger(__name__)

_TAU = 1e-12


@dataclass(frozen=True)
class SvrSolution:
    """Fitted weights plus solver diagnostics."""

    w: np.ndarray
    b: float
    beta: np.ndarray  # dual coefficients, w = X.T @ beta
    iterations: int
    kkt_violation: float
    primal_objective: float
    dual_objective: float
    duality_gap: float
    converged: bool

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.atleast_2d(np.asarray(X, dtype=np.float64)) @ self.w + self.b


def svr_objective(
    X: np.ndarray, y: np.ndarray, w: np.ndarray, b: float, C: float, epsilon: float
) -> float:
    """The primal objective value; also the loss reference for test oracles."""
    residual = X @ w + b - y
    loss = np.maximum(0.0, np.abs(residual) - epsilon).sum()
    return float(0.5 * np.dot(w, w) + C * loss)


def svr_fit(
    X: np.ndarray,
    y: np.ndarray,
    C: float = 1.0,
    epsilon: float = 0.1,
    tol: float = 1e-6,
    max_iter: int = 1_000_000,
) -> SvrSolution:
    """Fit the epsilon-SVR on (X, y).

    ``tol`` bounds the maximal KKT violation (and thereby the relative
    stationarity of the objective).  Raises on non-finite inputs.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    y = np.ascontiguousarray(y, dtype=np.float64)
    n = X.shape[0]
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    if y.shape != (n,):
        raise ValueError(f"y shape {y.shape} does not match {n} samples")
    bad = ~np.isfinite(X).all(axis=1) | ~np.isfinite(y)
    if bad.any():
        raise ValueError(f"non-finite features in samples {np.flatnonzero(bad).tolist()}")
    if C <= 0:
        raise ValueError(f"C must be positive, got {C}")
    if epsilon < 0:
        raise ValueError(f"epsilon must be non-negative, got {epsilon}")

    K = X @ X.T
    diag = np.diag(K).copy()

    # Combined dual variables: a[:n] with sign +1, a[n:] with sign -1;
    # beta = a[:n] - a[n:], f = K @ beta.
    a = np.zeros(2 * n)
    f = np.zeros(n)

    def violating_pair() -> Tuple[int, int, float, float]:
        r = y - f
        v = np.concatenate([r - epsilon, r + epsilon])
        up = np.concatenate([a[:n] < C, a[n:] > 0])
        low = np.concatenate([a[:n] > 0, a[n:] < C])
        v_up = np.where(up, v, -np.inf)
        v_low = np.where(low, v, np.inf)
        i = int(np.argmax(v_up))
        j = int(np.argmin(v_low))
        return i, j, v_up[i], v_low[j]

    iterations = 0
    m = M = 0.0
    converged = False
    while iterations < max_iter:
        i, j, m, M = violating_pair()
        if m - M <= tol:
            converged = True
            break
        iterations += 1

        bi, bj = i % n, j % n
        s_i = 1.0 if i < n else -1.0
        s_j = 1.0 if j < n else -1.0
        g_i = s_i * (f[bi] - y[bi]) + epsilon
        g_j = s_j * (f[bj] - y[bj]) + epsilon
        old_ai, old_aj = a[i], a[j]

        # curvature along the feasible pair direction; same expression for
        # both sign combinations once the sign products are folded in
        quad = diag[bi] + diag[bj] - 2.0 * K[bi, bj]
        if quad <= 0:
            quad = _TAU

        if s_i != s_j:
            delta = (-g_i - g_j) / quad
            diff = a[i] - a[j]
            a[i] += delta
            a[j] += delta
            if diff > 0:
                if a[j] < 0:
                    a[j] = 0.0
                    a[i] = diff
            else:
                if a[i] < 0:
                    a[i] = 0.0
                    a[j] = -diff
            if diff > 0:
                if a[i] > C:
                    a[i] = C
                    a[j] = C - diff
            else:
                if a[j] > C:
                    a[j] = C
                    a[i] = C + diff
        else:
            delta = (g_i - g_j) / quad
            total = a[i] + a[j]
            a[i] -= delta
            a[j] += delta
            if total > C:
                if a[i] > C:
                    a[i] = C
                    a[j] = total - C
            else:
                if a[j] < 0:
                    a[j] = 0.0
                    a[i] = total
            if total > C:
                if a[j] > C:
                    a[j] = C
                    a[i] = total - C
            else:
                if a[i] < 0:
                    a[i] = 0.0
                    a[j] = total

        d_beta_i = s_i * (a[i] - old_ai)
        d_beta_j = s_j * (a[j] - old_aj)
        if bi == bj:
            f += K[:, bi] * (d_beta_i + d_beta_j)
        else:
            f += K[:, bi] * d_beta_i + K[:, bj] * d_beta_j

    if not converged:
        log.warning("SVR did not reach tol=%g in %d iterations", tol, max_iter)

    beta = a[:n] - a[n:]
    w = X.T @ beta
    b = 0.5 * (m + M) if np.isfinite(m) and np.isfinite(M) else 0.0
    primal = svr_objective(X, y, w, b, C, epsilon)
    dual = float(-(0.5 * beta @ f + epsilon * a.sum() - y @ beta))
    return SvrSolution(
        w=w,
        b=float(b),
        beta=beta,
        iterations=iterations,
        kkt_violation=float(m - M),
        primal_objective=primal,
        dual_objective=dual,
        duality_gap=float(primal - dual),
        converged=converged,
    )
