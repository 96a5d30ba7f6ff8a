"""Independent brute-force oracles used to pin expected values.

Everything here is written as plainly as possible (explicit loops, direct
formulas) and never shares code paths with the package implementations it
checks.
"""

from __future__ import annotations

import math

import numpy as np


# -- classical metrics ------------------------------------------------------

def psnr_loop(ref_luma, dist_luma) -> float:
    h = len(ref_luma)
    w = len(ref_luma[0])
    total = 0.0
    for r in range(h):
        for c in range(w):
            d = float(ref_luma[r][c]) - float(dist_luma[r][c])
            total += d * d
    mse = total / (h * w)
    if mse == 0.0:
        return 100.0
    return 10.0 * math.log10(255.0**2 / mse)


def colorfulness_loop(r_plane, g_plane, b_plane) -> float:
    h, w = len(r_plane), len(r_plane[0])
    rg, yb = [], []
    for i in range(h):
        for j in range(w):
            r, g, b = float(r_plane[i][j]), float(g_plane[i][j]), float(b_plane[i][j])
            rg.append(r - g)
            yb.append(0.5 * (r + g) - b)
    n = len(rg)

    def mean(xs):
        return sum(xs) / n

    def pstd(xs):
        m = mean(xs)
        return math.sqrt(sum((x - m) ** 2 for x in xs) / n)

    return math.sqrt(pstd(rg) ** 2 + pstd(yb) ** 2) + 0.3 * math.sqrt(
        mean(rg) ** 2 + mean(yb) ** 2
    )


def sobel_magnitude_loop(luma):
    kx = [[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]]
    ky = [[-1, -2, -1], [0, 0, 0], [1, 2, 1]]
    h, w = len(luma), len(luma[0])
    out = []
    for i in range(1, h - 1):
        row = []
        for j in range(1, w - 1):
            gx = gy = 0.0
            for di in (-1, 0, 1):
                for dj in (-1, 0, 1):
                    # convolution flips the kernel
                    gx += kx[1 - di][1 - dj] * float(luma[i + di][j + dj])
                    gy += ky[1 - di][1 - dj] * float(luma[i + di][j + dj])
            row.append(math.sqrt(gx * gx + gy * gy))
        out.append(row)
    return out


def pstd_flat(rows) -> float:
    flat = [v for row in rows for v in row]
    m = sum(flat) / len(flat)
    return math.sqrt(sum((v - m) ** 2 for v in flat) / len(flat))


def si_ti_loop(lumas):
    si = max(pstd_flat(sobel_magnitude_loop(y)) for y in lumas)
    if len(lumas) < 2:
        return si, 0.0
    ti = 0.0
    for a, b in zip(lumas[:-1], lumas[1:]):
        diff = [
            [float(b[i][j]) - float(a[i][j]) for j in range(len(a[0]))]
            for i in range(len(a))
        ]
        ti = max(ti, pstd_flat(diff))
    return si, ti


# -- correlations -----------------------------------------------------------

def pearson_loop(x, y) -> float:
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    cov = sum((x[i] - mx) * (y[i] - my) for i in range(n))
    vx = sum((x[i] - mx) ** 2 for i in range(n))
    vy = sum((y[i] - my) ** 2 for i in range(n))
    return cov / math.sqrt(vx * vy)


def average_ranks_loop(values):
    n = len(values)
    ranks = [0.0] * n
    order = sorted(range(n), key=lambda i: values[i])
    i = 0
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg_rank = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg_rank
        i = j + 1
    return ranks


def spearman_loop(x, y) -> float:
    return pearson_loop(average_ranks_loop(list(x)), average_ranks_loop(list(y)))


# -- bicubic ----------------------------------------------------------------

def catmull_rom_weight(t: float, a: float = -0.5) -> float:
    t = abs(t)
    if t <= 1.0:
        return (a + 2.0) * t**3 - (a + 3.0) * t**2 + 1.0
    if t < 2.0:
        return a * t**3 - 5.0 * a * t**2 + 8.0 * a * t - 4.0 * a
    return 0.0


def bicubic_resize_loop(plane, new_w: int, new_h: int):
    """Direct 2-D evaluation of the 4x4 kernel sum, edge-clamped."""
    src_h, src_w = len(plane), len(plane[0])
    out = [[0] * new_w for _ in range(new_h)]
    for oy in range(new_h):
        sy = (oy + 0.5) * (src_h / new_h) - 0.5
        by = math.floor(sy)
        for ox in range(new_w):
            sx = (ox + 0.5) * (src_w / new_w) - 0.5
            bx = math.floor(sx)
            acc = 0.0
            for ty in range(by - 1, by + 3):
                wy = catmull_rom_weight(sy - ty)
                cy = min(max(ty, 0), src_h - 1)
                for tx in range(bx - 1, bx + 3):
                    wx = catmull_rom_weight(sx - tx)
                    cx = min(max(tx, 0), src_w - 1)
                    acc += wy * wx * float(plane[cy][cx])
            out[oy][ox] = min(max(int(math.floor(acc + 0.5)), 0), 255)
    return out


# -- BT.601 exact rational matrix -------------------------------------------

def bt601_rgb_to_ycbcr_exact(r: int, g: int, b: int):
    from fractions import Fraction

    fr, fg, fb = Fraction(r), Fraction(g), Fraction(b)
    kr, kg, kb = Fraction(299, 1000), Fraction(587, 1000), Fraction(114, 1000)
    y_full = kr * fr + kg * fg + kb * fb
    y = 16 + Fraction(219, 255) * y_full
    cb = 128 + Fraction(224, 255) * (fb - y_full) / (2 * (1 - kb))
    cr = 128 + Fraction(224, 255) * (fr - y_full) / (2 * (1 - kr))
    return float(y), float(cb), float(cr)


# -- SVR: slow projected-subgradient oracle ----------------------------------
#
# A target-level projected-subgradient descent on w (the bias is eliminated
# by exact 1-D minimization each step), followed by a local enumeration of
# the piecewise-quadratic pieces near the incumbent (the objective is
# piecewise quadratic; each piece's minimum is one small linear solve).
# Never sees the solver under test.

def svr_primal_objective(X, y, w, b, C, epsilon) -> float:
    r = X @ w + b - y
    return float(0.5 * np.dot(w, w) + C * np.maximum(0.0, np.abs(r) - epsilon).sum())


def _best_bias(z, y, epsilon):
    """Exact 1-D minimization of the hinge loss over the bias."""
    candidates = np.concatenate([y - z - epsilon, y - z + epsilon])
    r = z[None, :] + candidates[:, None] - y[None, :]
    losses = np.maximum(0.0, np.abs(r) - epsilon).sum(axis=1)
    return float(candidates[int(np.argmin(losses))])


def _solve_piece(X, y, C, epsilon, state):
    """KKT solve for one piece: 'act' points pinned to the tube boundary,
    'out' points contribute fixed hinge slopes, 'in' points contribute 0."""
    n, d = X.shape
    act = [(i, st[1]) for i, st in enumerate(state) if st[0] == "act"]
    sigma_out = np.zeros(n)
    for i, st in enumerate(state):
        if st[0] == "out":
            sigma_out[i] = st[1]
    k = len(act)
    size = d + 1 + k
    M = np.zeros((size, size))
    rhs = np.zeros(size)
    M[:d, :d] = np.eye(d)
    for col, (i, _) in enumerate(act):
        M[:d, d + 1 + col] = X[i]
    rhs[:d] = -C * (X.T @ sigma_out)
    M[d, d + 1 :] = 1.0
    rhs[d] = -C * sigma_out.sum()
    for row, (i, s) in enumerate(act):
        M[d + 1 + row, :d] = X[i]
        M[d + 1 + row, d] = 1.0
        rhs[d + 1 + row] = y[i] + s * epsilon
    sol = np.linalg.lstsq(M, rhs, rcond=None)[0]
    return sol[:d], float(sol[d])


def _classify(r, epsilon, tol):
    state = []
    for ri in r:
        gap = abs(ri) - epsilon
        if abs(gap) <= tol:
            state.append(("act", 1.0 if ri >= 0 else -1.0))
        elif gap > 0:
            state.append(("out", 1.0 if ri > 0 else -1.0))
        else:
            state.append(("in", 0.0))
    return state


def _flip_options(st):
    kind, s = st
    if kind == "act":
        return [("in", 0.0), ("out", s)]
    if kind == "out":
        return [("act", s)]
    return [("act", 1.0), ("act", -1.0)]


def _polish(X, y, C, epsilon, w_best, b_best, f_best):
    import itertools

    n, _ = X.shape
    scale = max(epsilon, float(np.abs(y).max()), 1e-3)
    for _ in range(12):
        improved = False
        r = X @ w_best + b_best - y
        for tol in (3e-2, 1e-2, 3e-3, 1e-3, 1e-4):
            base = _classify(r, epsilon, tol)
            band = [i for i in range(n) if abs(abs(r[i]) - epsilon) <= 0.05 * scale]
            variants = [base]
            for i in band:
                for opt in _flip_options(base[i]):
                    v = list(base)
                    v[i] = opt
                    variants.append(v)
            for i, j in itertools.combinations(band, 2):
                for oi in _flip_options(base[i]):
                    for oj in _flip_options(base[j]):
                        v = list(base)
                        v[i] = oi
                        v[j] = oj
                        variants.append(v)
            for v in variants:
                try:
                    w2, b2 = _solve_piece(X, y, C, epsilon, v)
                except np.linalg.LinAlgError:
                    continue
                f2 = svr_primal_objective(X, y, w2, b2, C, epsilon)
                if f2 < f_best - 1e-15:
                    f_best, w_best, b_best = f2, w2, b2
                    improved = True
        if not improved:
            break
    return w_best, b_best, f_best


def _level_descent(X, y, C, epsilon, w0, radius, iterations):
    w = np.asarray(w0, dtype=np.float64).copy()
    b = _best_bias(X @ w, y, epsilon)
    f_best = svr_primal_objective(X, y, w, b, C, epsilon)
    w_best, b_best = w.copy(), b
    delta = max(0.1 * abs(f_best), 1e-8)
    path, budget = 0.0, radius
    for _ in range(iterations):
        z = X @ w
        b = _best_bias(z, y, epsilon)
        f = svr_primal_objective(X, y, w, b, C, epsilon)
        if f < f_best - 1e-16:
            f_best, w_best, b_best = f, w.copy(), b
            path = 0.0
        r = z + b - y
        s = np.where(np.abs(r) > epsilon, np.sign(r), 0.0)
        g = w + C * (X.T @ s)
        gg = float(g @ g)
        if gg < 1e-20:
            break
        step = (f - (f_best - delta)) / gg
        w = w - step * g
        norm = np.linalg.norm(w)
        if norm > radius:
            w = w * (radius / norm)
        path += abs(step) * math.sqrt(gg)
        if path > budget:
            delta = max(delta / 2.0, 1e-13)
            path = 0.0
            w = w_best.copy()
    return _polish(X, y, C, epsilon, w_best, b_best, f_best)


def svr_subgradient_solve(X, y, C, epsilon, iterations=8_000):
    """Independent slow solver; returns (w, b, objective)."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n, d = X.shape
    # ridge least-squares warm start (closed form, independent)
    A = np.hstack([X, np.ones((n, 1))])
    theta = np.linalg.solve(A.T @ A + 1e-6 * np.eye(d + 1), A.T @ y)
    # P(w*) <= P(0, b0) bounds 0.5 * ||w*||^2, giving the projection radius
    b0 = _best_bias(np.zeros(n), y, epsilon)
    p_zero = svr_primal_objective(X, y, np.zeros(d), b0, C, epsilon)
    radius = math.sqrt(2.0 * p_zero) + 1.0
    best = None
    for w0 in (theta[:d], np.zeros(d)):
        w, b, f = _level_descent(X, y, C, epsilon, w0, radius, iterations)
        if best is None or f < best[2]:
            best = (w, b, f)
    return best


# -- BSQ: dense trapezoid oracle ---------------------------------------------

def bsq_trapezoid_loop(test_points, ref_points, samples=200_001) -> float:
    """BSQ-rate via dense trapezoid integration of the same log-linear
    bitrate model (independent interpolation + integration code)."""

    def prepare(points):
        pts = sorted(points)
        qualities = []
        best = -math.inf
        for _, q in pts:
            best = max(best, q)
            qualities.append(best)
        log_b = [math.log2(b) for b, _ in pts]
        # keep the first (cheapest) point of every flat quality run
        keep_q, keep_lb = [], []
        for q, lb in zip(qualities, log_b):
            if not keep_q or q > keep_q[-1]:
                keep_q.append(q)
                keep_lb.append(lb)
        return keep_q, keep_lb

    def interp(qs, lbs, q):
        if q <= qs[0]:
            return lbs[0]
        if q >= qs[-1]:
            return lbs[-1]
        for i in range(len(qs) - 1):
            if qs[i] <= q <= qs[i + 1]:
                t = (q - qs[i]) / (qs[i + 1] - qs[i])
                return lbs[i] + t * (lbs[i + 1] - lbs[i])
        raise AssertionError("unreachable")

    tq, tlb = prepare(test_points)
    rq, rlb = prepare(ref_points)
    lo = max(tq[0], rq[0])
    hi = min(tq[-1], rq[-1])
    assert hi > lo
    qs = [lo + (hi - lo) * i / (samples - 1) for i in range(samples)]

    def integral(curve_q, curve_lb):
        values = [2.0 ** interp(curve_q, curve_lb, q) for q in qs]
        total = 0.0
        for i in range(samples - 1):
            total += 0.5 * (values[i] + values[i + 1]) * (qs[i + 1] - qs[i])
        return total

    return integral(tq, tlb) / integral(rq, rlb)


# -- Bradley-Terry sampling ---------------------------------------------------

def sample_votes(abilities, votes_per_pair, rng):
    """Win counts sampled from the Bradley-Terry model; returns W matrix."""
    k = len(abilities)
    W = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            p = abilities[i] / (abilities[i] + abilities[j])
            wins_i = rng.binomial(votes_per_pair, p)
            W[i, j] = wins_i
            W[j, i] = votes_per_pair - wins_i
    return W
