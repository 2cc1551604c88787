"""Matching one top-view vector set against a horizontal-view vector set.

The pipeline for a single camera hypothesis:

1. estimate the depth scale mu with a RANSAC-style inlier average,
2. build the dissimilarity matrix D[i][j] = lam*|dx| + |mu*y_top - y_hor|,
3. find the minimal monotonic path through D by dynamic programming,
4. prune the path to a strictly one-to-one pairing,
5. score the pairing with the cost phi = (1/gamma) * rho^(L/gamma) * residuals.

The rho^(L/gamma) term rewards pairings that cover more of the larger set,
which is what lets the cost discriminate between camera hypotheses.
"""

from __future__ import annotations

import math

import numpy as np

from .types import Config, MatchResult, VectorSet


class EmptyMatrixError(ValueError):
    """Dynamic-programming alignment requires a non-empty matrix."""


def estimate_scale(vt: VectorSet, vh: VectorSet, x_threshold: float) -> float | None:
    """Robust scale factor mu making mu*y_top comparable to y_hor.

    For each top entry the nearest horizontal entry by |x| distance is a
    candidate; candidates closer than x_threshold are inliers and mu is the
    mean of their y_hor / y_top ratios. Returns None when there are no
    inliers. The nearest-neighbor search is one-directional (top to hor), so
    two top entries may share one inlier partner.
    """
    if len(vt) == 0 or len(vh) == 0:
        return None
    xt = np.asarray(vt.xs)
    yt = np.asarray(vt.ys)
    xh = np.asarray(vh.xs)
    yh = np.asarray(vh.ys)
    nearest = np.abs(xt[:, None] - xh[None, :]).argmin(axis=1)
    dist = np.abs(xt - xh[nearest])
    inlier = dist < x_threshold
    if not inlier.any():
        return None
    ratios = yh[nearest[inlier]] / yt[inlier]
    return float(ratios.mean())


def build_dissimilarity(vt: VectorSet, vh: VectorSet, mu: float, lam: float) -> np.ndarray:
    """Dissimilarity matrix D[i][j] = lam*|x_top_i - x_hor_j| + |mu*y_top_i - y_hor_j|."""
    xt = np.asarray(vt.xs)[:, None]
    yt = np.asarray(vt.ys)[:, None]
    xh = np.asarray(vh.xs)[None, :]
    yh = np.asarray(vh.ys)[None, :]
    return lam * np.abs(xt - xh) + np.abs(mu * yt - yh)


def _dissimilarity_arrays(
    xt: np.ndarray, yt: np.ndarray, xh: np.ndarray, yh: np.ndarray,
    mu: float, lam: float, use_x: bool, use_y: bool,
) -> np.ndarray:
    d = np.zeros((xt.size, xh.size))
    if use_x:
        d += lam * np.abs(xt[:, None] - xh[None, :])
    if use_y:
        d += np.abs(mu * yt[:, None] - yh[None, :])
    return d


def dp_align(D: np.ndarray) -> list[tuple[int, int]]:
    """Minimal-total monotonic path from D[0, 0] to D[-1, -1].

    Steps are (i+1, j), (i, j+1) and (i+1, j+1); the returned cell list is in
    path order and its total equals the brute-force minimum over all such
    paths. Ties during backtracking prefer diagonal, then down, then right,
    so the output is deterministic.
    """
    D = np.asarray(D, dtype=float)
    if D.ndim != 2 or D.shape[0] == 0 or D.shape[1] == 0:
        raise EmptyMatrixError(f"need a non-empty 2-D matrix, got shape {D.shape}")
    K, M = D.shape
    C = np.empty_like(D)
    C[0, 0] = D[0, 0]
    for j in range(1, M):
        C[0, j] = C[0, j - 1] + D[0, j]
    for i in range(1, K):
        C[i, 0] = C[i - 1, 0] + D[i, 0]
        for j in range(1, M):
            C[i, j] = D[i, j] + min(C[i - 1, j - 1], C[i - 1, j], C[i, j - 1])
    path = [(K - 1, M - 1)]
    i, j = K - 1, M - 1
    while i > 0 or j > 0:
        if i > 0 and j > 0:
            best = C[i - 1, j - 1]
            ni, nj = i - 1, j - 1
            if C[i - 1, j] < best:
                best = C[i - 1, j]
                ni, nj = i - 1, j
            if C[i, j - 1] < best:
                ni, nj = i, j - 1
        elif i > 0:
            ni, nj = i - 1, j
        else:
            ni, nj = i, j - 1
        i, j = ni, nj
        path.append((i, j))
    path.reverse()
    return path


def prune_one_to_one(
    path: list[tuple[int, int]], D: np.ndarray
) -> list[tuple[int, int]]:
    """Reduce a monotonic path to a strictly one-to-one pairing.

    First every top index keeps only its smallest-dissimilarity partner, then
    every horizontal index still claimed by several top indices keeps the
    smallest. Ties keep the earliest cell in path order.
    """
    D = np.asarray(D, dtype=float)
    best_j: dict[int, int] = {}
    for i, j in path:
        if i not in best_j or D[i, j] < D[i, best_j[i]]:
            best_j[i] = j
    best_i: dict[int, int] = {}
    for i in sorted(best_j):
        j = best_j[i]
        if j not in best_i or D[i, j] < D[best_i[j], j]:
            best_i[j] = i
    return sorted((i, j) for j, i in best_i.items())


def matching_cost(
    pairs: list[tuple[int, int]], vt: VectorSet, vh: VectorSet, mu: float, cfg: Config
) -> float:
    """Matching cost phi = (1/gamma) * rho^(L/gamma) * (lam*sum|dx| + sum|mu*y_top - y_hor|).

    pairs are (top index, hor index) into the sorted vector sets and L is
    max(|top set|, |hor set|).
    """
    gamma = len(pairs)
    if gamma == 0:
        return math.inf
    sx = sum(abs(vt.entries[i].x - vh.entries[j].x) for i, j in pairs)
    sy = sum(abs(mu * vt.entries[i].y - vh.entries[j].y) for i, j in pairs)
    L = max(len(vt), len(vh))
    return (1.0 / gamma) * cfg.rho ** (L / gamma) * (cfg.lam * sx + sy)


def _minmax(y: np.ndarray) -> np.ndarray:
    lo, hi = y.min(), y.max()
    if hi == lo:
        return np.zeros_like(y)
    return (y - lo) / (hi - lo)


def match(vt: VectorSet, vh: VectorSet, cfg: Config) -> MatchResult:
    """Full matching of one hypothesis's top-view set against the horizontal set.

    Returns an infeasible result (no pairs, infinite cost) when either set is
    empty or no scale inliers exist, so callers can rank hypotheses uniformly.
    """
    if len(vt) == 0 or len(vh) == 0:
        return MatchResult(pairs=(), mu=0.0, cost=math.inf)
    xt = np.asarray(vt.xs)
    yt = np.asarray(vt.ys)
    xh = np.asarray(vh.xs)
    yh = np.asarray(vh.ys)

    variant = cfg.variant
    use_x = variant != "y-only-naive"
    use_y = variant != "x-only"
    if variant in ("xy-naive", "y-only-naive"):
        yt = _minmax(yt)
        yh = _minmax(yh)
        mu = 1.0
    elif variant == "x-only":
        mu = 1.0
    else:
        est = estimate_scale(vt, vh, cfg.ransac_x_threshold)
        if est is None:
            return MatchResult(pairs=(), mu=0.0, cost=math.inf)
        mu = est

    D = _dissimilarity_arrays(xt, yt, xh, yh, mu, cfg.lam, use_x, use_y)
    path = dp_align(D)
    idx_pairs = prune_one_to_one(path, D)

    gamma = len(idx_pairs)
    sx = sum(abs(xt[i] - xh[j]) for i, j in idx_pairs) if use_x else 0.0
    sy = sum(abs(mu * yt[i] - yh[j]) for i, j in idx_pairs) if use_y else 0.0
    L = max(len(vt), len(vh))
    cost = (1.0 / gamma) * cfg.rho ** (L / gamma) * (cfg.lam * sx + sy)
    pairs = tuple(
        (vt.entries[i].source_id, vh.entries[j].source_id) for i, j in idx_pairs
    )
    return MatchResult(pairs=pairs, mu=mu, cost=cost, gamma=gamma)
