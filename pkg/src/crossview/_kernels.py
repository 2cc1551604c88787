"""Hot kernels for the camera-hypothesis search.

``scan_thetas`` evaluates one wearer candidate against the whole view-angle
grid and returns the matching cost per angle. The numba build fuses
projection, occlusion filtering, sorting, scale estimation, DP alignment,
pruning and the cost into one jitted loop; a pure-numpy fallback composes the
reference modules instead.

Set ``CROSSVIEW_DISABLE_NUMBA=1`` to force the fallback (it is also used
automatically when numba is unavailable). Backends agree to float rounding;
results within one backend are deterministic.

Variant codes: 0 full, 1 xy-naive, 2 x-only, 3 y-only-naive.
"""

from __future__ import annotations

import math
import os

import numpy as np

VARIANT_CODES = {"full": 0, "xy-naive": 1, "x-only": 2, "y-only-naive": 3}

_DISABLED = os.environ.get("CROSSVIEW_DISABLE_NUMBA", "").strip() not in ("", "0")

if not _DISABLED:
    try:
        from numba import njit
        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover
        NUMBA_ENABLED = False
else:
    NUMBA_ENABLED = False

if not NUMBA_ENABLED:
    def njit(*args, **kwargs):  # noqa: D103 - plain passthrough decorator
        def wrap(f):
            return f
        if args and callable(args[0]):
            return args[0]
        return wrap


@njit(cache=True, nogil=True)
def _scan_thetas_impl(
    pos, w, thetas, hx, hy, hy_mm,
    cot_denom, beta, rho, lam, x_thr,
    mirror, occl_on, variant, exclude_wearer,
):
    N = pos.shape[0]
    M = hx.shape[0]
    T = thetas.shape[0]
    phis = np.empty(T)

    xt = np.empty(N)
    yt = np.empty(N)
    gg = np.empty(N)
    order = np.empty(N, np.int64)
    keep = np.empty(N, np.bool_)
    D = np.empty((N, M))
    C = np.empty((N, M))
    path_i = np.empty(N + M, np.int64)
    path_j = np.empty(N + M, np.int64)
    best_j = np.empty(N, np.int64)
    best_i = np.empty(M, np.int64)

    for t in range(T):
        theta = thetas[t]
        ax = math.cos(theta)
        ay = math.sin(theta)
        if mirror:
            vx, vy = -ay, ax
        else:
            vx, vy = ay, -ax

        # project: front half-plane, field-of-view test via |x| <= 1
        k = 0
        for i in range(N):
            if exclude_wearer and i == w:
                continue
            dx = pos[i, 0] - pos[w, 0]
            dy = pos[i, 1] - pos[w, 1]
            if dx == 0.0 and dy == 0.0:
                continue
            depth = dx * ax + dy * ay
            if depth <= 0.0:
                continue
            lateral = dx * vx + dy * vy
            x = (lateral / depth) / cot_denom
            if x < -1.0 or x > 1.0:
                continue
            xt[k] = x
            yt[k] = depth
            gg[k] = math.atan2(depth, lateral)
            k += 1
        if k == 0:
            phis[t] = np.inf
            continue
        K = k

        # occlusion: greedy ascending depth, stable on ties
        if occl_on:
            for i in range(K):
                order[i] = i
            for i in range(1, K):
                oi = order[i]
                key = yt[oi]
                j = i - 1
                while j >= 0 and yt[order[j]] > key:
                    order[j + 1] = order[j]
                    j -= 1
                order[j + 1] = oi
            for i in range(K):
                keep[i] = False
            for a in range(K):
                oi = order[a]
                ok = True
                for b in range(K):
                    if keep[b] and abs(gg[oi] - gg[b]) < beta:
                        ok = False
                        break
                if ok:
                    keep[oi] = True
            k = 0
            for i in range(K):
                if keep[i]:
                    xt[k] = xt[i]
                    yt[k] = yt[i]
                    k += 1
            K = k

        # sort ascending by x (ties by y), insertion sort on parallel arrays
        for i in range(1, K):
            xk = xt[i]
            yk = yt[i]
            j = i - 1
            while j >= 0 and (xt[j] > xk or (xt[j] == xk and yt[j] > yk)):
                xt[j + 1] = xt[j]
                yt[j + 1] = yt[j]
                j -= 1
            xt[j + 1] = xk
            yt[j + 1] = yk

        # depth scale
        use_x = variant != 3
        use_y = variant != 2
        mu = 1.0
        if variant == 1 or variant == 3:
            lo = yt[0]
            hi = yt[0]
            for i in range(1, K):
                if yt[i] < lo:
                    lo = yt[i]
                if yt[i] > hi:
                    hi = yt[i]
            if hi == lo:
                for i in range(K):
                    yt[i] = 0.0
            else:
                for i in range(K):
                    yt[i] = (yt[i] - lo) / (hi - lo)
            yh = hy_mm
        else:
            yh = hy
            if variant == 0:
                s = 0.0
                cnt = 0
                for i in range(K):
                    bj = 0
                    bd = abs(xt[i] - hx[0])
                    for j in range(1, M):
                        d = abs(xt[i] - hx[j])
                        if d < bd:
                            bd = d
                            bj = j
                    if bd < x_thr:
                        s += hy[bj] / yt[i]
                        cnt += 1
                if cnt == 0:
                    phis[t] = np.inf
                    continue
                mu = s / cnt

        # dissimilarity
        for i in range(K):
            for j in range(M):
                d = 0.0
                if use_x:
                    d += lam * abs(xt[i] - hx[j])
                if use_y:
                    d += abs(mu * yt[i] - yh[j])
                D[i, j] = d

        # DP cumulative costs
        C[0, 0] = D[0, 0]
        for j in range(1, M):
            C[0, j] = C[0, j - 1] + D[0, j]
        for i in range(1, K):
            C[i, 0] = C[i - 1, 0] + D[i, 0]
            for j in range(1, M):
                m = C[i - 1, j - 1]
                if C[i - 1, j] < m:
                    m = C[i - 1, j]
                if C[i, j - 1] < m:
                    m = C[i, j - 1]
                C[i, j] = D[i, j] + m

        # backtrack, ties prefer diagonal > down > right
        plen = 0
        i = K - 1
        j = M - 1
        path_i[plen] = i
        path_j[plen] = j
        plen += 1
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
            path_i[plen] = i
            path_j[plen] = j
            plen += 1

        # prune to one-to-one (path stored end-to-start; walk it forward)
        for i in range(K):
            best_j[i] = -1
        for p in range(plen - 1, -1, -1):
            i = path_i[p]
            j = path_j[p]
            if best_j[i] < 0 or D[i, j] < D[i, best_j[i]]:
                best_j[i] = j
        for j in range(M):
            best_i[j] = -1
        for i in range(K):
            j = best_j[i]
            if j >= 0 and (best_i[j] < 0 or D[i, j] < D[best_i[j], j]):
                best_i[j] = i

        # matching cost
        sx = 0.0
        sy = 0.0
        gamma = 0
        for j in range(M):
            i = best_i[j]
            if i >= 0:
                gamma += 1
                if use_x:
                    sx += abs(xt[i] - hx[j])
                if use_y:
                    sy += abs(mu * yt[i] - yh[j])
        L = K if K > M else M
        phis[t] = (1.0 / gamma) * rho ** (L / gamma) * (lam * sx + sy)

    return phis


def scan_thetas_numba(pos, w, thetas, hx, hy, hy_mm, cfg) -> np.ndarray:
    """Cost-per-angle scan for one wearer candidate using the jitted kernel."""
    return _scan_thetas_impl(
        pos, w, thetas, hx, hy, hy_mm,
        cfg.cot_half_fov, cfg.beta, cfg.rho, cfg.lam, cfg.ransac_x_threshold,
        cfg.mirror, cfg.occlusion_filtering,
        VARIANT_CODES[cfg.variant], cfg.exclude_wearer,
    )


def minmax_scale(y: np.ndarray) -> np.ndarray:
    """Min-max scale to [0, 1]; constant input maps to zeros."""
    lo, hi = y.min(), y.max()
    if hi == lo:
        return np.zeros_like(y)
    return (y - lo) / (hi - lo)
