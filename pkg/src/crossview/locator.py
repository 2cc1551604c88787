"""Exhaustive search for the wearer and view angle.

Every top-view detection is tried as the camera wearer and, for each, the
view angle is scanned over a uniform grid starting at 0. The hypothesis with
the minimum matching cost wins; per-candidate best costs are kept for CMC
evaluation. Results are deterministic regardless of worker count: ties pick
the smallest wearer index, then the smallest angle.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .horview import build_hor_vector
from .matcher import match
from .topview import build_top_vector
from .types import (
    CameraHypothesis,
    Config,
    HorDetection,
    HorImageMeta,
    MatchResult,
    TopDetection,
    VectorSet,
)

TWO_PI = 2.0 * math.pi


class NoFeasibleHypothesisError(RuntimeError):
    """Every (wearer, angle) hypothesis yielded an infinite matching cost."""


class UnknownWearerError(ValueError):
    """The queried wearer index is not part of the candidate ranking."""


@dataclass(frozen=True)
class AssociationResult:
    """Outcome of the hypothesis search for one frame pair."""

    best: MatchResult
    hypothesis: CameraHypothesis
    #: (wearer_index, best cost over all angles), ascending by cost.
    candidate_ranking: tuple[tuple[int, float], ...]
    #: best angle per wearer index, aligned with the top-detection list.
    best_theta: tuple[float, ...]
    #: number of (wearer, angle) hypothesis evaluations performed.
    evaluations: int


def theta_grid(delta_theta: float) -> np.ndarray:
    """Uniform angle grid over [0, 2*pi) with the given step, starting at 0."""
    count = math.ceil(TWO_PI / delta_theta)
    return np.arange(count) * delta_theta


def evaluate_hypothesis(
    top: list[TopDetection], vh: VectorSet, wearer: int, theta: float, cfg: Config
) -> MatchResult:
    """Reference evaluation of a single (wearer, angle) hypothesis."""
    hyp = CameraHypothesis(
        wearer_index=wearer, position=top[wearer].pos, theta=theta
    )
    vt = build_top_vector(top, hyp, cfg)
    return match(vt, vh, cfg)


def _scan_candidate_numpy(top, vh, wearer, thetas, cfg) -> np.ndarray:
    costs = np.empty(len(thetas))
    for t, theta in enumerate(thetas):
        costs[t] = evaluate_hypothesis(top, vh, wearer, float(theta), cfg).cost
    return costs


def associate(
    top: list[TopDetection],
    hor: list[HorDetection],
    meta: HorImageMeta,
    cfg: Config,
    jobs: int = 1,
    backend: str | None = None,
) -> AssociationResult:
    """Search all (wearer, angle) hypotheses and return the best association.

    ``jobs`` parallelizes over wearer candidates; it never changes the
    result. ``backend`` forces "numba" or "numpy" (default: numba when
    available, unless CROSSVIEW_DISABLE_NUMBA is set).

    Raises NoFeasibleHypothesisError when no hypothesis produces any pairs.
    """
    if not top:
        raise ValueError("top detections must be non-empty")
    if not hor:
        raise ValueError("horizontal detections must be non-empty")
    if backend is None:
        backend = "numba" if _kernels.NUMBA_ENABLED else "numpy"
    if backend == "numba" and not _kernels.NUMBA_ENABLED:
        raise ValueError("numba backend requested but numba is unavailable")

    vh = build_hor_vector(hor, meta)
    thetas = theta_grid(cfg.delta_theta)
    n = len(top)

    pos = np.array([d.pos for d in top], dtype=float)
    hx = np.asarray(vh.xs)
    hy = np.asarray(vh.ys)
    hy_mm = _kernels.minmax_scale(hy)

    def scan(wearer: int) -> np.ndarray:
        if backend == "numba":
            return _kernels.scan_thetas_numba(pos, wearer, thetas, hx, hy, hy_mm, cfg)
        return _scan_candidate_numpy(top, vh, wearer, thetas, cfg)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            all_costs = list(pool.map(scan, range(n)))
    else:
        all_costs = [scan(w) for w in range(n)]

    # The kernel only selects the angle; the winner cost and pairing are
    # recomputed through the reference path so every reported number comes
    # from a single code path.
    per_candidate: list[tuple[int, float, float, MatchResult]] = []
    for w in range(n):
        costs = all_costs[w]
        t = int(np.argmin(costs))  # first minimum: smallest angle on ties
        theta = float(thetas[t])
        if math.isinf(costs[t]):
            result = MatchResult(pairs=(), mu=0.0, cost=math.inf)
        else:
            result = evaluate_hypothesis(top, vh, w, theta, cfg)
        per_candidate.append((w, result.cost, theta, result))

    ranking = sorted(per_candidate, key=lambda c: (c[1], c[0]))
    best_w, best_cost, best_theta_val, best_result = ranking[0]
    if math.isinf(best_cost):
        raise NoFeasibleHypothesisError("no hypothesis produced a feasible matching")

    hypothesis = CameraHypothesis(
        wearer_index=best_w, position=top[best_w].pos, theta=best_theta_val
    )
    return AssociationResult(
        best=best_result,
        hypothesis=hypothesis,
        candidate_ranking=tuple((w, cost) for w, cost, _, _ in ranking),
        best_theta=tuple(c[2] for c in per_candidate),
        evaluations=n * len(thetas),
    )


def cmc_ranking(result: AssociationResult, true_wearer: int) -> int:
    """1-based position of the true wearer in the candidate ranking."""
    for rank, (w, _) in enumerate(result.candidate_ranking, start=1):
        if w == true_wearer:
            return rank
    raise UnknownWearerError(f"wearer index {true_wearer} not in ranking")
