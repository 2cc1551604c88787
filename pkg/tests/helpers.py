"""Shared test utilities: brute-force oracles and scene batch runners."""

import math
from dataclasses import replace

import numpy as np

from crossview.evaluator import aggregate, score_frame
from crossview.locator import associate, cmc_ranking
from crossview.simulator import generate_scene, render_views
from crossview.types import Config

CFG90 = Config(alpha=math.radians(90.0))


def brute_force_dp_total(D) -> float:
    """Minimal monotonic-path total by exhaustive enumeration."""
    D = np.asarray(D, dtype=float)
    K, M = D.shape

    def rec(i, j):
        if i == K - 1 and j == M - 1:
            return D[i, j]
        options = []
        if i + 1 < K:
            options.append(rec(i + 1, j))
        if j + 1 < M:
            options.append(rec(i, j + 1))
        if i + 1 < K and j + 1 < M:
            options.append(rec(i + 1, j + 1))
        return D[i, j] + min(options)

    return rec(0, 0)


def raster_iou(a, b) -> float:
    """Unit-cell counting IoU oracle for integer-coordinate boxes."""
    cells_a = {
        (x, y)
        for x in range(int(a[0]), int(a[2]))
        for y in range(int(a[1]), int(a[3]))
    }
    cells_b = {
        (x, y)
        for x in range(int(b[0]), int(b[2]))
        for y in range(int(b[1]), int(b[3]))
    }
    inter = len(cells_a & cells_b)
    union = len(cells_a | cells_b)
    return inter / union


def scene_batch(params, noise, n_scenes, seed0=0, render_offset=10000):
    """Deterministic (scene, top, hor, gt_pairs, meta) tuples."""
    out = []
    for s in range(seed0, seed0 + n_scenes):
        scene = generate_scene(params, s)
        top, hor, gt, meta = render_views(scene, noise, s + render_offset)
        out.append((scene, top, hor, gt, meta))
    return out


def run_batch(batch, cfg, jobs=1):
    """Associate every frame of a batch and aggregate the metrics."""
    frames = []
    for scene, top, hor, gt, meta in batch:
        idx = {d.id: i for i, d in enumerate(top)}
        try:
            res = associate(top, hor, meta, cfg, jobs=jobs)
        except Exception:
            frames.append(
                score_frame((), gt, predicted_wearer=None,
                            true_wearer=scene.wearer_id, cmc_rank=len(top))
            )
            continue
        rank = (
            cmc_ranking(res, idx[scene.wearer_id])
            if scene.wearer_id in idx
            else len(top)
        )
        frames.append(
            score_frame(
                res.best.pairs, gt,
                predicted_wearer=top[res.hypothesis.wearer_index].id,
                true_wearer=scene.wearer_id, cmc_rank=rank,
            )
        )
    return aggregate(frames)


def wearer_recovery_rate(batch, cfg):
    ok = 0
    for scene, top, hor, gt, meta in batch:
        idx = {d.id: i for i, d in enumerate(top)}
        res = associate(top, hor, meta, cfg)
        ok += res.hypothesis.wearer_index == idx[scene.wearer_id]
    return ok / len(batch)


def cfg_with(**overrides) -> Config:
    return replace(CFG90, **overrides)
