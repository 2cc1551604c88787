"""Synthetic ground-plane scenes with an analytic pinhole projector.

Scenes live in metric ground coordinates. The top view is an orthographic
overhead map scaled to pixels; the horizontal view is a pinhole camera at the
wearer's position whose focal length is tied to the image width and the
field-of-view angle, so that noiseless renders are exactly consistent with
the top-view projection geometry. Rendered detection pairs come with ground
truth and serve as the verification oracle for the whole pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .topview import TopProjection, camera_axes, filter_occlusions
from .types import HorDetection, HorImageMeta, Point, TopDetection, VectorEntry

DEFAULT_BETA = math.radians(2.0)


class InvalidParamsError(ValueError):
    """Scene-generation parameters are out of range."""


@dataclass(frozen=True)
class SceneParams:
    """Knobs for random scene generation.

    ``min_visible`` rejects scenes where the wearer sees fewer subjects, and
    ``fov_margin`` rejects scenes with a subject too close to the
    field-of-view boundary (either side), which keeps the noiseless oracle
    well-posed under angle discretization. ``occluder_pairs`` plants subjects
    nearly collinear with existing ones, seen from the wearer, to exercise
    occlusion handling.
    """

    n_subjects: int = 10
    area_size: tuple[float, float] = (20.0, 20.0)  # meters
    height_mean: float = 1.7
    height_sigma: float = 0.1
    height_min: float = 1.0
    equal_heights: bool = False
    pixels_per_meter: float = 20.0
    hor_width: float = 1920.0
    alpha: float = math.radians(90.0)
    min_visible: int = 4
    fov_margin: float = math.radians(1.5)
    occluder_pairs: int = 0
    occlusion_beta: float = DEFAULT_BETA

    def __post_init__(self) -> None:
        if self.n_subjects < 2:
            raise InvalidParamsError("need at least 2 subjects")
        if self.area_size[0] <= 0 or self.area_size[1] <= 0:
            raise InvalidParamsError("area bounds must be positive")
        if not 0.0 < self.alpha < math.pi:
            raise InvalidParamsError("alpha must be in (0, pi)")
        if self.height_mean <= 0 or self.height_min <= 0:
            raise InvalidParamsError("heights must be positive")
        if self.min_visible < 1 or self.min_visible > self.n_subjects - 1:
            raise InvalidParamsError("min_visible must be in [1, n_subjects - 1]")


@dataclass(frozen=True)
class Scene:
    """Ground truth for one synthetic frame pair."""

    subjects: tuple[tuple[int, Point, float], ...]  # (id, position [m], height [m])
    wearer_id: int
    theta_true: float
    pixels_per_meter_top: float
    hor_focal_px: float
    hor_width_px: float
    alpha: float
    seed: int


@dataclass(frozen=True)
class NoiseModel:
    """Detector-error model applied at render time; all defaults noiseless."""

    top_pos_sigma: float = 0.0  # pixels
    hor_cx_sigma: float = 0.0  # pixels
    hor_h_sigma_rel: float = 0.0  # relative box-height error
    height_sigma: float = 0.0  # meters, per-subject height perturbation
    false_negative_rate_top: float = 0.0
    false_negative_rate_hor: float = 0.0
    extra_unshared_top: int = 0
    extra_unshared_hor: int = 0

    def __post_init__(self) -> None:
        for name in ("top_pos_sigma", "hor_cx_sigma", "hor_h_sigma_rel", "height_sigma"):
            if getattr(self, name) < 0:
                raise InvalidParamsError(f"{name} must be non-negative")
        for name in ("false_negative_rate_top", "false_negative_rate_hor"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise InvalidParamsError(f"{name} must be in [0, 1]")


def _visible_projections(
    positions: np.ndarray, wearer: int, theta: float, alpha: float
) -> list[TopProjection]:
    """Front-of-camera, in-field subjects as projections (metric depths)."""
    half = 0.5 * (math.pi - alpha)
    cot_denom = math.cos(half) / math.sin(half)
    (ax, ay), (vx, vy) = camera_axes(theta)
    out = []
    for i in range(len(positions)):
        if i == wearer:
            continue
        dx = positions[i, 0] - positions[wearer, 0]
        dy = positions[i, 1] - positions[wearer, 1]
        depth = dx * ax + dy * ay
        if depth <= 0.0:
            continue
        lateral = dx * vx + dy * vy
        x = (lateral / depth) / cot_denom
        if x < -1.0 or x > 1.0:
            continue
        out.append(
            TopProjection(
                entry=VectorEntry(source_id=i, x=x, y=depth),
                raw_depth=depth,
                angle_to_right=math.atan2(depth, lateral),
            )
        )
    return out


def _near_fov_boundary(
    positions: np.ndarray, wearer: int, theta: float, alpha: float, margin: float
) -> bool:
    (ax, ay), (vx, vy) = camera_axes(theta)
    half = 0.5 * alpha
    for i in range(len(positions)):
        if i == wearer:
            continue
        dx = positions[i, 0] - positions[wearer, 0]
        dy = positions[i, 1] - positions[wearer, 1]
        depth = dx * ax + dy * ay
        lateral = dx * vx + dy * vy
        bearing = abs(math.atan2(lateral, depth))  # 0 on-axis, pi behind
        if abs(bearing - half) < margin:
            return True
    return False


def generate_scene(params: SceneParams, seed: int) -> Scene:
    """Draw a random scene; deterministic for a given seed.

    Subjects are uniform in the area, heights normal around the mean (clamped
    from below), wearer and view angle uniform. Scenes failing the
    ``min_visible`` / ``fov_margin`` well-posedness checks are redrawn.
    """
    rng = np.random.default_rng(seed)
    w_area, h_area = params.area_size
    for _ in range(1000):
        n = params.n_subjects
        positions = rng.uniform((0.0, 0.0), (w_area, h_area), size=(n, 2))
        if params.equal_heights:
            heights = np.full(n, params.height_mean)
        else:
            heights = np.maximum(
                rng.normal(params.height_mean, params.height_sigma, size=n),
                params.height_min,
            )
        wearer = int(rng.integers(n))
        theta = float(rng.uniform(0.0, 2.0 * math.pi))

        visible = _visible_projections(positions, wearer, theta, params.alpha)
        if params.occluder_pairs > 0:
            if len(visible) < params.occluder_pairs:
                continue
            picks = rng.choice(len(visible), size=params.occluder_pairs, replace=False)
            extra_pos = []
            for p in np.sort(picks):
                proj = visible[int(p)]
                i = proj.entry.source_id
                d = positions[i] - positions[wearer]
                r = float(np.hypot(d[0], d[1]))
                bearing = math.atan2(d[1], d[0])
                # place a deeper subject nearly collinear with i from the wearer
                jitter = float(rng.uniform(-0.4, 0.4)) * params.occlusion_beta
                dist = r * float(rng.uniform(1.3, 2.0))
                extra_pos.append(
                    positions[wearer]
                    + dist * np.array([math.cos(bearing + jitter), math.sin(bearing + jitter)])
                )
            positions = np.vstack([positions, np.array(extra_pos)])
            if params.equal_heights:
                extra_h = np.full(len(extra_pos), params.height_mean)
            else:
                extra_h = np.maximum(
                    rng.normal(params.height_mean, params.height_sigma, size=len(extra_pos)),
                    params.height_min,
                )
            heights = np.concatenate([heights, extra_h])
            n = len(positions)
            visible = _visible_projections(positions, wearer, theta, params.alpha)

        unoccluded = filter_occlusions(visible, params.occlusion_beta)
        if len(unoccluded) < params.min_visible:
            continue
        if _near_fov_boundary(positions, wearer, theta, params.alpha, params.fov_margin):
            continue
        if len(np.unique(positions, axis=0)) != n:
            continue

        half = 0.5 * params.alpha
        focal = (params.hor_width / 2.0) / math.tan(half)
        return Scene(
            subjects=tuple(
                (i, (float(positions[i, 0]), float(positions[i, 1])), float(heights[i]))
                for i in range(n)
            ),
            wearer_id=wearer,
            theta_true=theta,
            pixels_per_meter_top=params.pixels_per_meter,
            hor_focal_px=focal,
            hor_width_px=params.hor_width,
            alpha=params.alpha,
            seed=seed,
        )
    raise InvalidParamsError("could not generate a well-posed scene; relax the parameters")


def render_views(
    scene: Scene,
    noise: NoiseModel,
    seed: int,
    beta: float = DEFAULT_BETA,
) -> tuple[list[TopDetection], list[HorDetection], list[tuple[int, int]], HorImageMeta]:
    """Render a scene into detection lists plus ground-truth pairs.

    Top detections are metric positions scaled to pixels; horizontal
    detections exist for subjects in front of the wearer, inside the field of
    view and not hidden behind a nearer subject within ``beta``. Noise,
    false negatives and unshared extra subjects follow the NoiseModel.
    Deterministic per (scene, noise, seed).
    """
    rng = np.random.default_rng(seed)
    positions = np.array([pos for _, pos, _ in scene.subjects])
    heights = np.array([h for _, _, h in scene.subjects])
    ids = [sid for sid, _, _ in scene.subjects]
    n = len(ids)
    wearer = scene.wearer_id
    ppm = scene.pixels_per_meter_top
    f = scene.hor_focal_px
    w_img = scene.hor_width_px

    # top view: overhead map to pixels
    top_noise = rng.normal(0.0, noise.top_pos_sigma, size=(n, 2)) if noise.top_pos_sigma > 0 else np.zeros((n, 2))
    top_drop = rng.random(n) < noise.false_negative_rate_top if noise.false_negative_rate_top > 0 else np.zeros(n, bool)
    top_dets = [
        TopDetection(
            id=ids[i],
            pos=(positions[i, 0] * ppm + top_noise[i, 0], positions[i, 1] * ppm + top_noise[i, 1]),
        )
        for i in range(n)
        if not top_drop[i]
    ]

    # horizontal view: pinhole projection of visible, unoccluded subjects
    height_eff = heights.copy()
    if noise.height_sigma > 0:
        height_eff = np.maximum(height_eff + rng.normal(0.0, noise.height_sigma, size=n), 0.5)
    visible = _visible_projections(positions, wearer, scene.theta_true, scene.alpha)
    unoccluded = filter_occlusions(visible, beta)
    hor_dets: list[HorDetection] = []
    hor_ids: list[int] = []
    for proj in unoccluded:
        i = proj.entry.source_id
        if noise.false_negative_rate_hor > 0 and rng.random() < noise.false_negative_rate_hor:
            continue
        ratio = proj.entry.x * math.tan(0.5 * scene.alpha)  # lateral / depth
        cx = w_img / 2.0 + f * ratio
        h = f * height_eff[i] / proj.raw_depth
        if noise.hor_cx_sigma > 0:
            cx += rng.normal(0.0, noise.hor_cx_sigma)
        if noise.hor_h_sigma_rel > 0:
            h *= max(1.0 + rng.normal(0.0, noise.hor_h_sigma_rel), 0.05)
        hor_dets.append(HorDetection(id=ids[i], cx=cx, h=h))
        hor_ids.append(ids[i])

    # unshared extras
    next_id = max(ids) + 1
    lo = positions.min(axis=0) - 2.0
    hi = positions.max(axis=0) + 2.0
    for _ in range(noise.extra_unshared_top):
        p = rng.uniform(lo, hi)
        top_dets.append(TopDetection(id=next_id, pos=(p[0] * ppm, p[1] * ppm)))
        next_id += 1
    for _ in range(noise.extra_unshared_hor):
        cx = rng.uniform(0.0, w_img)
        h = rng.uniform(0.05, 0.5) * w_img
        hor_dets.append(HorDetection(id=next_id, cx=cx, h=h))
        next_id += 1

    top_id_set = {d.id for d in top_dets}
    gt_pairs = [(sid, sid) for sid in hor_ids if sid in top_id_set]
    return top_dets, hor_dets, gt_pairs, HorImageMeta(width=w_img)


def with_top_scale(scene: Scene, factor: float) -> Scene:
    """Scene with the top-view pixel scale multiplied (drone altitude change)."""
    return replace(scene, pixels_per_meter_top=scene.pixels_per_meter_top * factor)
