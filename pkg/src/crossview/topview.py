"""Top-view vector representation.

Given a camera hypothesis (wearer location O and bearing theta), every other
subject P maps to a normalized lateral coordinate and a depth:

    x_top = cot<OP, V> / cot((pi - alpha) / 2)
    y_top = |OP| * sin<OP, V>

where V is the camera "right" direction. The focal length cancels out of the
normalized form. Subjects outside the field of view (|x_top| > 1), behind the
camera, or hidden behind a nearer subject within the occlusion tolerance are
excluded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .types import CameraHypothesis, Config, Point, TopDetection, VectorEntry, VectorSet


class CoincidentPointError(ValueError):
    """Subject position coincides with the hypothesized camera location."""


@dataclass(frozen=True)
class TopProjection:
    """A projected subject: its vector entry plus raw geometry.

    raw_depth is the unnormalized depth (pixels); angle_to_right is the
    angle between OP and the camera right direction V, in [0, pi].
    """

    entry: VectorEntry
    raw_depth: float
    angle_to_right: float


def camera_axes(theta: float, mirror: bool = False) -> tuple[Point, Point]:
    """Unit optical-axis and right direction for a bearing theta.

    With image coordinates x right / y down, the axis is (cos t, sin t) and
    the right direction is the axis rotated a quarter turn; ``mirror`` flips
    the rotation sense for mirrored overhead footage.
    """
    ax, ay = math.cos(theta), math.sin(theta)
    if mirror:
        return (ax, ay), (-ay, ax)
    return (ax, ay), (ay, -ax)


def project_subject(
    p: TopDetection, hyp: CameraHypothesis, cfg: Config
) -> TopProjection | None:
    """Project one subject into the hypothesized camera's normalized frame.

    Returns None when the subject is not visible: behind the camera or
    outside the field of view. The field-of-view boundary itself is visible
    (|x_top| = 1 is legal). Raises CoincidentPointError when the subject sits
    exactly at the camera location.
    """
    dx = p.pos[0] - hyp.position[0]
    dy = p.pos[1] - hyp.position[1]
    if dx == 0.0 and dy == 0.0:
        raise CoincidentPointError(f"subject {p.id!r} coincides with the camera location")
    (ax, ay), (vx, vy) = camera_axes(hyp.theta, cfg.mirror)
    depth = dx * ax + dy * ay  # forward component
    if depth <= 0.0:
        return None
    lateral = dx * vx + dy * vy
    x = (lateral / depth) / cfg.cot_half_fov
    if x < -1.0 or x > 1.0:
        return None
    angle = math.atan2(depth, lateral)
    return TopProjection(
        entry=VectorEntry(source_id=p.id, x=x, y=depth),
        raw_depth=depth,
        angle_to_right=angle,
    )


def filter_occlusions(
    projections: list[TopProjection], beta: float
) -> list[TopProjection]:
    """Drop subjects hidden behind a nearer subject.

    Two subjects whose bearings from the camera differ by less than beta are
    considered collinear; the deeper one is invisible. The sweep is greedy in
    ascending depth, so the nearest subject always survives and removals are
    decided against survivors only. Output preserves input order.
    """
    order = sorted(range(len(projections)), key=lambda i: projections[i].raw_depth)
    kept: list[int] = []
    for i in order:
        gi = projections[i].angle_to_right
        if all(abs(gi - projections[j].angle_to_right) >= beta for j in kept):
            kept.append(i)
    kept_set = set(kept)
    return [p for i, p in enumerate(projections) if i in kept_set]


def build_top_vector(
    dets: list[TopDetection], hyp: CameraHypothesis, cfg: Config
) -> VectorSet:
    """Top-view vector representation of all visible, unoccluded subjects.

    The wearer's own detection is excluded (configurable), invisible subjects
    are dropped, occlusions filtered, and the survivors sorted ascending by x.
    An empty VectorSet is a legal result.
    """
    projections: list[TopProjection] = []
    for i, det in enumerate(dets):
        if cfg.exclude_wearer and i == hyp.wearer_index:
            continue
        if det.pos == hyp.position:
            # Only reachable with wearer exclusion disabled or duplicate
            # positions; such a point has no direction and is not visible.
            continue
        proj = project_subject(det, hyp, cfg)
        if proj is not None:
            projections.append(proj)
    if cfg.occlusion_filtering:
        projections = filter_occlusions(projections, cfg.beta)
    return VectorSet(tuple(p.entry for p in projections))
