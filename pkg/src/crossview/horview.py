"""Horizontal-view vector representation.

Each detected bounding box maps to a normalized lateral coordinate and a
rough depth surrogate:

    x_hor = (cx - W/2) / (W/2)
    y_hor = 1 / h

All detections are included; there is no visibility filtering on this side.
"""

from __future__ import annotations

from .types import HorDetection, HorImageMeta, VectorEntry, VectorSet


class InvalidHeightError(ValueError):
    """A horizontal-view detection has non-positive box height."""


def build_hor_vector(dets: list[HorDetection], meta: HorImageMeta) -> VectorSet:
    """Vector representation of all horizontal-view detections, sorted by x.

    Boxes reaching slightly outside the image are kept; their x is clamped
    to [-1, 1], which preserves ordering.
    """
    half = meta.width / 2.0
    entries = []
    for det in dets:
        if det.h <= 0:
            raise InvalidHeightError(f"detection {det.id!r} has height {det.h}")
        x = (det.cx - half) / half
        x = min(1.0, max(-1.0, x))
        entries.append(VectorEntry(source_id=det.id, x=x, y=1.0 / det.h))
    return VectorSet(tuple(entries))
