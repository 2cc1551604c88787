"""Dataset and configuration file I/O.

One self-describing JSON format carries frames, detections and optional
ground truth, so simulator output and real detector output flow through
identical code paths. Angles in files are degrees; the in-memory Config uses
radians.

Frame-pair dataset schema::

    {"frames": [{"id": ..., "top": [{"id", "x", "y"}, ...],
                 "hor": [{"id", "cx", "h"}, ...], "hor_width": ...,
                 "gt_pairs": [[top_id, hor_id], ...],   # optional
                 "gt_wearer": top_id}]}                  # optional
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .types import Config, HorDetection, HorImageMeta, TopDetection

Box = tuple[float, float, float, float]  # x1, y1, x2, y2


class SchemaError(ValueError):
    """The dataset or config file violates the expected schema."""


class DuplicateIdError(SchemaError):
    """Two detections in one view of one frame share an id."""


@dataclass(frozen=True)
class FramePair:
    """One top/horizontal frame pair, with optional ground truth."""

    frame_id: object
    top: tuple[TopDetection, ...]
    hor: tuple[HorDetection, ...]
    meta: HorImageMeta
    gt_pairs: tuple[tuple[object, object], ...] | None = None
    gt_wearer: object | None = None

    @property
    def has_ground_truth(self) -> bool:
        return self.gt_pairs is not None


def _number(obj, frame, field) -> float:
    if not isinstance(obj, (int, float)) or isinstance(obj, bool) or not math.isfinite(obj):
        raise SchemaError(f"frame {frame!r}: field {field!r} must be a finite number, got {obj!r}")
    return float(obj)


def _parse_frame(raw: dict) -> FramePair:
    if not isinstance(raw, dict) or "id" not in raw:
        raise SchemaError("each frame must be an object with an 'id' field")
    fid = raw["id"]
    for key in ("top", "hor", "hor_width"):
        if key not in raw:
            raise SchemaError(f"frame {fid!r}: missing field {key!r}")

    top = []
    seen = set()
    for d in raw["top"]:
        if not isinstance(d, dict) or not {"id", "x", "y"} <= d.keys():
            raise SchemaError(f"frame {fid!r}: top detections need 'id', 'x', 'y'")
        if d["id"] in seen:
            raise DuplicateIdError(f"frame {fid!r}: duplicate top id {d['id']!r}")
        seen.add(d["id"])
        top.append(TopDetection(id=d["id"], pos=(_number(d["x"], fid, "x"), _number(d["y"], fid, "y"))))

    hor = []
    seen = set()
    for d in raw["hor"]:
        if not isinstance(d, dict) or not {"id", "cx", "h"} <= d.keys():
            raise SchemaError(f"frame {fid!r}: hor detections need 'id', 'cx', 'h'")
        if d["id"] in seen:
            raise DuplicateIdError(f"frame {fid!r}: duplicate hor id {d['id']!r}")
        seen.add(d["id"])
        h = _number(d["h"], fid, "h")
        if h <= 0:
            raise SchemaError(f"frame {fid!r}: hor detection {d['id']!r} has h <= 0")
        hor.append(HorDetection(id=d["id"], cx=_number(d["cx"], fid, "cx"), h=h))

    meta = HorImageMeta(width=_number(raw["hor_width"], fid, "hor_width"))

    gt_pairs = None
    gt_wearer = raw.get("gt_wearer")
    if "gt_pairs" in raw:
        top_ids = {d.id for d in top}
        hor_ids = {d.id for d in hor}
        pairs = []
        for pair in raw["gt_pairs"]:
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise SchemaError(f"frame {fid!r}: gt_pairs entries must be [top_id, hor_id]")
            t, h = pair
            if t not in top_ids:
                raise SchemaError(f"frame {fid!r}: gt pair references unknown top id {t!r}")
            if h not in hor_ids:
                raise SchemaError(f"frame {fid!r}: gt pair references unknown hor id {h!r}")
            pairs.append((t, h))
        gt_pairs = tuple(pairs)
        if gt_wearer is not None and gt_wearer not in top_ids:
            raise SchemaError(f"frame {fid!r}: gt_wearer {gt_wearer!r} not among top ids")

    return FramePair(
        frame_id=fid, top=tuple(top), hor=tuple(hor), meta=meta,
        gt_pairs=gt_pairs, gt_wearer=gt_wearer,
    )


def load_dataset(path) -> list[FramePair]:
    """Parse and validate a frame-pair dataset; frames ordered by frame id."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except FileNotFoundError as e:
        raise SchemaError(f"dataset file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise SchemaError(f"dataset {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict) or "frames" not in data or not isinstance(data["frames"], list):
        raise SchemaError("dataset must be an object with a 'frames' list")
    frames = [_parse_frame(raw) for raw in data["frames"]]
    frames.sort(key=lambda f: str(f.frame_id))
    return frames


def save_dataset(frames: list[FramePair], path) -> None:
    """Inverse of load_dataset; load(save(x)) is the identity."""
    out = {"frames": []}
    for f in sorted(frames, key=lambda f: str(f.frame_id)):
        raw = {
            "id": f.frame_id,
            "top": [{"id": d.id, "x": d.pos[0], "y": d.pos[1]} for d in f.top],
            "hor": [{"id": d.id, "cx": d.cx, "h": d.h} for d in f.hor],
            "hor_width": f.meta.width,
        }
        if f.gt_pairs is not None:
            raw["gt_pairs"] = [[t, h] for t, h in f.gt_pairs]
        if f.gt_wearer is not None:
            raw["gt_wearer"] = f.gt_wearer
        out["frames"].append(raw)
    with open(path, "w") as fh:
        json.dump(out, fh, indent=1)
        fh.write("\n")


_CONFIG_KEYS = {
    "alpha_deg", "rho", "lambda", "beta_deg", "delta_theta_deg",
    "ransac_x_threshold", "mirror", "exclude_wearer", "occlusion_filtering",
    "variant",
}


def config_from_dict(raw: dict, base: Config | None = None) -> Config:
    """Build a Config from file-format keys (angles in degrees)."""
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise SchemaError(f"unknown config keys: {sorted(unknown)}")
    base = base or Config()
    kwargs = {}
    mapping = {
        "alpha_deg": ("alpha", math.radians),
        "beta_deg": ("beta", math.radians),
        "delta_theta_deg": ("delta_theta", math.radians),
        "rho": ("rho", float),
        "lambda": ("lam", float),
        "ransac_x_threshold": ("ransac_x_threshold", float),
        "mirror": ("mirror", bool),
        "exclude_wearer": ("exclude_wearer", bool),
        "occlusion_filtering": ("occlusion_filtering", bool),
        "variant": ("variant", str),
    }
    for key, (attr, conv) in mapping.items():
        if key in raw:
            kwargs[attr] = conv(raw[key])
    from dataclasses import replace

    return replace(base, **kwargs)


def load_config(path) -> Config:
    """Load a Config from a JSON file mirroring the Config fields by name."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except FileNotFoundError as e:
        raise SchemaError(f"config file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise SchemaError(f"config {path} is not valid JSON: {e}") from e
    if not isinstance(raw, dict):
        raise SchemaError("config file must contain a JSON object")
    return config_from_dict(raw)


def iou(a: Box, b: Box) -> float:
    """Intersection over union of two axis-aligned boxes (x1, y1, x2, y2)."""
    ix = max(0.0, min(a[2], b[2]) - max(a[0], b[0]))
    iy = max(0.0, min(a[3], b[3]) - max(a[1], b[1]))
    inter = ix * iy
    if inter == 0.0:
        return 0.0
    area_a = (a[2] - a[0]) * (a[3] - a[1])
    area_b = (b[2] - b[0]) * (b[3] - b[1])
    return inter / (area_a + area_b - inter)


def resolve_by_iou(
    raw_boxes: list[Box],
    annotated: list[tuple[object, Box]],
    iou_threshold: float = 0.5,
) -> list[tuple[object, Box]]:
    """Assign annotated ids to raw detector boxes by greedy descending IoU.

    A raw box inherits an annotated id only when their IoU strictly exceeds
    the threshold; each annotated id is used at most once and unmatched raw
    boxes are dropped.
    """
    for box in raw_boxes:
        if box[2] <= box[0] or box[3] <= box[1]:
            raise SchemaError(f"raw box {box} has non-positive area")
    for _, box in annotated:
        if box[2] <= box[0] or box[3] <= box[1]:
            raise SchemaError(f"annotated box {box} has non-positive area")
    candidates = []
    for ri, rbox in enumerate(raw_boxes):
        for ai, (aid, abox) in enumerate(annotated):
            v = iou(rbox, abox)
            if v > iou_threshold:
                candidates.append((v, ri, ai))
    candidates.sort(key=lambda c: (-c[0], c[1], c[2]))
    used_raw: set[int] = set()
    used_ann: set[int] = set()
    resolved = []
    for v, ri, ai in candidates:
        if ri in used_raw or ai in used_ann:
            continue
        used_raw.add(ri)
        used_ann.add(ai)
        resolved.append((ri, annotated[ai][0]))
    resolved.sort()
    return [(aid, raw_boxes[ri]) for ri, aid in resolved]
