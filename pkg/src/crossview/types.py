"""Shared domain types for cross-view subject association.

All types are immutable after construction and safe to share across
concurrent workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

Point = tuple[float, float]

#: Supported matching variants, mainly useful for ablation sweeps.
#:  - "full":          normalized lateral x plus depth y rescaled by the
#:                     robustly estimated factor mu
#:  - "xy-naive":      x plus y min-max scaled to [0, 1] per view
#:  - "x-only":        lateral x alone
#:  - "y-only-naive":  min-max scaled y alone
VARIANTS = ("full", "xy-naive", "x-only", "y-only-naive")

TWO_PI = 2.0 * math.pi


class ConfigError(ValueError):
    """Raised when a Config (or another core type) is constructed with invalid values."""


def _require_finite(name: str, *values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ConfigError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class TopDetection:
    """A subject detected on the top-view image, reduced to its box-center point.

    Coordinates are top-view image pixels, x right, y down.
    """

    id: object
    pos: Point

    def __post_init__(self) -> None:
        _require_finite("TopDetection.pos", float(self.pos[0]), float(self.pos[1]))
        object.__setattr__(self, "pos", (float(self.pos[0]), float(self.pos[1])))


@dataclass(frozen=True)
class HorDetection:
    """A subject detected on the horizontal-view image.

    Only the box-center column ``cx`` and the box height ``h`` are used;
    the vertical box position carries no information for the matching and
    is deliberately not stored.
    """

    id: object
    cx: float
    h: float

    def __post_init__(self) -> None:
        _require_finite("HorDetection", float(self.cx), float(self.h))
        if self.h <= 0:
            raise ConfigError(f"HorDetection.h must be > 0, got {self.h}")
        object.__setattr__(self, "cx", float(self.cx))
        object.__setattr__(self, "h", float(self.h))


@dataclass(frozen=True)
class HorImageMeta:
    """Metadata of the horizontal-view image; only the width is needed."""

    width: float

    def __post_init__(self) -> None:
        _require_finite("HorImageMeta.width", float(self.width))
        if self.width <= 0:
            raise ConfigError(f"HorImageMeta.width must be > 0, got {self.width}")
        object.__setattr__(self, "width", float(self.width))


@dataclass(frozen=True)
class Config:
    """Method parameters.

    alpha:              horizontal camera field-of-view angle, radians, in (0, pi).
    rho:                pair-count incentive base of the matching cost, > 1.
    lam:                balance factor between lateral and depth residuals, > 0.
    beta:               occlusion tolerance angle, radians.
    delta_theta:        view-angle search step, radians.
    ransac_x_threshold: max |x_top - x_hor| for a scale-estimation inlier pair.
    mirror:             flip the camera "right" direction for mirrored overhead footage.
    exclude_wearer:     drop the wearer's own detection from the top-view vector.
    occlusion_filtering: drop near-collinear deeper subjects from the top-view vector.
    variant:            matching representation, one of VARIANTS.
    """

    alpha: float = math.radians(120.0)
    rho: float = 25.0
    lam: float = 0.015
    beta: float = math.radians(2.0)
    delta_theta: float = math.radians(1.0)
    ransac_x_threshold: float = 0.05
    mirror: bool = False
    exclude_wearer: bool = True
    occlusion_filtering: bool = True
    variant: str = "full"

    def __post_init__(self) -> None:
        _require_finite(
            "Config",
            self.alpha, self.rho, self.lam, self.beta,
            self.delta_theta, self.ransac_x_threshold,
        )
        if not 0.0 < self.alpha < math.pi:
            raise ConfigError(f"alpha must be in (0, pi), got {self.alpha}")
        if self.rho <= 1.0:
            raise ConfigError(f"rho must be > 1, got {self.rho}")
        for name in ("lam", "beta", "delta_theta", "ransac_x_threshold"):
            if getattr(self, name) <= 0.0:
                raise ConfigError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.variant not in VARIANTS:
            raise ConfigError(f"variant must be one of {VARIANTS}, got {self.variant!r}")

    @property
    def cot_half_fov(self) -> float:
        """cot((pi - alpha) / 2), the normalizer mapping cot(angle-to-right) to [-1, 1]."""
        half = 0.5 * (math.pi - self.alpha)
        return math.cos(half) / math.sin(half)


@dataclass(frozen=True)
class CameraHypothesis:
    """A candidate wearer (camera location) and view-angle bearing.

    theta is the bearing of the optical axis measured from the +x image axis
    toward +y (screen-down), in [0, 2*pi).
    """

    wearer_index: int
    position: Point
    theta: float

    def __post_init__(self) -> None:
        if self.wearer_index < 0:
            raise ConfigError(f"wearer_index must be >= 0, got {self.wearer_index}")
        if not 0.0 <= self.theta < TWO_PI:
            raise ConfigError(f"theta must be in [0, 2*pi), got {self.theta}")
        object.__setattr__(self, "position", (float(self.position[0]), float(self.position[1])))


@dataclass(frozen=True)
class VectorEntry:
    """One subject in a view's vector representation.

    x is the normalized lateral coordinate in [-1, 1]; y is the depth
    surrogate (pixels in the top view, inverse pixels in the horizontal view).
    """

    source_id: object
    x: float
    y: float

    def __post_init__(self) -> None:
        _require_finite("VectorEntry", self.x, self.y)
        if not -1.0 <= self.x <= 1.0:
            raise ConfigError(f"VectorEntry.x must be in [-1, 1], got {self.x}")
        if self.y <= 0:
            raise ConfigError(f"VectorEntry.y must be > 0, got {self.y}")


def _entry_key(e: VectorEntry) -> tuple:
    return (e.x, e.y, str(e.source_id))


@dataclass(frozen=True)
class VectorSet:
    """A view's vector representation: entries sorted ascending by x.

    Ties are broken by ascending y, then by source id, so construction is
    deterministic regardless of input order.
    """

    entries: tuple[VectorEntry, ...]

    def __post_init__(self) -> None:
        entries = tuple(sorted(self.entries, key=_entry_key))
        ids = [e.source_id for e in entries]
        if len(set(map(str, ids))) != len(ids):
            raise ConfigError("VectorSet entries must have distinct source ids")
        object.__setattr__(self, "entries", entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def xs(self) -> tuple[float, ...]:
        return tuple(e.x for e in self.entries)

    @property
    def ys(self) -> tuple[float, ...]:
        return tuple(e.y for e in self.entries)


@dataclass(frozen=True)
class MatchResult:
    """One-to-one cross-view pairing for a single camera hypothesis."""

    pairs: tuple[tuple[object, object], ...]  # (top source_id, hor source_id)
    mu: float
    cost: float
    gamma: int = field(default=-1)

    def __post_init__(self) -> None:
        if self.gamma < 0:
            object.__setattr__(self, "gamma", len(self.pairs))
        if self.gamma != len(self.pairs):
            raise ConfigError("gamma must equal the number of pairs")
        tops = [str(t) for t, _ in self.pairs]
        hors = [str(h) for _, h in self.pairs]
        if len(set(tops)) != len(tops) or len(set(hors)) != len(hors):
            raise ConfigError("pairs must be one-to-one in both directions")
        if self.gamma >= 1 and not math.isfinite(self.cost):
            raise ConfigError("cost must be finite when gamma >= 1")

    @property
    def feasible(self) -> bool:
        return math.isfinite(self.cost)
