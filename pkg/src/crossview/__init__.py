"""Cross-view person association between overhead and egocentric detections.

Associates the same people across a top-view (overhead) detection set and a
horizontal-view (egocentric) detection set by matching the subjects' spatial
distributions, simultaneously recovering the camera wearer's identity and
view angle in the top view.
"""

from ._kernels import NUMBA_ENABLED
from .evaluator import BatchMetrics, FrameMetrics, aggregate, score_frame
from .horview import build_hor_vector
from .ingestion import FramePair, load_config, load_dataset, resolve_by_iou, save_dataset
from .locator import (
    AssociationResult,
    NoFeasibleHypothesisError,
    associate,
    cmc_ranking,
)
from .matcher import (
    build_dissimilarity,
    dp_align,
    estimate_scale,
    match,
    matching_cost,
    prune_one_to_one,
)
from .simulator import NoiseModel, Scene, SceneParams, generate_scene, render_views
from .topview import build_top_vector, filter_occlusions, project_subject
from .types import (
    CameraHypothesis,
    Config,
    HorDetection,
    HorImageMeta,
    MatchResult,
    TopDetection,
    VectorEntry,
    VectorSet,
)

__all__ = [
    "NUMBA_ENABLED",
    "AssociationResult",
    "BatchMetrics",
    "CameraHypothesis",
    "Config",
    "FrameMetrics",
    "FramePair",
    "HorDetection",
    "HorImageMeta",
    "MatchResult",
    "NoFeasibleHypothesisError",
    "NoiseModel",
    "Scene",
    "SceneParams",
    "TopDetection",
    "VectorEntry",
    "VectorSet",
    "aggregate",
    "associate",
    "build_dissimilarity",
    "build_hor_vector",
    "build_top_vector",
    "cmc_ranking",
    "dp_align",
    "estimate_scale",
    "filter_occlusions",
    "generate_scene",
    "load_config",
    "load_dataset",
    "match",
    "matching_cost",
    "project_subject",
    "prune_one_to_one",
    "render_views",
    "resolve_by_iou",
    "save_dataset",
    "score_frame",
]

__version__ = "0.1.0"
