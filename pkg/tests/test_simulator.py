import math

import numpy as np
import pytest

from crossview.horview import build_hor_vector
from crossview.simulator import (
    InvalidParamsError,
    NoiseModel,
    Scene,
    SceneParams,
    generate_scene,
    render_views,
    with_top_scale,
)
from crossview.topview import build_top_vector
from crossview.types import CameraHypothesis, Config

NOISELESS = NoiseModel()


def manual_scene(subjects, wearer_id, theta, alpha=math.radians(90.0), width=1000.0):
    return Scene(
        subjects=tuple(subjects),
        wearer_id=wearer_id,
        theta_true=theta,
        pixels_per_meter_top=1.0,
        hor_focal_px=(width / 2.0) / math.tan(0.5 * alpha),
        hor_width_px=width,
        alpha=alpha,
        seed=0,
    )


class TestGenerateScene:
    def test_same_seed_same_scene(self):
        p = SceneParams()
        assert generate_scene(p, 42) == generate_scene(p, 42)

    def test_different_seeds_differ(self):
        p = SceneParams()
        assert generate_scene(p, 1) != generate_scene(p, 2)

    def test_two_subjects(self):
        p = SceneParams(n_subjects=2, min_visible=1)
        scene = generate_scene(p, 0)
        assert len(scene.subjects) == 2
        assert scene.wearer_id in {s[0] for s in scene.subjects}

    def test_mean_height_law_of_large_numbers(self):
        p = SceneParams(n_subjects=6, min_visible=1)
        heights = [
            h for s in range(1000) for _, _, h in generate_scene(p, s).subjects
        ]
        assert abs(np.mean(heights) - 1.7) < 0.05

    def test_positions_in_area_and_distinct(self):
        p = SceneParams(area_size=(8.0, 12.0))
        scene = generate_scene(p, 3)
        pts = np.array([pos for _, pos, _ in scene.subjects])
        assert (pts[:, 0] >= 0).all() and (pts[:, 0] <= 8.0).all()
        assert (pts[:, 1] >= 0).all() and (pts[:, 1] <= 12.0).all()
        assert len(np.unique(pts, axis=0)) == len(pts)

    def test_invalid_params(self):
        with pytest.raises(InvalidParamsError):
            SceneParams(n_subjects=1)
        with pytest.raises(InvalidParamsError):
            SceneParams(alpha=4.0)
        with pytest.raises(InvalidParamsError):
            SceneParams(min_visible=10, n_subjects=10)

    def test_occluder_pairs_create_occlusions(self):
        p = SceneParams(occluder_pairs=2, equal_heights=True)
        scene = generate_scene(p, 0)
        assert len(scene.subjects) == p.n_subjects + 2
        # the rendered horizontal view hides the occluded subjects
        top, hor, gt, meta = render_views(scene, NOISELESS, 1)
        assert len(hor) < len(top)


class TestRenderViews:
    def test_on_axis_subject(self):
        scene = manual_scene(
            [(0, (0.0, 0.0), 1.7), (1, (0.0, 6.0), 1.7)],
            wearer_id=0, theta=math.pi / 2,
        )
        top, hor, gt, meta = render_views(scene, NOISELESS, 0)
        assert len(hor) == 1
        assert hor[0].cx == pytest.approx(500.0)
        assert hor[0].h == pytest.approx(scene.hor_focal_px * 1.7 / 6.0)
        assert gt == [(1, 1)]

    def test_subject_behind_wearer_absent(self):
        scene = manual_scene(
            [(0, (0.0, 0.0), 1.7), (1, (0.0, 6.0), 1.7), (2, (0.0, -6.0), 1.7)],
            wearer_id=0, theta=math.pi / 2,
        )
        top, hor, gt, meta = render_views(scene, NOISELESS, 0)
        assert {d.id for d in top} == {0, 1, 2}
        assert {d.id for d in hor} == {1}

    def test_occluded_subject_absent_from_hor(self):
        scene = manual_scene(
            [(0, (0.0, 0.0), 1.7), (1, (0.0, 3.0), 1.7), (2, (0.0, 9.0), 1.7)],
            wearer_id=0, theta=math.pi / 2,
        )
        top, hor, gt, meta = render_views(scene, NOISELESS, 0)
        assert {d.id for d in hor} == {1}

    def test_deterministic_per_seed(self):
        scene = generate_scene(SceneParams(), 5)
        noise = NoiseModel(top_pos_sigma=2.0, hor_cx_sigma=3.0)
        a = render_views(scene, noise, 9)
        b = render_views(scene, noise, 9)
        assert a == b
        c = render_views(scene, noise, 10)
        assert a != c

    def test_unshared_extras_not_in_ground_truth(self):
        scene = generate_scene(SceneParams(), 5)
        noise = NoiseModel(extra_unshared_top=3, extra_unshared_hor=2)
        top, hor, gt, meta = render_views(scene, noise, 0)
        top0, hor0, gt0, _ = render_views(scene, NOISELESS, 0)
        assert len(top) == len(top0) + 3
        assert len(hor) == len(hor0) + 2
        assert gt == gt0


class TestAnalyticConsistency:
    """The rendered views must agree with the vector-building modules."""

    CFG = Config(alpha=math.radians(90.0))

    def _vectors(self, scene, top, hor, meta):
        idx = {d.id: i for i, d in enumerate(top)}
        hyp = CameraHypothesis(
            wearer_index=idx[scene.wearer_id],
            position=top[idx[scene.wearer_id]].pos,
            theta=scene.theta_true,
        )
        return build_top_vector(top, hyp, self.CFG), build_hor_vector(hor, meta)

    def test_x_consistency_to_1e9(self):
        for s in range(20):
            scene = generate_scene(SceneParams(equal_heights=True), s)
            top, hor, gt, meta = render_views(scene, NOISELESS, s + 100)
            vt, vh = self._vectors(scene, top, hor, meta)
            ht = {e.source_id: e for e in vt.entries}
            hh = {e.source_id: e for e in vh.entries}
            assert set(ht) == set(hh)
            for sid in ht:
                assert ht[sid].x == pytest.approx(hh[sid].x, abs=1e-9)

    def test_y_proportionality_with_equal_heights(self):
        # 1/h is exactly depth / (f * H): one global scale links the views
        for s in range(20):
            scene = generate_scene(SceneParams(equal_heights=True), s)
            top, hor, gt, meta = render_views(scene, NOISELESS, s + 100)
            vt, vh = self._vectors(scene, top, hor, meta)
            ht = {e.source_id: e.y for e in vt.entries}
            hh = {e.source_id: e.y for e in vh.entries}
            ratios = [hh[sid] / ht[sid] for sid in ht]
            assert max(ratios) - min(ratios) < 1e-9 * max(ratios)

    def test_top_scale_helper(self):
        scene = generate_scene(SceneParams(), 0)
        scaled = with_top_scale(scene, 2.0)
        assert scaled.pixels_per_meter_top == scene.pixels_per_meter_top * 2.0
        top, _, _, _ = render_views(scene, NOISELESS, 0)
        top2, _, _, _ = render_views(scaled, NOISELESS, 0)
        for a, b in zip(top, top2):
            assert b.pos[0] == pytest.approx(2.0 * a.pos[0])
            assert b.pos[1] == pytest.approx(2.0 * a.pos[1])


class TestNoiseModel:
    def test_validation(self):
        with pytest.raises(InvalidParamsError):
            NoiseModel(top_pos_sigma=-1.0)
        with pytest.raises(InvalidParamsError):
            NoiseModel(false_negative_rate_hor=1.5)

    def test_false_negatives_shrink_views(self):
        scene = generate_scene(SceneParams(), 7)
        noise = NoiseModel(false_negative_rate_top=0.5, false_negative_rate_hor=0.5)
        top, hor, gt, _ = render_views(scene, noise, 0)
        top0, hor0, gt0, _ = render_views(scene, NOISELESS, 0)
        assert len(top) < len(top0)
        assert set(gt) <= set(gt0)
