import math

import pytest

from crossview.types import (
    CameraHypothesis,
    Config,
    ConfigError,
    HorDetection,
    HorImageMeta,
    MatchResult,
    TopDetection,
    VectorEntry,
    VectorSet,
)


class TestConfig:
    def test_defaults_valid(self):
        cfg = Config()
        assert cfg.rho == 25.0
        assert cfg.lam == 0.015
        assert cfg.beta == pytest.approx(math.radians(2.0))
        assert cfg.delta_theta == pytest.approx(math.radians(1.0))

    @pytest.mark.parametrize("alpha", [0.0, -1.0, math.pi, 4.0])
    def test_alpha_out_of_range_rejected(self, alpha):
        with pytest.raises(ConfigError):
            Config(alpha=alpha)

    @pytest.mark.parametrize("rho", [1.0, 0.5, -2.0])
    def test_rho_not_above_one_rejected(self, rho):
        with pytest.raises(ConfigError):
            Config(rho=rho)

    def test_bad_variant_rejected(self):
        with pytest.raises(ConfigError):
            Config(variant="nope")

    def test_cot_half_fov_right_angle(self):
        # alpha = pi/2: cot(pi/4) = 1
        assert Config(alpha=math.pi / 2).cot_half_fov == pytest.approx(1.0)


class TestDetections:
    def test_top_requires_finite(self):
        with pytest.raises(ConfigError):
            TopDetection(id=1, pos=(math.nan, 0.0))

    def test_hor_requires_positive_height(self):
        with pytest.raises(ConfigError):
            HorDetection(id=1, cx=10.0, h=0.0)

    def test_meta_requires_positive_width(self):
        with pytest.raises(ConfigError):
            HorImageMeta(width=0)


class TestCameraHypothesis:
    def test_theta_range_enforced(self):
        with pytest.raises(ConfigError):
            CameraHypothesis(0, (0.0, 0.0), 2 * math.pi)
        with pytest.raises(ConfigError):
            CameraHypothesis(0, (0.0, 0.0), -0.1)


class TestVectorSet:
    def test_construction_sorts_by_x(self):
        entries = (
            VectorEntry("a", 0.5, 1.0),
            VectorEntry("b", -0.5, 2.0),
            VectorEntry("c", 0.0, 3.0),
        )
        vs = VectorSet(entries)
        assert [e.source_id for e in vs.entries] == ["b", "c", "a"]

    def test_tie_break_is_deterministic(self):
        entries = (
            VectorEntry("z", 0.0, 2.0),
            VectorEntry("a", 0.0, 1.0),
            VectorEntry("m", 0.0, 1.0),
        )
        # ties broken by y, then by source id
        assert [e.source_id for e in VectorSet(entries).entries] == ["a", "m", "z"]
        shuffled = (entries[2], entries[0], entries[1])
        assert VectorSet(shuffled) == VectorSet(entries)

    def test_duplicate_ids_rejected(self):
        with pytest.raises(ConfigError):
            VectorSet((VectorEntry("a", 0.0, 1.0), VectorEntry("a", 0.5, 1.0)))

    def test_entry_range_checks(self):
        with pytest.raises(ConfigError):
            VectorEntry("a", 1.5, 1.0)
        with pytest.raises(ConfigError):
            VectorEntry("a", 0.0, 0.0)


class TestMatchResult:
    def test_gamma_defaults_to_pair_count(self):
        r = MatchResult(pairs=(("t1", "h1"), ("t2", "h2")), mu=1.0, cost=0.5)
        assert r.gamma == 2

    def test_non_injective_pairs_rejected(self):
        with pytest.raises(ConfigError):
            MatchResult(pairs=(("t1", "h1"), ("t1", "h2")), mu=1.0, cost=0.5)
        with pytest.raises(ConfigError):
            MatchResult(pairs=(("t1", "h1"), ("t2", "h1")), mu=1.0, cost=0.5)

    def test_infinite_cost_with_pairs_rejected(self):
        with pytest.raises(ConfigError):
            MatchResult(pairs=(("t1", "h1"),), mu=1.0, cost=math.inf)
