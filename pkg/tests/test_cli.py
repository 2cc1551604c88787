import json

import pytest

from crossview.cli import main

SIM_PARAMS = {
    "equal_heights": True,
    "alpha_deg": 90.0,
    "noise": {},
}
CFG_90 = {"alpha_deg": 90.0}


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture()
def small_dataset(tmp_path):
    params = write_json(tmp_path / "params.json", SIM_PARAMS)
    out = tmp_path / "data.json"
    rc = main(["simulate", "--params", params, "--out", str(out), "--n-scenes", "4", "--seed", "3"])
    assert rc == 0
    return out


class TestSimulate:
    def test_seed_repeat_byte_identical(self, tmp_path):
        params = write_json(tmp_path / "p.json", SIM_PARAMS)
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["simulate", "--params", params, "--out", str(a), "--n-scenes", "3", "--seed", "7"]) == 0
        assert main(["simulate", "--params", params, "--out", str(b), "--n-scenes", "3", "--seed", "7"]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_zero_scenes(self, tmp_path):
        out = tmp_path / "empty.json"
        assert main(["simulate", "--out", str(out), "--n-scenes", "0"]) == 0
        assert json.loads(out.read_text()) == {"frames": []}

    def test_bad_params_exit_2(self, tmp_path):
        params = write_json(tmp_path / "p.json", {"n_subjects": 1})
        assert main(["simulate", "--params", params, "--out", str(tmp_path / "x.json")]) == 2

    def test_frame_count(self, small_dataset):
        assert len(json.loads(small_dataset.read_text())["frames"]) == 4


class TestAssociate:
    def test_end_to_end_with_metrics(self, tmp_path, small_dataset):
        cfg = write_json(tmp_path / "cfg.json", CFG_90)
        out = tmp_path / "results.json"
        rc = main(["associate", str(small_dataset), "--config", cfg, "--out", str(out)])
        assert rc == 0
        results = json.loads(out.read_text())["frames"]
        assert len(results) == 4
        assert all(r["feasible"] for r in results)
        assert all("theta_deg" in r and "pairs" in r for r in results)
        metrics = (tmp_path / "results.json.metrics.csv").read_text()
        assert "# prec_avg=" in metrics
        assert metrics.count("\n") >= 5

    def test_missing_dataset_exit_2(self, tmp_path):
        rc = main(["associate", str(tmp_path / "nope.json"), "--out", str(tmp_path / "o.json")])
        assert rc == 2

    def test_without_ground_truth_no_metrics(self, tmp_path, small_dataset):
        raw = json.loads(small_dataset.read_text())
        for f in raw["frames"]:
            f.pop("gt_pairs")
            f.pop("gt_wearer")
        bare = write_json(tmp_path / "bare.json", raw)
        cfg = write_json(tmp_path / "cfg.json", CFG_90)
        out = tmp_path / "res.json"
        assert main(["associate", bare, "--config", cfg, "--out", str(out)]) == 0
        assert not (tmp_path / "res.json.metrics.csv").exists()

    def test_jobs_flag_byte_identical(self, tmp_path, small_dataset):
        cfg = write_json(tmp_path / "cfg.json", CFG_90)
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["associate", str(small_dataset), "--config", cfg, "--out", str(a), "--jobs", "1"]) == 0
        assert main(["associate", str(small_dataset), "--config", cfg, "--out", str(b), "--jobs", "8"]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestSweep:
    def test_delta_theta_grid(self, tmp_path, small_dataset):
        spec = write_json(
            tmp_path / "sweep.json",
            {"base": CFG_90, "grid": {"delta_theta_deg": [1.0, 5.0, 10.0]}},
        )
        out = tmp_path / "sweep.csv"
        assert main(["sweep", str(small_dataset), spec, "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("delta_theta_deg,")
        assert len(lines) == 4
        # noiseless data: the finer grid is never worse on average precision
        precs = [float(l.split(",")[1]) for l in lines[1:]]
        assert precs[0] >= precs[1] - 1e-9 >= precs[2] - 1e-9

    def test_variant_grid_rows(self, tmp_path, small_dataset):
        spec = write_json(
            tmp_path / "sweep.json",
            {"base": CFG_90, "grid": {"variant": ["full", "x-only"]}},
        )
        out = tmp_path / "sweep.csv"
        assert main(["sweep", str(small_dataset), spec, "--out", str(out)]) == 0
        assert len(out.read_text().splitlines()) == 3

    def test_invalid_spec_exit_2(self, tmp_path, small_dataset):
        spec = write_json(tmp_path / "sweep.json", {"grid": {"not_a_key": [1]}})
        assert main(["sweep", str(small_dataset), spec, "--out", str(tmp_path / "s.csv")]) == 2

    def test_spec_without_grid_exit_2(self, tmp_path, small_dataset):
        spec = write_json(tmp_path / "sweep.json", {"base": {}})
        assert main(["sweep", str(small_dataset), spec, "--out", str(tmp_path / "s.csv")]) == 2
