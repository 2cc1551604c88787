"""Command-line interface.

Subcommands:
  associate  run the cross-view association on a dataset, write results and
             (when ground truth is present) metrics
  simulate   generate a synthetic frame-pair dataset with ground truth
  sweep      run a grid of configurations over one dataset, one metrics row each

Exit codes: 0 success, 1 partial (some frames had no feasible hypothesis),
2 invalid input. All outputs are deterministic given files, seed and flags;
the worker count never affects results.
"""

from __future__ import annotations

import argparse
import itertools
import json
import logging
import math
import sys

from . import evaluator, ingestion, locator, simulator
from .types import Config

log = logging.getLogger("crossview")


def _frame_result(pair: ingestion.FramePair, cfg: Config, jobs: int) -> dict:
    out = {"id": pair.frame_id}
    try:
        res = locator.associate(list(pair.top), list(pair.hor), pair.meta, cfg, jobs=jobs)
    except locator.NoFeasibleHypothesisError:
        log.warning("frame %r: no feasible hypothesis", pair.frame_id)
        out.update({"feasible": False})
        return out
    w = res.hypothesis.wearer_index
    out.update(
        {
            "feasible": True,
            "wearer_index": w,
            "wearer_id": pair.top[w].id,
            "theta_deg": math.degrees(res.hypothesis.theta),
            "phi": res.best.cost,
            "mu": res.best.mu,
            "pairs": [[t, h] for t, h in res.best.pairs],
            "candidate_ranking": [
                [pair.top[i].id, cost if math.isfinite(cost) else None]
                for i, cost in res.candidate_ranking
            ],
        }
    )
    return out


def _score_frames(frames, results):
    """FrameMetrics for every frame with non-empty ground truth."""
    ids, metrics = [], []
    for pair, res in zip(frames, results):
        if not pair.has_ground_truth or not pair.gt_pairs:
            continue
        if not res.get("feasible"):
            continue
        rank = 0
        if pair.gt_wearer is not None:
            ranking = res["candidate_ranking"]
            rank = next(
                i + 1 for i, (wid, _) in enumerate(ranking) if wid == pair.gt_wearer
            )
        metrics.append(
            evaluator.score_frame(
                predicted_pairs=res["pairs"],
                gt_pairs=pair.gt_pairs,
                predicted_wearer=res["wearer_id"],
                true_wearer=pair.gt_wearer,
                cmc_rank=rank if rank else 1,
            )
        )
        ids.append(pair.frame_id)
    return ids, metrics


def cmd_associate(args) -> int:
    frames = ingestion.load_dataset(args.dataset)
    cfg = ingestion.load_config(args.config) if args.config else Config()
    results = [_frame_result(pair, cfg, args.jobs) for pair in frames]
    with open(args.out, "w") as fh:
        json.dump({"frames": results}, fh, indent=1)
        fh.write("\n")
    log.info("wrote %d frame results to %s", len(results), args.out)

    ids, metrics = _score_frames(frames, results)
    if metrics:
        batch = evaluator.aggregate(metrics)
        csv_path = str(args.out) + ".metrics.csv"
        evaluator.write_metrics_csv(csv_path, ids, metrics, batch)
        log.info(
            "metrics over %d frames: prec_avg=%.3f reca_avg=%.3f wearer_acc=%.3f (%s)",
            len(metrics), batch.prec_avg, batch.reca_avg, batch.wearer_accuracy, csv_path,
        )
    return 1 if any(not r.get("feasible") for r in results) else 0


def _scene_params(raw: dict) -> tuple[simulator.SceneParams, simulator.NoiseModel]:
    raw = dict(raw)
    noise_raw = raw.pop("noise", {})
    if "alpha_deg" in raw:
        raw["alpha"] = math.radians(raw.pop("alpha_deg"))
    if "fov_margin_deg" in raw:
        raw["fov_margin"] = math.radians(raw.pop("fov_margin_deg"))
    if "area_size" in raw:
        raw["area_size"] = tuple(raw["area_size"])
    try:
        return simulator.SceneParams(**raw), simulator.NoiseModel(**noise_raw)
    except TypeError as e:
        raise simulator.InvalidParamsError(str(e)) from e


def cmd_simulate(args) -> int:
    raw = {}
    if args.params:
        try:
            with open(args.params) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise ingestion.SchemaError(f"cannot read params file: {e}") from e
    params, noise = _scene_params(raw)
    import numpy as np

    seeds = np.random.SeedSequence(args.seed).generate_state(2 * max(args.n_scenes, 1))
    frames = []
    width = max(4, len(str(max(args.n_scenes - 1, 0))))
    for i in range(args.n_scenes):
        scene = simulator.generate_scene(params, int(seeds[2 * i]))
        top, hor, gt_pairs, meta = simulator.render_views(
            scene, noise, int(seeds[2 * i + 1])
        )
        frames.append(
            ingestion.FramePair(
                frame_id=f"scene_{i:0{width}d}",
                top=tuple(top),
                hor=tuple(hor),
                meta=meta,
                gt_pairs=tuple(gt_pairs),
                gt_wearer=scene.wearer_id,
            )
        )
    ingestion.save_dataset(frames, args.out)
    log.info("wrote %d synthetic frames to %s", len(frames), args.out)
    return 0


_SWEEP_KEYS = ingestion._CONFIG_KEYS


def cmd_sweep(args) -> int:
    frames = ingestion.load_dataset(args.dataset)
    try:
        with open(args.sweep_spec) as fh:
            spec = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ingestion.SchemaError(f"cannot read sweep spec: {e}") from e
    if not isinstance(spec, dict) or "grid" not in spec:
        raise ingestion.SchemaError("sweep spec must be an object with a 'grid' field")
    base = ingestion.config_from_dict(spec.get("base", {}))
    grid = spec["grid"]
    if not isinstance(grid, dict) or not grid:
        raise ingestion.SchemaError("sweep 'grid' must be a non-empty object")
    unknown = set(grid) - _SWEEP_KEYS
    if unknown:
        raise ingestion.SchemaError(f"unknown sweep grid keys: {sorted(unknown)}")

    keys = sorted(grid)
    rows = []
    for values in itertools.product(*(grid[k] for k in keys)):
        overrides = dict(zip(keys, values))
        cfg = ingestion.config_from_dict(overrides, base=base)
        results = [_frame_result(pair, cfg, args.jobs) for pair in frames]
        ids, metrics = _score_frames(frames, results)
        if not metrics:
            raise ingestion.SchemaError("sweep requires a dataset with ground truth")
        batch = evaluator.aggregate(metrics)
        row = dict(overrides)
        row.update(
            prec_avg=batch.prec_avg,
            reca_avg=batch.reca_avg,
            prec_at_1=batch.prec_at_1,
            reca_at_1=batch.reca_at_1,
            wearer_accuracy=batch.wearer_accuracy,
        )
        rows.append(row)
        log.info("sweep %s -> prec_avg=%.3f reca_avg=%.3f", overrides, batch.prec_avg, batch.reca_avg)

    import csv

    metric_cols = ["prec_avg", "reca_avg", "prec_at_1", "reca_at_1", "wearer_accuracy"]
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(keys + metric_cols)
        for row in rows:
            writer.writerow(
                [row[k] for k in keys] + [f"{row[c]:.6f}" for c in metric_cols]
            )
    log.info("wrote %d sweep rows to %s", len(rows), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crossview",
        description="Associate people across overhead and egocentric detections.",
    )
    parser.add_argument("--log-level", default="info",
                        choices=["debug", "info", "warning", "error"])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("associate", help="run association on a dataset")
    p.add_argument("dataset")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--out", required=True, help="results JSON path")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_associate)

    p = sub.add_parser("simulate", help="generate a synthetic dataset")
    p.add_argument("--params", help="JSON scene/noise parameter file")
    p.add_argument("--out", required=True)
    p.add_argument("--n-scenes", type=int, default=220)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run a configuration grid over a dataset")
    p.add_argument("dataset")
    p.add_argument("sweep_spec")
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level.upper()),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (ingestion.SchemaError, simulator.InvalidParamsError) as e:
        log.error("%s", e)
        return 2
    except FileNotFoundError as e:
        log.error("file not found: %s", e)
        return 2


if __name__ == "__main__":
    sys.exit(main())
