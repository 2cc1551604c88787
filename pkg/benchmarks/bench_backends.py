"""Timing comparison of the jitted hypothesis-scan kernel vs the numpy path.

Usage:
    python3 benchmarks/bench_backends.py [--scenes 8] [--subjects 10]

Both backends run the identical search (every wearer candidate against the
full 1-degree angle grid); the numpy path composes the reference modules per
angle, the numba path runs the fused kernel. Results are checked to agree
before timings are reported.
"""

import argparse
import math
import time

from crossview import _kernels
from crossview.locator import associate
from crossview.simulator import NoiseModel, SceneParams, generate_scene, render_views
from crossview.types import Config


def build_frames(n_scenes, n_subjects):
    params = SceneParams(n_subjects=n_subjects, equal_heights=True)
    noise = NoiseModel()
    frames = []
    for s in range(n_scenes):
        scene = generate_scene(params, s)
        top, hor, gt, meta = render_views(scene, noise, s + 10000)
        frames.append((top, hor, meta))
    return frames


def time_backend(frames, cfg, backend):
    t0 = time.perf_counter()
    results = [associate(top, hor, meta, cfg, backend=backend) for top, hor, meta in frames]
    return time.perf_counter() - t0, results


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scenes", type=int, default=8)
    ap.add_argument("--subjects", type=int, default=10)
    args = ap.parse_args()

    cfg = Config(alpha=math.radians(90.0))
    frames = build_frames(args.scenes, args.subjects)
    n_hyp = args.subjects * 360

    print(f"{args.scenes} frames, {args.subjects} subjects, {n_hyp} hypotheses/frame")

    if not _kernels.NUMBA_ENABLED:
        print("numba disabled (CROSSVIEW_DISABLE_NUMBA set or numba missing); "
              "timing the numpy path only")
        t_np, _ = time_backend(frames, cfg, "numpy")
        print(f"numpy : {t_np:8.2f} s total  {t_np / len(frames) * 1e3:8.1f} ms/frame")
        return

    # warm up the JIT so compilation is not counted
    associate(*frames[0], cfg, backend="numba")

    t_nb, r_nb = time_backend(frames, cfg, "numba")
    t_np, r_np = time_backend(frames, cfg, "numpy")

    agree = all(a == b for a, b in zip(r_nb, r_np))
    print(f"numba : {t_nb:8.2f} s total  {t_nb / len(frames) * 1e3:8.1f} ms/frame")
    print(f"numpy : {t_np:8.2f} s total  {t_np / len(frames) * 1e3:8.1f} ms/frame")
    print(f"speedup: {t_np / t_nb:.1f}x   results agree: {agree}")


if __name__ == "__main__":
    main()
