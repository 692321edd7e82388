"""Command-line front end: ``luxtrace render`` and ``luxtrace bench``.

Exit codes: 0 success, 1 scene/render errors, 2 flag errors.  Timing output
comes in two forms on stdout: human-readable lines and machine-readable
``#timing key=value`` lines (schema in docs/formats.md).
"""
from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace

from . import _parallel  # noqa: F401  (must win the numba import race)
from .bench import run_benchmark
from .bvh import build_bvh
from .integrator import RenderSettings, render_progressive
from .scene import CameraConfig, SceneError, flatten_scene, load_gltf, load_render_config
from .tonemap import tonemap_to_u8, write_linear_dump, write_png


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="luxtrace",
        description="Deterministic CPU path tracer for glTF scenes.")
    sub = parser.add_subparsers(dest="command", required=True)

    render = sub.add_parser("render", help="render a scene to a PNG")
    render.add_argument("--scene", required=True, help="glTF (.gltf/.glb) scene file")
    render.add_argument("--config", required=True, help="render-config JSON (camera, environment, materials)")
    render.add_argument("--out", required=True, help="output PNG path")
    render.add_argument("--spp", type=int, default=100, help="samples per pixel (default 100)")
    render.add_argument("--width", type=int, default=None, help="override image width (default: config value, 512)")
    render.add_argument("--height", type=int, default=None, help="override image height (default: config value, 512)")
    render.add_argument("--max-depth", type=int, default=5, help="ray segment budget per path (default 5)")
    render.add_argument("--seed", type=int, default=0, help="global RNG seed (default 0)")
    render.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")
    render.add_argument("--dump-linear", default=None, metavar="PATH",
                        help="also write the linear radiance buffer as little-endian float32")

    bench = sub.add_parser("bench", help="time BVH build and trace phases over scenes")
    bench.add_argument("--scenes", required=True, nargs="+", help="glTF scene files to benchmark")
    bench.add_argument("--runs", type=int, default=30, help="timed runs per phase (default 30)")
    bench.add_argument("--spp", type=int, default=100, help="samples per pixel per trace run (default 100)")
    bench.add_argument("--warmup", type=int, default=2, help="discarded runs per phase (default 2)")
    bench.add_argument("--width", type=int, default=512, help="image width (default 512)")
    bench.add_argument("--height", type=int, default=512, help="image height (default 512)")
    bench.add_argument("--max-depth", type=int, default=5, help="ray segment budget (default 5)")
    bench.add_argument("--seed", type=int, default=0, help="global RNG seed (default 0)")
    bench.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")
    bench.add_argument("--out", default=None, metavar="PATH",
                       help="write the machine-readable JSON report here")
    return parser


def _cmd_render(args: argparse.Namespace) -> int:
    start = time.perf_counter()
    config = load_render_config(args.config)
    camera = config.camera
    if args.width is not None or args.height is not None:
        camera = replace(camera,
                         width=args.width if args.width is not None else camera.width,
                         height=args.height if args.height is not None else camera.height)
    doc = load_gltf(args.scene)
    scene = flatten_scene(doc, config.materials, camera, config.environment)
    ingest_ms = (time.perf_counter() - start) * 1000.0
    if scene.degenerate_dropped:
        print(f"dropped {scene.degenerate_dropped} degenerate triangles")

    bvh = build_bvh(scene.triangles)
    build_ms = bvh.stats.build_time_ms  # excludes one-time kernel warm-up

    settings = RenderSettings(samples_per_pixel=args.spp,
                              max_depth=args.max_depth, seed=args.seed)
    result = render_progressive(scene, settings, bvh=bvh, threads=args.threads)
    per_sample_ms = result.elapsed_ms / args.spp

    write_png(args.out, tonemap_to_u8(result.image))
    if args.dump_linear is not None:
        write_linear_dump(args.dump_linear, result.image)

    w, h = scene.camera.width, scene.camera.height
    print(f"ingest: {ingest_ms:.1f} ms ({len(scene.triangles)} triangles)")
    print(f"bvh build: {build_ms:.1f} ms ({bvh.stats.node_count} nodes, "
          f"depth {bvh.stats.max_depth})")
    print(f"trace: {result.elapsed_ms:.1f} ms total, {per_sample_ms:.2f} ms "
          f"per sample ({args.spp} spp, {w}x{h}, {result.threads_used} threads)")
    dropped = int(result.invalid_samples.sum())
    if dropped:
        print(f"dropped {dropped} non-finite samples")
    print(f"wrote {args.out}")
    if args.dump_linear is not None:
        print(f"wrote {args.dump_linear}")
    print(f"#timing ingest_ms={ingest_ms:.3f}")
    print(f"#timing bvh_build_ms={build_ms:.3f}")
    print(f"#timing trace_total_ms={result.elapsed_ms:.3f} "
          f"trace_per_sample_ms={per_sample_ms:.4f}")
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    report = run_benchmark(args.scenes, runs=args.runs, spp=args.spp,
                           warmup=args.warmup, width=args.width,
                           height=args.height, max_depth=args.max_depth,
                           seed=args.seed, threads=args.threads,
                           progress=lambda line: print(line, flush=True))
    print()
    print(report.format_table())
    if args.out is not None:
        report.write_json(args.out)
        print(f"wrote {args.out}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "bench" and args.runs < 2:
        parser.error("at least 2 runs required for stddev")
    try:
        if args.command == "render":
            return _cmd_render(args)
        return _cmd_bench(args)
    except (SceneError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
