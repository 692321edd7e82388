"""Benchmark harness: times BVH construction and full trace passes over a
set of scenes and reports mean ± sample standard deviation per phase.

Methodology notes baked into the harness:
- scene parsing is never timed (build timing brackets only build_bvh);
- trace timing brackets only the sampling loop (image encode excluded);
- a configurable number of warmup runs per phase is discarded so JIT and
  cache effects stay out of the statistics;
- scenes without any camera/light configuration get a deterministic
  auto-framing camera and a fixed gradient environment so benchmark numbers
  are comparable run to run.
"""
from __future__ import annotations

import json
import platform
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bvh import build_bvh
from .geometry import TriangleBuffer
from .integrator import RenderSettings, render_progressive
from .scene import (CameraConfig, EnvironmentConfig, MaterialMap,
                    SceneDescription, flatten_scene, load_gltf)

PHASE_BUILD = "bvh_build"
PHASE_TRACE = "trace"

BENCH_ENVIRONMENT = EnvironmentConfig.gradient(zenith=(0.5, 0.6, 0.9),
                                               horizon=(0.9, 0.85, 0.8))


def summarize_runs(samples) -> tuple[float, float]:
    """Arithmetic mean and sample standard deviation (n−1 denominator) of a
    sequence of millisecond timings."""
    values = [float(v) for v in samples]
    if len(values) < 2:
        raise ValueError("at least 2 runs required for stddev")
    return statistics.mean(values), statistics.stdev(values)


def format_ms(mean_ms: float, stddev_ms: float) -> str:
    """One timing cell, e.g. '327.57 ms ± 0.56 ms'."""
    return f"{mean_ms:.2f} ms ± {stddev_ms:.2f} ms"


@dataclass(frozen=True)
class BenchRow:
    triangle_count: int
    phase: str                      # PHASE_BUILD or PHASE_TRACE
    mean_ms: float
    stddev_ms: float
    run_count: int


@dataclass
class BenchmarkReport:
    machine: str
    rows: list[BenchRow] = field(default_factory=list)
    settings: dict = field(default_factory=dict)

    def format_table(self) -> str:
        """Fixed-width text table; one row per (scene, phase)."""
        header = f"{'triangles':>12}  {'phase':<10}  {'time':<24}  {'runs':>5}"
        rule = "-" * len(header)
        lines = [f"machine: {self.machine}", header, rule]
        for row in self.rows:
            lines.append(f"{row.triangle_count:>12,}  {row.phase:<10}  "
                         f"{format_ms(row.mean_ms, row.stddev_ms):<24}  "
                         f"{row.run_count:>5}")
        return "\n".join(lines)

    def to_json_document(self) -> dict:
        return {
            "machine": self.machine,
            "settings": dict(self.settings),
            "rows": [{
                "triangle_count": row.triangle_count,
                "phase": row.phase,
                "mean_ms": row.mean_ms,
                "stddev_ms": row.stddev_ms,
                "run_count": row.run_count,
            } for row in self.rows],
        }

    def write_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json_document(), indent=2)
                              + "\n")


def machine_label() -> str:
    return f"{platform.platform()} / python {platform.python_version()}"


def auto_framing_camera(triangles: TriangleBuffer, width: int = 512,
                        height: int = 512,
                        vertical_fov_deg: float = 45.0) -> CameraConfig:
    """Deterministic camera on the +z axis framing the scene's bounding
    sphere with a small margin."""
    pts = np.vstack([triangles.v0, triangles.v1, triangles.v2])
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    center = 0.5 * (lo + hi)
    radius = max(float(np.linalg.norm(hi - lo)) * 0.5, 1e-6)
    half_fov = np.radians(vertical_fov_deg) * 0.5
    # the horizontal fov is wider for width >= height, so the vertical one
    # binds; back off a little so nothing clips
    distance = radius / np.tan(half_fov) * 1.15
    position = center + np.array([0.0, 0.0, distance])
    return CameraConfig(position=position, look_at=center,
                        vertical_fov_deg=vertical_fov_deg,
                        width=width, height=height)


def load_benchmark_scene(path, width: int = 512,
                         height: int = 512) -> SceneDescription:
    """Ingest one glTF file with the default material map, the fixed
    benchmark environment, and an auto-framing camera."""
    doc = load_gltf(path)
    placeholder = CameraConfig(position=(0.0, 0.0, 1.0),
                               look_at=(0.0, 0.0, 0.0),
                               width=width, height=height)
    scene = flatten_scene(doc, MaterialMap(), placeholder, BENCH_ENVIRONMENT)
    scene.camera = auto_framing_camera(scene.triangles, width, height)
    return scene


def run_benchmark(scene_paths, runs: int = 30, spp: int = 100,
                  warmup: int = 2, width: int = 512, height: int = 512,
                  max_depth: int = 5, seed: int = 0,
                  threads: int | None = None,
                  progress=None) -> BenchmarkReport:
    """Time BVH build and full trace over each scene.

    Per scene: ``warmup`` discarded runs then ``runs`` timed runs of each
    phase.  Scene parsing happens once per scene, outside all timing.
    ``progress(message)`` receives one line per completed phase.
    """
    if runs < 2:
        raise ValueError("at least 2 runs required for stddev")
    if warmup < 0:
        raise ValueError("warmup must be >= 0")

    report = BenchmarkReport(
        machine=machine_label(),
        settings={"runs": runs, "spp": spp, "warmup": warmup,
                  "width": width, "height": height, "max_depth": max_depth,
                  "seed": seed})

    render_settings = RenderSettings(samples_per_pixel=spp,
                                     max_depth=max_depth, seed=seed)
    for path in scene_paths:
        scene = load_benchmark_scene(path, width, height)
        n_triangles = len(scene.triangles)

        build_times = []
        bvh = None
        for i in range(warmup + runs):
            start = time.perf_counter()
            bvh = build_bvh(scene.triangles)
            elapsed = (time.perf_counter() - start) * 1000.0
            if i >= warmup:
                build_times.append(elapsed)
        mean_ms, stddev_ms = summarize_runs(build_times)
        report.rows.append(BenchRow(n_triangles, PHASE_BUILD,
                                    mean_ms, stddev_ms, runs))
        if progress is not None:
            progress(f"{path}: {PHASE_BUILD} {format_ms(mean_ms, stddev_ms)}"
                     f" over {runs} runs")

        trace_times = []
        for i in range(warmup + runs):
            result = render_progressive(scene, render_settings, bvh=bvh,
                                        threads=threads)
            if i >= warmup:
                trace_times.append(result.elapsed_ms)
        mean_ms, stddev_ms = summarize_runs(trace_times)
        report.rows.append(BenchRow(n_triangles, PHASE_TRACE,
                                    mean_ms, stddev_ms, runs))
        if progress is not None:
            progress(f"{path}: {PHASE_TRACE} {format_ms(mean_ms, stddev_ms)}"
                     f" over {runs} runs")
    return report
