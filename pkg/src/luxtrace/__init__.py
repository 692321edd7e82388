"""luxtrace: a deterministic, CPU-parallel path tracer for glTF scenes.

Pipeline: glTF ingest -> SAH BVH -> progressive Monte Carlo integration with
an OpenPBR-subset material model -> neutral tone mapping -> PNG.  Same seed,
same image, for any worker-thread count.
"""
from . import _parallel  # noqa: F401  must import before numba is touched

from .geometry import (Aabb, Hit, Ray, Triangle, TriangleBuffer,
                       aabb_surface_area, aabb_union, normalize,
                       ray_aabb_intersect, ray_triangle_intersect,
                       triangle_bounds, vec3)
from .rng import PcgState, next_unit_real, pcg_next_u32, pcg_seed, seed_stream
from .bvh import (BuildStats, Bvh, brute_force_intersect_batch, build_bvh,
                  intersect_any, intersect_scene, intersect_scene_batch,
                  intersect_scene_counted, traversal_counts_batch,
                  validate_bvh)
from .material import (BsdfSample, OpenPbrParams, cosine_sample_hemisphere,
                       emitted_radiance, eval_bsdf, fresnel_schlick, ggx_ndf,
                       ggx_sample_half_vector, pack_materials, pdf_bsdf,
                       sample_bsdf, smith_g2)
from .scene import (CameraConfig, EnvironmentConfig, MaterialMap,
                    RenderConfig, SceneDescription, SceneError,
                    flatten_scene, generate_smooth_normals, load_gltf,
                    load_render_config, load_scene)
from .integrator import (RenderResult, RenderSettings, environment_radiance,
                         generate_camera_ray, render_image,
                         render_progressive, trace_radiance)
from .tonemap import (linear_to_srgb, pbr_neutral_tonemap, quantize_to_u8,
                      srgb_to_linear, tonemap_to_u8, write_linear_dump,
                      write_png)
from .bench import (BenchmarkReport, BenchRow, auto_framing_camera,
                    format_ms, load_benchmark_scene, run_benchmark,
                    summarize_runs)
from .procgen import bumpy_sphere, bumpy_sphere_glb, icosphere, icosphere_glb, save_glb
from ._parallel import set_worker_count, thread_cap

__version__ = "0.1.0"

__all__ = [
    "Aabb", "Hit", "Ray", "Triangle", "TriangleBuffer",
    "aabb_surface_area", "aabb_union", "normalize",
    "ray_aabb_intersect", "ray_triangle_intersect", "triangle_bounds", "vec3",
    "PcgState", "next_unit_real", "pcg_next_u32", "pcg_seed", "seed_stream",
    "BuildStats", "Bvh", "brute_force_intersect_batch", "build_bvh",
    "intersect_any", "intersect_scene", "intersect_scene_batch",
    "intersect_scene_counted", "traversal_counts_batch", "validate_bvh",
    "BsdfSample", "OpenPbrParams", "cosine_sample_hemisphere",
    "emitted_radiance", "eval_bsdf", "fresnel_schlick", "ggx_ndf",
    "ggx_sample_half_vector", "pack_materials", "pdf_bsdf", "sample_bsdf",
    "smith_g2",
    "CameraConfig", "EnvironmentConfig", "MaterialMap", "RenderConfig",
    "SceneDescription", "SceneError", "flatten_scene",
    "generate_smooth_normals", "load_gltf", "load_render_config", "load_scene",
    "RenderResult", "RenderSettings", "environment_radiance",
    "generate_camera_ray", "render_image", "render_progressive",
    "trace_radiance",
    "linear_to_srgb", "pbr_neutral_tonemap", "quantize_to_u8",
    "srgb_to_linear", "tonemap_to_u8", "write_linear_dump", "write_png",
    "BenchmarkReport", "BenchRow", "auto_framing_camera", "format_ms",
    "load_benchmark_scene", "run_benchmark", "summarize_runs",
    "bumpy_sphere", "bumpy_sphere_glb", "icosphere", "icosphere_glb",
    "save_glb",
    "set_worker_count", "thread_cap",
]
