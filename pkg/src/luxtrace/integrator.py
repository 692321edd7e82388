"""Monte Carlo path tracing over a flattened scene.

One radiance estimate per (pixel, sample) pair, each with its own counter
stream, accumulated into a per-pixel running mean.  Pixels are independent
parallel work items and own their accumulator slots, so results are
bit-identical for any worker count.

Path loop: ``max_depth`` is the ray-segment budget.  Each iteration
intersects one segment; a miss adds the environment and ends the path, a hit
adds any emission.  The final segment never scatters, so a budget of five
allows at most four surface scatters.  Russian roulette starts at scatter
depth ``rr_start_depth`` with survival probability equal to the largest
throughput component clamped to [0.05, 1]; surviving paths divide throughput
by that probability.  Setting ``rr_start_depth == max_depth`` disables
roulette entirely.
"""
from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field

import numpy as np
from numba import njit, prange

from ._parallel import set_worker_count
from .bvh import STACK_SIZE, Bvh, build_bvh, _traverse_impl
from .geometry import DEFAULT_T_MIN, Ray, _hit_frame, normalize
from .material import pack_materials, _sample_core
from .rng import _seed_stream, _next_unit
from .scene import CameraConfig, EnvironmentConfig, SceneDescription

RR_MIN_SURVIVAL = 0.05
INVALID_SAMPLE_WARN_FRACTION = 1e-4

_ENV_UNIFORM = 0
_ENV_GRADIENT = 1


@dataclass(frozen=True)
class RenderSettings:
    samples_per_pixel: int = 100
    max_depth: int = 5
    rr_start_depth: int = 3
    seed: int = 0
    t_min: float = DEFAULT_T_MIN

    def __post_init__(self) -> None:
        if self.samples_per_pixel < 1:
            raise ValueError("samples_per_pixel must be >= 1")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if not 0 <= self.rr_start_depth <= self.max_depth:
            raise ValueError("rr_start_depth must lie in [0, max_depth]")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.t_min <= 0.0:
            raise ValueError("t_min must be positive")


@dataclass
class RenderResult:
    image: np.ndarray                 # (h, w, 3) float64 linear radiance means
    samples_per_pixel: int
    invalid_samples: np.ndarray       # (h, w) int64 non-finite estimates dropped
    elapsed_ms: float
    threads_used: int


# ---------------------------------------------------------------------------
# camera
# ---------------------------------------------------------------------------

def _camera_pack(camera: CameraConfig) -> np.ndarray:
    """[position, forward, right, up, tan(fov/2), aspect] as a flat array."""
    forward = normalize(camera.look_at - camera.position)
    right = normalize(np.cross(forward, camera.up))
    cam_up = np.cross(right, forward)
    tan_half = math.tan(math.radians(camera.vertical_fov_deg) * 0.5)
    aspect = camera.width / camera.height
    return np.concatenate([camera.position, forward, right, cam_up,
                           [tan_half, aspect]])


@njit(cache=True, error_model="numpy")
def _camera_dir(cam, px, py, jx, jy, width, height):
    """Unit direction through pixel (px, py) jittered by (jx, jy) in [0, 1)^2.
    Screen x grows rightward, screen y downward."""
    sx = 2.0 * (px + jx) / width - 1.0
    sy = 1.0 - 2.0 * (py + jy) / height
    hx = cam[12] * cam[13] * sx      # tan_half * aspect * sx
    hy = cam[12] * sy
    dx = cam[3] + cam[6] * hx + cam[9] * hy
    dy = cam[4] + cam[7] * hx + cam[10] * hy
    dz = cam[5] + cam[8] * hx + cam[11] * hy
    inv = 1.0 / math.sqrt(dx * dx + dy * dy + dz * dz)
    return dx * inv, dy * inv, dz * inv


def generate_camera_ray(camera: CameraConfig, px: int, py: int,
                        jitter: tuple[float, float] = (0.5, 0.5)) -> Ray:
    """The primary ray for integer pixel (px, py); jitter (0.5, 0.5) is the
    pixel center."""
    if not (0 <= px < camera.width and 0 <= py < camera.height):
        raise ValueError(f"pixel ({px}, {py}) outside a "
                         f"{camera.width}x{camera.height} image")
    cam = _camera_pack(camera)
    d = _camera_dir(cam, px, py, float(jitter[0]), float(jitter[1]),
                    camera.width, camera.height)
    return Ray(camera.position.copy(), np.array(d))


# ---------------------------------------------------------------------------
# environment
# ---------------------------------------------------------------------------

def _environment_pack(env: EnvironmentConfig) -> tuple[int, np.ndarray, np.ndarray]:
    if env.kind == "uniform":
        return _ENV_UNIFORM, env.radiance.copy(), env.radiance.copy()
    return _ENV_GRADIENT, env.zenith.copy(), env.horizon.copy()


@njit(cache=True, error_model="numpy")
def _env_radiance(dx, dy, dz, env_kind, env_a, env_b):
    """env_a = uniform radiance or zenith color; env_b = horizon color."""
    if env_kind == _ENV_UNIFORM:
        return env_a[0], env_a[1], env_a[2]
    t = dy
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    return (env_b[0] + (env_a[0] - env_b[0]) * t,
            env_b[1] + (env_a[1] - env_b[1]) * t,
            env_b[2] + (env_a[2] - env_b[2]) * t)


def environment_radiance(env: EnvironmentConfig, direction) -> np.ndarray:
    d = np.asarray(direction, dtype=np.float64)
    kind, a, b = _environment_pack(env)
    return np.array(_env_radiance(d[0], d[1], d[2], kind, a, b))


# ---------------------------------------------------------------------------
# path tracing kernel
# ---------------------------------------------------------------------------

@njit(cache=True, error_model="numpy")
def _trace(ox, oy, oz, dx, dy, dz, state, inc,
           bmin, bmax, left, right, first, count, order,
           v0, v1, v2, n0, n1, n2, mat_index,
           m_bw, m_bc, m_metal, m_sw, m_sc, m_rough, m_ior, m_el, m_ec,
           env_kind, env_a, env_b,
           max_depth, rr_start, t_min, stack_node, stack_t):
    """One radiance estimate.  Returns (r, g, b, state).  The two stack
    buffers back BVH traversal and are reused across calls."""
    lr = lg = lb = 0.0
    tr = tg = tb = 1.0
    for depth in range(max_depth):
        ti, t, u, v = _traverse_impl(bmin, bmax, left, right, first, count,
                                     order, v0, v1, v2, ox, oy, oz, dx, dy, dz,
                                     t_min, math.inf, stack_node, stack_t)
        if ti < 0:
            er, eg, eb = _env_radiance(dx, dy, dz, env_kind, env_a, env_b)
            lr += tr * er
            lg += tg * eg
            lb += tb * eb
            break

        mi = mat_index[ti]
        el = m_el[mi]
        if el > 0.0:
            lr += tr * el * m_ec[mi, 0]
            lg += tg * el * m_ec[mi, 1]
            lb += tb * el * m_ec[mi, 2]

        if depth == max_depth - 1:
            break  # segment budget spent: no scatter off the final hit

        gx, gy, gz, sx, sy, sz, front = _hit_frame(
            dx, dy, dz,
            v0[ti, 0], v0[ti, 1], v0[ti, 2],
            v1[ti, 0], v1[ti, 1], v1[ti, 2],
            v2[ti, 0], v2[ti, 1], v2[ti, 2],
            n0[ti, 0], n0[ti, 1], n0[ti, 2],
            n1[ti, 0], n1[ti, 1], n1[ti, 2],
            n2[ti, 0], n2[ti, 1], n2[ti, 2], u, v)

        u_lobe, state = _next_unit(state, inc)
        u1, state = _next_unit(state, inc)
        u2, state = _next_unit(state, inc)
        valid, wix, wiy, wiz, wr, wg, wb, _pdf, _spike = _sample_core(
            -dx, -dy, -dz, sx, sy, sz,
            m_bw[mi], m_bc[mi, 0], m_bc[mi, 1], m_bc[mi, 2],
            m_metal[mi], m_sw[mi], m_sc[mi, 0], m_sc[mi, 1], m_sc[mi, 2],
            m_rough[mi], m_ior[mi], u_lobe, u1, u2)
        if not valid:
            break
        tr *= wr
        tg *= wg
        tb *= wb
        if tr <= 0.0 and tg <= 0.0 and tb <= 0.0:
            break

        if depth >= rr_start:
            p = tr
            if tg > p:
                p = tg
            if tb > p:
                p = tb
            if p > 1.0:
                p = 1.0
            elif p < RR_MIN_SURVIVAL:
                p = RR_MIN_SURVIVAL
            u_rr, state = _next_unit(state, inc)
            if u_rr >= p:
                break
            tr /= p
            tg /= p
            tb /= p

        ox = ox + t * dx
        oy = oy + t * dy
        oz = oz + t * dz
        dx, dy, dz = wix, wiy, wiz
    return lr, lg, lb, state


@njit(cache=True, parallel=True, error_model="numpy")
def _render_pass(accum, valid_count, invalid_count, sample_start, sample_count,
                 cam, width, height,
                 bmin, bmax, left, right, first, count, order,
                 v0, v1, v2, n0, n1, n2, mat_index,
                 m_bw, m_bc, m_metal, m_sw, m_sc, m_rough, m_ior, m_el, m_ec,
                 env_kind, env_a, env_b,
                 seed, max_depth, rr_start, t_min):
    """Add samples [sample_start, sample_start + sample_count) to every
    pixel's running mean.  Each iteration writes only to its own pixel and
    samples are applied in index order, so results are bit-identical for any
    thread count and any chunking of the sample range."""
    n_pixels = width * height
    for pix in prange(n_pixels):
        py = pix // width
        px = pix - py * width
        stack_node = np.empty(STACK_SIZE, np.int32)
        stack_t = np.empty(STACK_SIZE, np.float64)
        mean_r = accum[py, px, 0]
        mean_g = accum[py, px, 1]
        mean_b = accum[py, px, 2]
        n_valid = valid_count[py, px]
        n_invalid = invalid_count[py, px]
        for s in range(sample_start, sample_start + sample_count):
            state, inc = _seed_stream(np.uint64(pix), np.uint64(s),
                                      np.uint64(seed))
            jx, state = _next_unit(state, inc)
            jy, state = _next_unit(state, inc)
            dx, dy, dz = _camera_dir(cam, px, py, jx, jy, width, height)
            r, g, b, state = _trace(
                cam[0], cam[1], cam[2], dx, dy, dz, state, inc,
                bmin, bmax, left, right, first, count, order,
                v0, v1, v2, n0, n1, n2, mat_index,
                m_bw, m_bc, m_metal, m_sw, m_sc, m_rough, m_ior, m_el, m_ec,
                env_kind, env_a, env_b, max_depth, rr_start, t_min,
                stack_node, stack_t)
            if math.isfinite(r) and math.isfinite(g) and math.isfinite(b):
                n_valid += 1
                mean_r += (r - mean_r) / n_valid
                mean_g += (g - mean_g) / n_valid
                mean_b += (b - mean_b) / n_valid
            else:
                n_invalid += 1
        accum[py, px, 0] = mean_r
        accum[py, px, 1] = mean_g
        accum[py, px, 2] = mean_b
        valid_count[py, px] = n_valid
        invalid_count[py, px] = n_invalid


# ---------------------------------------------------------------------------
# drivers
# ---------------------------------------------------------------------------

def _scene_arrays(scene: SceneDescription, bvh: Bvh):
    tb = scene.triangles
    mats = pack_materials(scene.materials)
    env_kind, env_a, env_b = _environment_pack(scene.environment)
    return ((bvh.bounds_min, bvh.bounds_max, bvh.left_child, bvh.right_child,
             bvh.first_triangle, bvh.triangle_count, bvh.triangle_order),
            (tb.v0, tb.v1, tb.v2, tb.n0, tb.n1, tb.n2, tb.material_index),
            mats, (env_kind, env_a, env_b))


def trace_radiance(scene: SceneDescription, bvh: Bvh, ray: Ray,
                   settings: RenderSettings,
                   rng_state: tuple[int, int]) -> tuple[np.ndarray, tuple[int, int]]:
    """One path for one explicit ray; mainly for tests and demos.  Returns
    (radiance, advanced (state, increment))."""
    bvh_t, tri_t, mats, env_t = _scene_arrays(scene, bvh)
    r, g, b, state = _trace(
        ray.origin[0], ray.origin[1], ray.origin[2],
        ray.direction[0], ray.direction[1], ray.direction[2],
        np.uint64(rng_state[0]), np.uint64(rng_state[1]),
        *bvh_t, *tri_t, *mats, *env_t,
        settings.max_depth, settings.rr_start_depth, settings.t_min,
        np.empty(STACK_SIZE, np.int32), np.empty(STACK_SIZE, np.float64))
    return np.array([r, g, b]), (int(state), int(rng_state[1]))


def render_progressive(scene: SceneDescription, settings: RenderSettings,
                       bvh: Bvh | None = None, threads: int | None = None,
                       progress=None, progress_interval: int = 1) -> RenderResult:
    """Render the full sample budget.  With a ``progress`` callback the image
    is advanced ``progress_interval`` samples at a time and
    ``progress(samples_done, elapsed_ms)`` is called after each chunk;
    without one, all samples run in a single pass.  Chunking never changes
    the result: per-pixel accumulation order is fixed by sample index."""
    threads_used = set_worker_count(threads)
    if bvh is None:
        bvh = build_bvh(scene.triangles)
    bvh_t, tri_t, mats, env_t = _scene_arrays(scene, bvh)
    cam = _camera_pack(scene.camera)
    width, height = scene.camera.width, scene.camera.height

    accum = np.zeros((height, width, 3))
    valid = np.zeros((height, width), dtype=np.int64)
    invalid = np.zeros((height, width), dtype=np.int64)

    spp = settings.samples_per_pixel
    chunk = max(1, int(progress_interval)) if progress is not None else spp
    start = time.perf_counter()
    done = 0
    while done < spp:
        step = min(chunk, spp - done)
        _render_pass(accum, valid, invalid, done, step, cam, width, height,
                     *bvh_t, *tri_t, *mats, *env_t,
                     settings.seed, settings.max_depth,
                     settings.rr_start_depth, settings.t_min)
        done += step
        if progress is not None:
            progress(done, (time.perf_counter() - start) * 1000.0)
    elapsed_ms = (time.perf_counter() - start) * 1000.0

    dropped = int(invalid.sum())
    total = settings.samples_per_pixel * width * height
    if dropped > total * INVALID_SAMPLE_WARN_FRACTION:
        warnings.warn(f"{dropped} of {total} samples were non-finite and "
                      "dropped", RuntimeWarning, stacklevel=2)
    return RenderResult(accum, settings.samples_per_pixel, invalid,
                        elapsed_ms, threads_used)


def render_image(scene: SceneDescription, settings: RenderSettings,
                 bvh: Bvh | None = None, threads: int | None = None) -> np.ndarray:
    """Convenience wrapper returning just the linear radiance image."""
    return render_progressive(scene, settings, bvh=bvh, threads=threads).image
