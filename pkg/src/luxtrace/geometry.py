"""Ray / triangle / AABB primitives.

Vectors are plain float64 numpy arrays of shape (3,).  The intersection
kernels are numba-compiled scalar functions; the dataclass API below and the
batched render loops share the exact same code paths.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _parallel  # noqa: F401  (must precede any numba import)
from numba import njit

DET_EPSILON = 1e-9       # Moller-Trumbore near-singular determinant cutoff
DEFAULT_T_MIN = 1e-4     # self-intersection offset for secondary rays
BOUNDS_PADDING = 1e-7    # AABB padding, relative to the box's max extent


def vec3(x: float, y: float, z: float) -> np.ndarray:
    return np.array([x, y, z], dtype=np.float64)


def normalize(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    n = float(np.linalg.norm(v))
    if n == 0.0:
        raise ValueError("cannot normalize zero vector")
    return v / n


@dataclass
class Ray:
    origin: np.ndarray
    direction: np.ndarray
    t_min: float = DEFAULT_T_MIN
    t_max: float = math.inf

    def __post_init__(self) -> None:
        self.origin = np.asarray(self.origin, dtype=np.float64)
        self.direction = np.asarray(self.direction, dtype=np.float64)
        norm = float(np.linalg.norm(self.direction))
        if abs(norm - 1.0) > 1e-6:
            raise ValueError(f"ray direction must be unit length, got |d| = {norm!r}")
        if not (0.0 <= self.t_min < self.t_max):
            raise ValueError(
                f"ray interval must satisfy 0 <= t_min < t_max, got [{self.t_min}, {self.t_max}]"
            )


@dataclass
class Triangle:
    v0: np.ndarray
    v1: np.ndarray
    v2: np.ndarray
    n0: np.ndarray
    n1: np.ndarray
    n2: np.ndarray
    material_index: int = 0


@dataclass
class Aabb:
    min: np.ndarray
    max: np.ndarray

    @classmethod
    def empty(cls) -> "Aabb":
        return cls(vec3(math.inf, math.inf, math.inf), vec3(-math.inf, -math.inf, -math.inf))

    def is_empty(self) -> bool:
        return bool(np.any(self.min > self.max))


@dataclass
class Hit:
    t: float
    triangle_index: int
    barycentric_u: float
    barycentric_v: float
    geometric_normal: np.ndarray
    shading_normal: np.ndarray
    is_front_face: bool


@dataclass
class TriangleBuffer:
    """Structure-of-arrays triangle storage; behaves as a sequence of Triangle."""

    v0: np.ndarray  # (n, 3) float64
    v1: np.ndarray
    v2: np.ndarray
    n0: np.ndarray
    n1: np.ndarray
    n2: np.ndarray
    material_index: np.ndarray = field(default=None)  # (n,) int32

    def __post_init__(self) -> None:
        for name in ("v0", "v1", "v2", "n0", "n1", "n2"):
            arr = np.ascontiguousarray(np.asarray(getattr(self, name), dtype=np.float64))
            if arr.ndim != 2 or arr.shape[1] != 3:
                raise ValueError(f"{name} must have shape (n, 3), got {arr.shape}")
            setattr(self, name, arr)
        n = self.v0.shape[0]
        if self.material_index is None:
            self.material_index = np.zeros(n, dtype=np.int32)
        self.material_index = np.ascontiguousarray(self.material_index, dtype=np.int32)
        if self.material_index.shape != (n,):
            raise ValueError("material_index must have shape (n,)")

    def __len__(self) -> int:
        return self.v0.shape[0]

    def __getitem__(self, i: int) -> Triangle:
        return Triangle(
            self.v0[i].copy(), self.v1[i].copy(), self.v2[i].copy(),
            self.n0[i].copy(), self.n1[i].copy(), self.n2[i].copy(),
            int(self.material_index[i]),
        )

    @classmethod
    def from_triangles(cls, triangles) -> "TriangleBuffer":
        tris = list(triangles)
        stack = lambda attr: np.array([getattr(t, attr) for t in tris], dtype=np.float64)
        return cls(
            stack("v0"), stack("v1"), stack("v2"),
            stack("n0"), stack("n1"), stack("n2"),
            np.array([t.material_index for t in tris], dtype=np.int32),
        )


# ---------------------------------------------------------------------------
# numba kernels
# ---------------------------------------------------------------------------

@njit(cache=True, error_model="numpy")
def _mt_intersect(ox, oy, oz, dx, dy, dz,
                  ax, ay, az, bx, by, bz, cx, cy, cz,
                  t_min, t_max):
    """Moller-Trumbore, double sided.  Returns (hit, t, u, v)."""
    e1x = bx - ax; e1y = by - ay; e1z = bz - az
    e2x = cx - ax; e2y = cy - ay; e2z = cz - az
    # p = d x e2
    px = dy * e2z - dz * e2y
    py = dz * e2x - dx * e2z
    pz = dx * e2y - dy * e2x
    det = e1x * px + e1y * py + e1z * pz
    if -DET_EPSILON <= det <= DET_EPSILON:
        return False, 0.0, 0.0, 0.0
    inv_det = 1.0 / det
    sx = ox - ax; sy = oy - ay; sz = oz - az
    u = (sx * px + sy * py + sz * pz) * inv_det
    if u < 0.0 or u > 1.0:
        return False, 0.0, 0.0, 0.0
    # q = s x e1
    qx = sy * e1z - sz * e1y
    qy = sz * e1x - sx * e1z
    qz = sx * e1y - sy * e1x
    v = (dx * qx + dy * qy + dz * qz) * inv_det
    if v < 0.0 or u + v > 1.0:
        return False, 0.0, 0.0, 0.0
    t = (e2x * qx + e2y * qy + e2z * qz) * inv_det
    if t < t_min or t > t_max:
        return False, 0.0, 0.0, 0.0
    return True, t, u, v


@njit(cache=True, error_model="numpy")
def _slab_intersect(ox, oy, oz, ix, iy, iz,
                    bminx, bminy, bminz, bmaxx, bmaxy, bmaxz,
                    t_min, t_max):
    """Slab test with precomputed inverse direction (+-inf for zero
    components).  NaN-tolerant comparisons keep the running interval when a
    slab product degenerates to 0 * inf.  Returns (hit, t_enter, t_exit)."""
    tn = t_min
    tf = t_max

    t0 = (bminx - ox) * ix
    t1 = (bmaxx - ox) * ix
    if t0 > t1:
        t0, t1 = t1, t0
    if t0 > tn:
        tn = t0
    if t1 < tf:
        tf = t1

    t0 = (bminy - oy) * iy
    t1 = (bmaxy - oy) * iy
    if t0 > t1:
        t0, t1 = t1, t0
    if t0 > tn:
        tn = t0
    if t1 < tf:
        tf = t1

    t0 = (bminz - oz) * iz
    t1 = (bmaxz - oz) * iz
    if t0 > t1:
        t0, t1 = t1, t0
    if t0 > tn:
        tn = t0
    if t1 < tf:
        tf = t1

    return tn <= tf, tn, tf


@njit(cache=True, error_model="numpy")
def _hit_frame(dx, dy, dz,
               ax, ay, az, bx, by, bz, cx, cy, cz,
               n0x, n0y, n0z, n1x, n1y, n1z, n2x, n2y, n2z,
               u, v):
    """Geometric + interpolated shading normal at a hit, both oriented
    against the incoming ray.  Returns (gx,gy,gz, sx,sy,sz, front)."""
    e1x = bx - ax; e1y = by - ay; e1z = bz - az
    e2x = cx - ax; e2y = cy - ay; e2z = cz - az
    gx = e1y * e2z - e1z * e2y
    gy = e1z * e2x - e1x * e2z
    gz = e1x * e2y - e1y * e2x
    glen = math.sqrt(gx * gx + gy * gy + gz * gz)
    if glen > 0.0:
        gx /= glen; gy /= glen; gz /= glen
    front = (gx * dx + gy * dy + gz * dz) < 0.0
    if not front:
        gx = -gx; gy = -gy; gz = -gz

    w = 1.0 - u - v
    sx = w * n0x + u * n1x + v * n2x
    sy = w * n0y + u * n1y + v * n2y
    sz = w * n0z + u * n1z + v * n2z
    slen = math.sqrt(sx * sx + sy * sy + sz * sz)
    if slen > 0.0:
        sx /= slen; sy /= slen; sz /= slen
    else:
        sx, sy, sz = gx, gy, gz
    # shading normal must live in the oriented geometric hemisphere
    if sx * gx + sy * gy + sz * gz < 0.0:
        sx = -sx; sy = -sy; sz = -sz
    return gx, gy, gz, sx, sy, sz, front


@njit(cache=True, error_model="numpy")
def _inv_component(d):
    if d == 0.0:
        return math.inf
    return 1.0 / d


# ---------------------------------------------------------------------------
# scalar API
# ---------------------------------------------------------------------------

def ray_triangle_intersect(ray: Ray, tri: Triangle, triangle_index: int = 0) -> Hit | None:
    """Nearest double-sided intersection of one ray with one triangle, or None."""
    ok, t, u, v = _mt_intersect(
        ray.origin[0], ray.origin[1], ray.origin[2],
        ray.direction[0], ray.direction[1], ray.direction[2],
        tri.v0[0], tri.v0[1], tri.v0[2],
        tri.v1[0], tri.v1[1], tri.v1[2],
        tri.v2[0], tri.v2[1], tri.v2[2],
        ray.t_min, ray.t_max,
    )
    if not ok:
        return None
    gx, gy, gz, sx, sy, sz, front = _hit_frame(
        ray.direction[0], ray.direction[1], ray.direction[2],
        tri.v0[0], tri.v0[1], tri.v0[2],
        tri.v1[0], tri.v1[1], tri.v1[2],
        tri.v2[0], tri.v2[1], tri.v2[2],
        tri.n0[0], tri.n0[1], tri.n0[2],
        tri.n1[0], tri.n1[1], tri.n1[2],
        tri.n2[0], tri.n2[1], tri.n2[2],
        u, v,
    )
    return Hit(float(t), triangle_index, float(u), float(v),
               vec3(gx, gy, gz), vec3(sx, sy, sz), bool(front))


def ray_aabb_intersect(ray: Ray, box: Aabb) -> tuple[float, float] | None:
    """Clipped slab interval [t_enter, t_exit], or None on a miss.  A ray
    starting inside the box yields t_enter == ray.t_min."""
    ix = _inv_component(ray.direction[0])
    iy = _inv_component(ray.direction[1])
    iz = _inv_component(ray.direction[2])
    ok, tn, tf = _slab_intersect(
        ray.origin[0], ray.origin[1], ray.origin[2], ix, iy, iz,
        box.min[0], box.min[1], box.min[2], box.max[0], box.max[1], box.max[2],
        ray.t_min, ray.t_max,
    )
    if not ok:
        return None
    return float(tn), float(tf)


def triangle_bounds(tri: Triangle) -> Aabb:
    """AABB of a triangle, padded on all sides by BOUNDS_PADDING times the
    box's own max extent so axis-aligned triangles never get a zero-thickness
    slab."""
    lo = np.minimum(np.minimum(tri.v0, tri.v1), tri.v2)
    hi = np.maximum(np.maximum(tri.v0, tri.v1), tri.v2)
    pad = BOUNDS_PADDING * float(np.max(hi - lo))
    return Aabb(lo - pad, hi + pad)


def aabb_union(a: Aabb, b: Aabb) -> Aabb:
    return Aabb(np.minimum(a.min, b.min), np.maximum(a.max, b.max))


def aabb_surface_area(box: Aabb) -> float:
    if box.is_empty():
        return 0.0
    d = box.max - box.min
    return float(2.0 * (d[0] * d[1] + d[0] * d[2] + d[1] * d[2]))
