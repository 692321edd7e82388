"""Bounding volume hierarchy: binned-SAH build and iterative traversal.

The tree is stored as flat structure-of-arrays: node 0 is the root and
children always carry larger indices than their parent.  Triangle indices are
reordered into contiguous leaf ranges via `triangle_order`.  The build is
single-threaded and deterministic: the same input yields a bit-identical node
array.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import _parallel  # noqa: F401
from numba import njit, prange

from .geometry import BOUNDS_PADDING, TriangleBuffer, Ray, Hit, _mt_intersect, _slab_intersect, _hit_frame, vec3

LEAF_SIZE = 4
SAH_BINS = 12
TRAVERSAL_COST = 1.0
INTERSECT_COST = 1.0
MAX_TREE_DEPTH = 60      # keeps the fixed 64-entry traversal stack safe
STACK_SIZE = 64


@dataclass
class BuildStats:
    node_count: int
    leaf_count: int
    max_depth: int
    build_time_ms: float


@dataclass
class Bvh:
    bounds_min: np.ndarray       # (node_count, 3) float64
    bounds_max: np.ndarray
    left_child: np.ndarray       # (node_count,) int32, -1 at leaves
    right_child: np.ndarray
    first_triangle: np.ndarray   # (node_count,) int32, leaf range start
    triangle_count: np.ndarray   # (node_count,) int32, 0 at internal nodes
    triangle_order: np.ndarray   # (n,) int32 permutation into the triangle buffer
    stats: BuildStats

    def is_leaf(self, node: int) -> bool:
        return self.triangle_count[node] > 0


# ---------------------------------------------------------------------------
# build
# ---------------------------------------------------------------------------

@njit(cache=True)
def _triangle_bounds_arrays(v0, v1, v2):
    n = v0.shape[0]
    tb_min = np.empty((n, 3))
    tb_max = np.empty((n, 3))
    cent = np.empty((n, 3))
    for i in range(n):
        ext = 0.0
        for a in range(3):
            lo = min(v0[i, a], min(v1[i, a], v2[i, a]))
            hi = max(v0[i, a], max(v1[i, a], v2[i, a]))
            tb_min[i, a] = lo
            tb_max[i, a] = hi
            if hi - lo > ext:
                ext = hi - lo
        pad = BOUNDS_PADDING * ext
        for a in range(3):
            tb_min[i, a] -= pad
            tb_max[i, a] += pad
            cent[i, a] = 0.5 * (tb_min[i, a] + tb_max[i, a])
    return tb_min, tb_max, cent


@njit(cache=True)
def _half_area(dx, dy, dz):
    return dx * dy + dx * dz + dy * dz


@njit(cache=True)
def _build_kernel(tb_min, tb_max, cent, leaf_size, n_bins, depth_cap):
    n = tb_min.shape[0]
    max_nodes = 2 * n
    bmin = np.empty((max_nodes, 3))
    bmax = np.empty((max_nodes, 3))
    left = np.full(max_nodes, -1, np.int32)
    right = np.full(max_nodes, -1, np.int32)
    first = np.zeros(max_nodes, np.int32)
    count = np.zeros(max_nodes, np.int32)
    order = np.arange(n).astype(np.int32)

    bin_count = np.empty(n_bins, np.int64)
    bin_min = np.empty((n_bins, 3))
    bin_max = np.empty((n_bins, 3))
    sweep_area = np.empty(n_bins)
    sweep_count = np.empty(n_bins, np.int64)

    stack = np.empty((depth_cap + 8, 4), np.int64)
    sp = 0
    stack[sp, 0] = 0; stack[sp, 1] = 0; stack[sp, 2] = n; stack[sp, 3] = 0
    sp += 1
    n_nodes = 1
    leaf_count = 0
    max_depth = 0

    while sp > 0:
        sp -= 1
        node = stack[sp, 0]
        f = stack[sp, 1]
        c = stack[sp, 2]
        depth = stack[sp, 3]
        if depth > max_depth:
            max_depth = depth

        # node bounds = union of member triangle bounds
        nminx = math.inf; nminy = math.inf; nminz = math.inf
        nmaxx = -math.inf; nmaxy = -math.inf; nmaxz = -math.inf
        for k in range(f, f + c):
            ti = order[k]
            if tb_min[ti, 0] < nminx: nminx = tb_min[ti, 0]
            if tb_min[ti, 1] < nminy: nminy = tb_min[ti, 1]
            if tb_min[ti, 2] < nminz: nminz = tb_min[ti, 2]
            if tb_max[ti, 0] > nmaxx: nmaxx = tb_max[ti, 0]
            if tb_max[ti, 1] > nmaxy: nmaxy = tb_max[ti, 1]
            if tb_max[ti, 2] > nmaxz: nmaxz = tb_max[ti, 2]
        bmin[node, 0] = nminx; bmin[node, 1] = nminy; bmin[node, 2] = nminz
        bmax[node, 0] = nmaxx; bmax[node, 1] = nmaxy; bmax[node, 2] = nmaxz
        parent_area = 2.0 * _half_area(nmaxx - nminx, nmaxy - nminy, nmaxz - nminz)

        make_leaf = c <= leaf_size or depth >= depth_cap or parent_area <= 0.0
        mid = -1

        if not make_leaf:
            # centroid bounds; split along the widest centroid axis
            cminx = math.inf; cminy = math.inf; cminz = math.inf
            cmaxx = -math.inf; cmaxy = -math.inf; cmaxz = -math.inf
            for k in range(f, f + c):
                ti = order[k]
                if cent[ti, 0] < cminx: cminx = cent[ti, 0]
                if cent[ti, 1] < cminy: cminy = cent[ti, 1]
                if cent[ti, 2] < cminz: cminz = cent[ti, 2]
                if cent[ti, 0] > cmaxx: cmaxx = cent[ti, 0]
                if cent[ti, 1] > cmaxy: cmaxy = cent[ti, 1]
                if cent[ti, 2] > cmaxz: cmaxz = cent[ti, 2]
            ex = cmaxx - cminx; ey = cmaxy - cminy; ez = cmaxz - cminz
            axis = 0
            ext = ex
            if ey > ext:
                axis = 1; ext = ey
            if ez > ext:
                axis = 2; ext = ez
            cmin_axis = cminx if axis == 0 else (cminy if axis == 1 else cminz)

            if ext > 0.0:
                scale = n_bins / ext
                for b in range(n_bins):
                    bin_count[b] = 0
                    for a in range(3):
                        bin_min[b, a] = math.inf
                        bin_max[b, a] = -math.inf
                for k in range(f, f + c):
                    ti = order[k]
                    b = int((cent[ti, axis] - cmin_axis) * scale)
                    if b >= n_bins:
                        b = n_bins - 1
                    bin_count[b] += 1
                    for a in range(3):
                        if tb_min[ti, a] < bin_min[b, a]: bin_min[b, a] = tb_min[ti, a]
                        if tb_max[ti, a] > bin_max[b, a]: bin_max[b, a] = tb_max[ti, a]

                # prefix sweep: left cost components for split planes after bin k
                accx0 = math.inf; accy0 = math.inf; accz0 = math.inf
                accx1 = -math.inf; accy1 = -math.inf; accz1 = -math.inf
                acc_n = 0
                for b in range(n_bins - 1):
                    if bin_count[b] > 0:
                        if bin_min[b, 0] < accx0: accx0 = bin_min[b, 0]
                        if bin_min[b, 1] < accy0: accy0 = bin_min[b, 1]
                        if bin_min[b, 2] < accz0: accz0 = bin_min[b, 2]
                        if bin_max[b, 0] > accx1: accx1 = bin_max[b, 0]
                        if bin_max[b, 1] > accy1: accy1 = bin_max[b, 1]
                        if bin_max[b, 2] > accz1: accz1 = bin_max[b, 2]
                        acc_n += bin_count[b]
                    sweep_count[b] = acc_n
                    if acc_n > 0:
                        sweep_area[b] = 2.0 * _half_area(accx1 - accx0, accy1 - accy0, accz1 - accz0)
                    else:
                        sweep_area[b] = 0.0

                # suffix sweep + SAH cost, lowest plane index wins ties
                best_cost = math.inf
                best_plane = -1
                accx0 = math.inf; accy0 = math.inf; accz0 = math.inf
                accx1 = -math.inf; accy1 = -math.inf; accz1 = -math.inf
                acc_n = 0
                for b in range(n_bins - 1, 0, -1):
                    if bin_count[b] > 0:
                        if bin_min[b, 0] < accx0: accx0 = bin_min[b, 0]
                        if bin_min[b, 1] < accy0: accy0 = bin_min[b, 1]
                        if bin_min[b, 2] < accz0: accz0 = bin_min[b, 2]
                        if bin_max[b, 0] > accx1: accx1 = bin_max[b, 0]
                        if bin_max[b, 1] > accy1: accy1 = bin_max[b, 1]
                        if bin_max[b, 2] > accz1: accz1 = bin_max[b, 2]
                        acc_n += bin_count[b]
                    plane = b - 1
                    ln = sweep_count[plane]
                    rn = acc_n
                    if ln > 0 and rn > 0:
                        right_area = 2.0 * _half_area(accx1 - accx0, accy1 - accy0, accz1 - accz0)
                        cost = TRAVERSAL_COST + INTERSECT_COST * (
                            sweep_area[plane] * ln + right_area * rn) / parent_area
                        if cost < best_cost:
                            best_cost = cost
                            best_plane = plane

                if best_plane >= 0 and best_cost < INTERSECT_COST * c:
                    # partition member triangles by bin <= best_plane
                    i = f
                    j = f + c - 1
                    while i <= j:
                        ti = order[i]
                        b = int((cent[ti, axis] - cmin_axis) * scale)
                        if b >= n_bins:
                            b = n_bins - 1
                        if b <= best_plane:
                            i += 1
                        else:
                            tmp = order[i]; order[i] = order[j]; order[j] = tmp
                            j -= 1
                    mid = i
                    if mid <= f or mid >= f + c:
                        mid = f + c // 2  # defensive; cannot normally happen
                else:
                    make_leaf = True  # SAH prefers a leaf
            else:
                # all centroids coincide: median split of the index range
                mid = f + c // 2

        if make_leaf:
            first[node] = f
            count[node] = c
            leaf_count += 1
            continue

        lchild = n_nodes
        rchild = n_nodes + 1
        n_nodes += 2
        left[node] = lchild
        right[node] = rchild
        stack[sp, 0] = rchild; stack[sp, 1] = mid; stack[sp, 2] = f + c - mid; stack[sp, 3] = depth + 1
        sp += 1
        stack[sp, 0] = lchild; stack[sp, 1] = f; stack[sp, 2] = mid - f; stack[sp, 3] = depth + 1
        sp += 1

    return (bmin[:n_nodes].copy(), bmax[:n_nodes].copy(), left[:n_nodes].copy(),
            right[:n_nodes].copy(), first[:n_nodes].copy(), count[:n_nodes].copy(),
            order, n_nodes, leaf_count, max_depth)


_warmed = False


def _warm_kernels() -> None:
    """Compile the build/traversal kernels once so timed builds measure the
    algorithm, not JIT latency."""
    global _warmed
    if _warmed:
        return
    v = np.array([[0.0, 0.0, 0.0], [1.0, 1.0, 1.0]])
    v1 = v + 0.1
    v2 = v + 0.2
    tb_min, tb_max, cent = _triangle_bounds_arrays(v, v1, v2)
    out = _build_kernel(tb_min, tb_max, cent, LEAF_SIZE, SAH_BINS, MAX_TREE_DEPTH)
    _traverse(out[0], out[1], out[2], out[3], out[4], out[5], out[6],
              v, v1, v2, 0.0, 0.0, -1.0, 0.0, 0.0, 1.0, 1e-4, math.inf)
    _traverse_any(out[0], out[1], out[2], out[3], out[4], out[5], out[6],
                  v, v1, v2, 0.0, 0.0, -1.0, 0.0, 0.0, 1.0, 1e-4, 1.0)
    _warmed = True


def build_bvh(triangles: TriangleBuffer, leaf_size: int = LEAF_SIZE, bins: int = SAH_BINS) -> Bvh:
    """Binned-SAH build.  Raises ValueError("empty scene") on zero triangles."""
    if len(triangles) == 0:
        raise ValueError("empty scene")
    _warm_kernels()
    t0 = time.perf_counter()
    tb_min, tb_max, cent = _triangle_bounds_arrays(triangles.v0, triangles.v1, triangles.v2)
    (bmin, bmax, left, right, first, count, order,
     n_nodes, leaf_count, max_depth) = _build_kernel(tb_min, tb_max, cent,
                                                     leaf_size, bins, MAX_TREE_DEPTH)
    build_ms = (time.perf_counter() - t0) * 1e3
    stats = BuildStats(int(n_nodes), int(leaf_count), int(max_depth), build_ms)
    return Bvh(bmin, bmax, left, right, first, count, order, stats)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def validate_bvh(bvh: Bvh, triangles: TriangleBuffer, tolerance: float = 1e-6) -> list[str]:
    """Structural checks; returns human-readable violations (empty = valid)."""
    out: list[str] = []
    n_nodes = bvh.bounds_min.shape[0]
    n = len(triangles)
    leaf = bvh.triangle_count > 0
    internal = ~leaf

    idx = np.arange(n_nodes)
    for name, child in (("left", bvh.left_child), ("right", bvh.right_child)):
        bad = internal & (child <= idx)
        for i in np.nonzero(bad)[0]:
            out.append(f"node {i}: {name} child {child[i]} does not have a larger index")
        missing = internal & (child < 0)
        for i in np.nonzero(missing)[0]:
            out.append(f"node {i}: internal node lacks a {name} child")

    ok_children = internal & (bvh.left_child > idx) & (bvh.right_child > idx)
    for i in np.nonzero(ok_children)[0]:
        for ci in (bvh.left_child[i], bvh.right_child[i]):
            if np.any(bvh.bounds_min[ci] < bvh.bounds_min[i] - tolerance) or \
               np.any(bvh.bounds_max[ci] > bvh.bounds_max[i] + tolerance):
                out.append(f"node {i}: child {ci} bounds exceed parent bounds")

    if sorted(bvh.triangle_order.tolist()) != list(range(n)):
        out.append("triangle_order is not a permutation of [0, n)")

    tb_min, tb_max, _ = _triangle_bounds_arrays(triangles.v0, triangles.v1, triangles.v2)
    covered = np.zeros(n, dtype=np.int64)
    for i in np.nonzero(leaf)[0]:
        f = int(bvh.first_triangle[i])
        c = int(bvh.triangle_count[i])
        if c < 1:
            out.append(f"node {i}: leaf with no triangles")
            continue
        if f < 0 or f + c > n:
            out.append(f"node {i}: leaf range [{f}, {f + c}) out of bounds")
            continue
        members = bvh.triangle_order[f:f + c]
        covered[members] += 1
        if np.any(tb_min[members] < bvh.bounds_min[i] - tolerance) or \
           np.any(tb_max[members] > bvh.bounds_max[i] + tolerance):
            out.append(f"node {i}: leaf bounds do not contain member triangle bounds")
    if np.any(covered != 1):
        bad = np.nonzero(covered != 1)[0]
        out.append(f"triangles not covered by exactly one leaf: {bad[:8].tolist()}"
                   + ("..." if bad.size > 8 else ""))
    return out


# ---------------------------------------------------------------------------
# traversal
# ---------------------------------------------------------------------------

@njit(cache=True, error_model="numpy")
def _traverse_impl(bmin, bmax, left, right, first, count, order,
                   v0, v1, v2, ox, oy, oz, dx, dy, dz, t_min, t_max,
                   stack_node, stack_t):
    """Nearest hit using caller-owned stack buffers (hot paths reuse them
    across rays to avoid per-ray allocations).  Returns
    (triangle_index or -1, t, u, v).  Ties on t are broken toward the lower
    triangle index, matching exhaustive search."""
    ix = math.inf if dx == 0.0 else 1.0 / dx
    iy = math.inf if dy == 0.0 else 1.0 / dy
    iz = math.inf if dz == 0.0 else 1.0 / dz

    ok, enter, _ = _slab_intersect(ox, oy, oz, ix, iy, iz,
                                   bmin[0, 0], bmin[0, 1], bmin[0, 2],
                                   bmax[0, 0], bmax[0, 1], bmax[0, 2], t_min, t_max)
    best_i = -1
    best_t = t_max
    best_u = 0.0
    best_v = 0.0
    if not ok:
        return best_i, best_t, best_u, best_v

    sp = 0
    stack_node[sp] = 0
    stack_t[sp] = enter
    sp += 1

    while sp > 0:
        sp -= 1
        node = stack_node[sp]
        if stack_t[sp] > best_t:
            continue
        if count[node] > 0:
            for k in range(first[node], first[node] + count[node]):
                ti = order[k]
                okt, t, u, v = _mt_intersect(ox, oy, oz, dx, dy, dz,
                                             v0[ti, 0], v0[ti, 1], v0[ti, 2],
                                             v1[ti, 0], v1[ti, 1], v1[ti, 2],
                                             v2[ti, 0], v2[ti, 1], v2[ti, 2],
                                             t_min, best_t)
                if okt and (t < best_t or (t == best_t and ti < best_i) or best_i < 0):
                    best_t = t
                    best_i = ti
                    best_u = u
                    best_v = v
        else:
            lc = left[node]
            rc = right[node]
            okl, el, _ = _slab_intersect(ox, oy, oz, ix, iy, iz,
                                         bmin[lc, 0], bmin[lc, 1], bmin[lc, 2],
                                         bmax[lc, 0], bmax[lc, 1], bmax[lc, 2], t_min, best_t)
            okr, er, _ = _slab_intersect(ox, oy, oz, ix, iy, iz,
                                         bmin[rc, 0], bmin[rc, 1], bmin[rc, 2],
                                         bmax[rc, 0], bmax[rc, 1], bmax[rc, 2], t_min, best_t)
            if okl and okr:
                if el <= er:  # near child on top of the stack
                    stack_node[sp] = rc; stack_t[sp] = er; sp += 1
                    stack_node[sp] = lc; stack_t[sp] = el; sp += 1
                else:
                    stack_node[sp] = lc; stack_t[sp] = el; sp += 1
                    stack_node[sp] = rc; stack_t[sp] = er; sp += 1
            elif okl:
                stack_node[sp] = lc; stack_t[sp] = el; sp += 1
            elif okr:
                stack_node[sp] = rc; stack_t[sp] = er; sp += 1

    return best_i, best_t, best_u, best_v


@njit(cache=True, error_model="numpy")
def _traverse(bmin, bmax, left, right, first, count, order,
              v0, v1, v2, ox, oy, oz, dx, dy, dz, t_min, t_max):
    """Nearest hit with self-owned stacks.  Returns (index or -1, t, u, v)."""
    stack_node = np.empty(STACK_SIZE, np.int32)
    stack_t = np.empty(STACK_SIZE, np.float64)
    return _traverse_impl(bmin, bmax, left, right, first, count, order,
                          v0, v1, v2, ox, oy, oz, dx, dy, dz, t_min, t_max,
                          stack_node, stack_t)


@njit(cache=True, error_model="numpy")
def _traverse_counted(bmin, bmax, left, right, first, count, order,
                      v0, v1, v2, ox, oy, oz, dx, dy, dz, t_min, t_max):
    """As _traverse, plus (nodes_visited, triangle_tests) counters.
    nodes_visited counts slab tests (root included)."""
    ix = math.inf if dx == 0.0 else 1.0 / dx
    iy = math.inf if dy == 0.0 else 1.0 / dy
    iz = math.inf if dz == 0.0 else 1.0 / dz

    nodes_visited = 1
    tri_tests = 0
    ok, enter, _ = _slab_intersect(ox, oy, oz, ix, iy, iz,
                                   bmin[0, 0], bmin[0, 1], bmin[0, 2],
                                   bmax[0, 0], bmax[0, 1], bmax[0, 2], t_min, t_max)
    best_i = -1
    best_t = t_max
    best_u = 0.0
    best_v = 0.0
    if not ok:
        return best_i, best_t, best_u, best_v, nodes_visited, tri_tests

    stack_node = np.empty(STACK_SIZE, np.int32)
    stack_t = np.empty(STACK_SIZE, np.float64)
    sp = 0
    stack_node[sp] = 0
    stack_t[sp] = enter
    sp += 1

    while sp > 0:
        sp -= 1
        node = stack_node[sp]
        if stack_t[sp] > best_t:
            continue
        if count[node] > 0:
            for k in range(first[node], first[node] + count[node]):
                ti = order[k]
                tri_tests += 1
                okt, t, u, v = _mt_intersect(ox, oy, oz, dx, dy, dz,
                                             v0[ti, 0], v0[ti, 1], v0[ti, 2],
                                             v1[ti, 0], v1[ti, 1], v1[ti, 2],
                                             v2[ti, 0], v2[ti, 1], v2[ti, 2],
                                             t_min, best_t)
                if okt and (t < best_t or (t == best_t and ti < best_i) or best_i < 0):
                    best_t = t
                    best_i = ti
                    best_u = u
                    best_v = v
        else:
            lc = left[node]
            rc = right[node]
            nodes_visited += 2
            okl, el, _ = _slab_intersect(ox, oy, oz, ix, iy, iz,
                                         bmin[lc, 0], bmin[lc, 1], bmin[lc, 2],
                                         bmax[lc, 0], bmax[lc, 1], bmax[lc, 2], t_min, best_t)
            okr, er, _ = _slab_intersect(ox, oy, oz, ix, iy, iz,
                                         bmin[rc, 0], bmin[rc, 1], bmin[rc, 2],
                                         bmax[rc, 0], bmax[rc, 1], bmax[rc, 2], t_min, best_t)
            if okl and okr:
                if el <= er:
                    stack_node[sp] = rc; stack_t[sp] = er; sp += 1
                    stack_node[sp] = lc; stack_t[sp] = el; sp += 1
                else:
                    stack_node[sp] = lc; stack_t[sp] = el; sp += 1
                    stack_node[sp] = rc; stack_t[sp] = er; sp += 1
            elif okl:
                stack_node[sp] = lc; stack_t[sp] = el; sp += 1
            elif okr:
                stack_node[sp] = rc; stack_t[sp] = er; sp += 1

    return best_i, best_t, best_u, best_v, nodes_visited, tri_tests


@njit(cache=True, error_model="numpy")
def _traverse_any(bmin, bmax, left, right, first, count, order,
                  v0, v1, v2, ox, oy, oz, dx, dy, dz, t_min, t_max):
    """Early-exit occlusion query: True on any hit within [t_min, t_max]."""
    ix = math.inf if dx == 0.0 else 1.0 / dx
    iy = math.inf if dy == 0.0 else 1.0 / dy
    iz = math.inf if dz == 0.0 else 1.0 / dz

    ok, _, _ = _slab_intersect(ox, oy, oz, ix, iy, iz,
                               bmin[0, 0], bmin[0, 1], bmin[0, 2],
                               bmax[0, 0], bmax[0, 1], bmax[0, 2], t_min, t_max)
    if not ok:
        return False

    stack_node = np.empty(STACK_SIZE, np.int32)
    sp = 0
    stack_node[sp] = 0
    sp += 1
    while sp > 0:
        sp -= 1
        node = stack_node[sp]
        if count[node] > 0:
            for k in range(first[node], first[node] + count[node]):
                ti = order[k]
                okt, _, _, _ = _mt_intersect(ox, oy, oz, dx, dy, dz,
                                             v0[ti, 0], v0[ti, 1], v0[ti, 2],
                                             v1[ti, 0], v1[ti, 1], v1[ti, 2],
                                             v2[ti, 0], v2[ti, 1], v2[ti, 2],
                                             t_min, t_max)
                if okt:
                    return True
        else:
            for child in (left[node], right[node]):
                okc, _, _ = _slab_intersect(ox, oy, oz, ix, iy, iz,
                                            bmin[child, 0], bmin[child, 1], bmin[child, 2],
                                            bmax[child, 0], bmax[child, 1], bmax[child, 2],
                                            t_min, t_max)
                if okc:
                    stack_node[sp] = child
                    sp += 1
    return False


@njit(cache=True, parallel=True, error_model="numpy")
def _traverse_batch(bmin, bmax, left, right, first, count, order,
                    v0, v1, v2, origins, directions, t_min, t_max):
    n_rays = origins.shape[0]
    out_t = np.empty(n_rays)
    out_i = np.empty(n_rays, np.int64)
    for r in prange(n_rays):
        i, t, _, _ = _traverse(bmin, bmax, left, right, first, count, order, v0, v1, v2,
                               origins[r, 0], origins[r, 1], origins[r, 2],
                               directions[r, 0], directions[r, 1], directions[r, 2],
                               t_min, t_max)
        out_i[r] = i
        out_t[r] = t if i >= 0 else math.inf
    return out_i, out_t


@njit(cache=True, parallel=True, error_model="numpy")
def _traverse_batch_counted(bmin, bmax, left, right, first, count, order,
                            v0, v1, v2, origins, directions, t_min, t_max):
    n_rays = origins.shape[0]
    out_nodes = np.empty(n_rays, np.int64)
    out_tests = np.empty(n_rays, np.int64)
    for r in prange(n_rays):
        _, _, _, _, nodes, tests = _traverse_counted(
            bmin, bmax, left, right, first, count, order, v0, v1, v2,
            origins[r, 0], origins[r, 1], origins[r, 2],
            directions[r, 0], directions[r, 1], directions[r, 2], t_min, t_max)
        out_nodes[r] = nodes
        out_tests[r] = tests
    return out_nodes, out_tests


@njit(cache=True, parallel=True, error_model="numpy")
def _brute_force_batch(v0, v1, v2, origins, directions, t_min, t_max):
    """Exhaustive nearest-hit search over every triangle; the traversal
    oracle.  Ascending index order + strict comparison implements the same
    lower-index tie-break as the BVH kernel."""
    n_rays = origins.shape[0]
    n = v0.shape[0]
    out_t = np.empty(n_rays)
    out_i = np.empty(n_rays, np.int64)
    for r in prange(n_rays):
        best_i = -1
        best_t = t_max
        for ti in range(n):
            okt, t, _, _ = _mt_intersect(origins[r, 0], origins[r, 1], origins[r, 2],
                                         directions[r, 0], directions[r, 1], directions[r, 2],
                                         v0[ti, 0], v0[ti, 1], v0[ti, 2],
                                         v1[ti, 0], v1[ti, 1], v1[ti, 2],
                                         v2[ti, 0], v2[ti, 1], v2[ti, 2],
                                         t_min, best_t)
            if okt and (t < best_t or best_i < 0):
                best_t = t
                best_i = ti
        out_i[r] = best_i
        out_t[r] = best_t if best_i >= 0 else math.inf
    return out_i, out_t


# ---------------------------------------------------------------------------
# API
# ---------------------------------------------------------------------------

def _hit_from_traverse(triangles: TriangleBuffer, ray: Ray, ti: int, t: float,
                       u: float, v: float) -> Hit:
    gx, gy, gz, sx, sy, sz, front = _hit_frame(
        ray.direction[0], ray.direction[1], ray.direction[2],
        triangles.v0[ti, 0], triangles.v0[ti, 1], triangles.v0[ti, 2],
        triangles.v1[ti, 0], triangles.v1[ti, 1], triangles.v1[ti, 2],
        triangles.v2[ti, 0], triangles.v2[ti, 1], triangles.v2[ti, 2],
        triangles.n0[ti, 0], triangles.n0[ti, 1], triangles.n0[ti, 2],
        triangles.n1[ti, 0], triangles.n1[ti, 1], triangles.n1[ti, 2],
        triangles.n2[ti, 0], triangles.n2[ti, 1], triangles.n2[ti, 2],
        u, v)
    return Hit(float(t), int(ti), float(u), float(v),
               vec3(gx, gy, gz), vec3(sx, sy, sz), bool(front))


def intersect_scene(triangles: TriangleBuffer, bvh: Bvh, ray: Ray) -> Hit | None:
    ti, t, u, v = _traverse(bvh.bounds_min, bvh.bounds_max, bvh.left_child, bvh.right_child,
                            bvh.first_triangle, bvh.triangle_count, bvh.triangle_order,
                            triangles.v0, triangles.v1, triangles.v2,
                            ray.origin[0], ray.origin[1], ray.origin[2],
                            ray.direction[0], ray.direction[1], ray.direction[2],
                            ray.t_min, ray.t_max)
    if ti < 0:
        return None
    return _hit_from_traverse(triangles, ray, ti, t, u, v)


def intersect_scene_counted(triangles: TriangleBuffer, bvh: Bvh, ray: Ray
                            ) -> tuple[Hit | None, int, int]:
    """(hit, nodes_visited, triangle_tests) — the instrumented traversal."""
    ti, t, u, v, nodes, tests = _traverse_counted(
        bvh.bounds_min, bvh.bounds_max, bvh.left_child, bvh.right_child,
        bvh.first_triangle, bvh.triangle_count, bvh.triangle_order,
        triangles.v0, triangles.v1, triangles.v2,
        ray.origin[0], ray.origin[1], ray.origin[2],
        ray.direction[0], ray.direction[1], ray.direction[2],
        ray.t_min, ray.t_max)
    hit = None if ti < 0 else _hit_from_traverse(triangles, ray, ti, t, u, v)
    return hit, int(nodes), int(tests)


def intersect_any(triangles: TriangleBuffer, bvh: Bvh, ray: Ray) -> bool:
    return bool(_traverse_any(bvh.bounds_min, bvh.bounds_max, bvh.left_child, bvh.right_child,
                              bvh.first_triangle, bvh.triangle_count, bvh.triangle_order,
                              triangles.v0, triangles.v1, triangles.v2,
                              ray.origin[0], ray.origin[1], ray.origin[2],
                              ray.direction[0], ray.direction[1], ray.direction[2],
                              ray.t_min, ray.t_max))


def intersect_scene_batch(triangles: TriangleBuffer, bvh: Bvh,
                          origins: np.ndarray, directions: np.ndarray,
                          t_min: float = 1e-4, t_max: float = math.inf
                          ) -> tuple[np.ndarray, np.ndarray]:
    """(indices, t) for many rays; index -1 and t = inf on a miss."""
    return _traverse_batch(bvh.bounds_min, bvh.bounds_max, bvh.left_child, bvh.right_child,
                           bvh.first_triangle, bvh.triangle_count, bvh.triangle_order,
                           triangles.v0, triangles.v1, triangles.v2,
                           np.ascontiguousarray(origins, dtype=np.float64),
                           np.ascontiguousarray(directions, dtype=np.float64),
                           t_min, t_max)


def traversal_counts_batch(triangles: TriangleBuffer, bvh: Bvh,
                           origins: np.ndarray, directions: np.ndarray,
                           t_min: float = 1e-4, t_max: float = math.inf
                           ) -> tuple[np.ndarray, np.ndarray]:
    """(nodes_visited, triangle_tests) per ray."""
    return _traverse_batch_counted(bvh.bounds_min, bvh.bounds_max, bvh.left_child,
                                   bvh.right_child, bvh.first_triangle, bvh.triangle_count,
                                   bvh.triangle_order,
                                   triangles.v0, triangles.v1, triangles.v2,
                                   np.ascontiguousarray(origins, dtype=np.float64),
                                   np.ascontiguousarray(directions, dtype=np.float64),
                                   t_min, t_max)


def brute_force_intersect_batch(triangles: TriangleBuffer,
                                origins: np.ndarray, directions: np.ndarray,
                                t_min: float = 1e-4, t_max: float = math.inf
                                ) -> tuple[np.ndarray, np.ndarray]:
    return _brute_force_batch(triangles.v0, triangles.v1, triangles.v2,
                              np.ascontiguousarray(origins, dtype=np.float64),
                              np.ascontiguousarray(directions, dtype=np.float64),
                              t_min, t_max)
