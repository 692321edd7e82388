"""Tests for rays, triangles, axis-aligned boxes, and their intersections.

Two independent oracles anchor the intersection code:
  * a dense 3x3 linear solve of the ray/triangle system (numpy.linalg),
  * a triangulated box (12 triangles) standing in for the slab test.
"""

import math

import numpy as np
import pytest

from luxtrace import (
    Aabb,
    Ray,
    Triangle,
    TriangleBuffer,
    aabb_surface_area,
    aabb_union,
    icosphere,
    normalize,
    ray_aabb_intersect,
    ray_triangle_intersect,
    triangle_bounds,
    vec3,
)

FLAT = vec3(0.0, 0.0, 1.0)


def make_tri(v0, v1, v2, normals=None):
    v0, v1, v2 = vec3(*v0), vec3(*v1), vec3(*v2)
    if normals is None:
        n = normalize(np.cross(v1 - v0, v2 - v0))
        normals = (n, n, n)
    return Triangle(v0, v1, v2, *[np.asarray(n, float) for n in normals])


def solve_ray_triangle(origin, direction, tri, t_min, t_max):
    """Reference intersection via a dense linear solve.

    o + t*d = (1-u-v)*v0 + u*v1 + v*v2  rearranges to the 3x3 system
    [-d | v1-v0 | v2-v0] @ [t, u, v]^T = o - v0.  Returns (hit, t, u, v),
    with `hit` None when the configuration is too close to a decision
    boundary for a float comparison to be meaningful.
    """
    m = np.column_stack([-direction, tri.v1 - tri.v0, tri.v2 - tri.v0])
    det = np.linalg.det(m)
    if abs(det) < 1e-8:
        return None, 0.0, 0.0, 0.0
    t, u, v = np.linalg.solve(m, origin - tri.v0)
    margin = 1e-9
    for boundary in (u, 1.0 - u, v, 1.0 - v, 1.0 - u - v, t - t_min):
        if abs(boundary) < margin:
            return None, 0.0, 0.0, 0.0
    if math.isfinite(t_max) and abs(t_max - t) < margin:
        return None, 0.0, 0.0, 0.0
    inside = 0.0 <= u <= 1.0 and 0.0 <= v and u + v <= 1.0 and t_min <= t <= t_max
    return inside, t, u, v


def test_axis_aligned_hit():
    tri = make_tri((-1, -1, 0), (1, -1, 0), (0, 1, 0))
    ray = Ray(vec3(0.0, -0.2, 1.0), vec3(0.0, 0.0, -1.0))
    hit = ray_triangle_intersect(ray, tri, triangle_index=7)
    assert hit is not None
    assert hit.triangle_index == 7
    assert abs(hit.t - 1.0) < 1e-12
    assert hit.is_front_face
    assert np.allclose(hit.geometric_normal, (0, 0, 1), atol=1e-12)
    assert np.allclose(hit.shading_normal, (0, 0, 1), atol=1e-12)


def test_miss_outside_edge():
    tri = make_tri((-1, -1, 0), (1, -1, 0), (0, 1, 0))
    ray = Ray(vec3(2.0, 2.0, 1.0), vec3(0.0, 0.0, -1.0))
    assert ray_triangle_intersect(ray, tri) is None


def test_miss_behind_origin():
    tri = make_tri((-1, -1, 0), (1, -1, 0), (0, 1, 0))
    ray = Ray(vec3(0.0, -0.2, 1.0), vec3(0.0, 0.0, 1.0))  # points away
    assert ray_triangle_intersect(ray, tri) is None


def test_parallel_ray_rejected():
    tri = make_tri((-1, -1, 0), (1, -1, 0), (0, 1, 0))
    ray = Ray(vec3(0.0, 0.0, 1.0), vec3(1.0, 0.0, 0.0))
    assert ray_triangle_intersect(ray, tri) is None


def test_backface_hit_flips_geometric_normal():
    """Hits are double sided; the geometric normal always opposes the ray."""
    tri = make_tri((-1, -1, 0), (1, -1, 0), (0, 1, 0))
    ray = Ray(vec3(0.0, -0.2, -1.0), vec3(0.0, 0.0, 1.0))
    hit = ray_triangle_intersect(ray, tri)
    assert hit is not None
    assert not hit.is_front_face
    assert np.dot(hit.geometric_normal, ray.direction) < 0.0


def test_against_linear_solve_oracle():
    rng = np.random.default_rng(6021)
    checked = 0
    for _ in range(1000):
        verts = rng.uniform(-2.0, 2.0, size=(3, 3))
        tri = make_tri(*verts)
        origin = rng.uniform(-4.0, 4.0, size=3)
        direction = normalize(rng.normal(size=3))
        expected, t_ref, u_ref, v_ref = solve_ray_triangle(
            origin, direction, tri, 1e-4, math.inf)
        if expected is None:
            continue
        checked += 1
        hit = ray_triangle_intersect(Ray(origin, direction), tri)
        assert (hit is not None) == expected
        if hit is not None:
            assert abs(hit.t - t_ref) < 1e-6 * max(1.0, abs(t_ref))
            assert abs(hit.barycentric_u - u_ref) < 1e-6
            assert abs(hit.barycentric_v - v_ref) < 1e-6
    assert checked > 900  # the boundary band only skims off a few cases


def test_vertex_permutation_symmetry():
    """Winding / vertex order must not change the hit decision or move t by
    more than 1e-5."""
    import itertools

    rng = np.random.default_rng(913)
    flips = 0
    for _ in range(300):
        verts = rng.uniform(-1.5, 1.5, size=(3, 3))
        origin = rng.uniform(-3.0, 3.0, size=3)
        direction = normalize(rng.normal(size=3))
        ray = Ray(origin, direction)
        results = []
        for perm in itertools.permutations(range(3)):
            tri = make_tri(*verts[list(perm)])
            hit = ray_triangle_intersect(ray, tri)
            results.append(None if hit is None else hit.t)
        hits = [t for t in results if t is not None]
        if 0 < len(hits) < 6:
            flips += 1  # would be a genuine asymmetry
        if hits:
            assert max(hits) - min(hits) < 1e-5
    assert flips == 0


def test_hit_point_reconstruction():
    """o + t*d must equal the barycentric combination of the vertices."""
    rng = np.random.default_rng(4242)
    found = 0
    while found < 200:
        verts = rng.uniform(-2.0, 2.0, size=(3, 3))
        tri = make_tri(*verts)
        target = (verts * rng.dirichlet([1, 1, 1])[:, None]).sum(axis=0)
        origin = rng.uniform(-4.0, 4.0, size=3)
        if np.linalg.norm(target - origin) < 1e-3:
            continue
        ray = Ray(origin, normalize(target - origin))
        hit = ray_triangle_intersect(ray, tri)
        if hit is None:
            continue  # degenerate or boundary configuration
        found += 1
        p_ray = origin + hit.t * ray.direction
        w = 1.0 - hit.barycentric_u - hit.barycentric_v
        p_bary = w * tri.v0 + hit.barycentric_u * tri.v1 + hit.barycentric_v * tri.v2
        assert np.allclose(p_ray, p_bary, atol=1e-6)
        assert abs(np.linalg.norm(hit.shading_normal) - 1.0) < 1e-9
        assert abs(np.linalg.norm(hit.geometric_normal) - 1.0) < 1e-9
        assert np.dot(hit.geometric_normal, ray.direction) < 0.0


def test_shading_normal_interpolates():
    tri = make_tri(
        (0, 0, 0), (1, 0, 0), (0, 1, 0),
        normals=(normalize(vec3(-0.3, 0, 1)), normalize(vec3(0.3, 0, 1)),
                 normalize(vec3(0, 0.3, 1))),
    )
    ray = Ray(vec3(0.25, 0.25, 1.0), vec3(0.0, 0.0, -1.0))
    hit = ray_triangle_intersect(ray, tri)
    assert hit is not None
    w = 1.0 - hit.barycentric_u - hit.barycentric_v
    blended = w * tri.n0 + hit.barycentric_u * tri.n1 + hit.barycentric_v * tri.n2
    assert np.allclose(hit.shading_normal, normalize(blended), atol=1e-12)


# ---------------------------------------------------------------------------
# boxes
# ---------------------------------------------------------------------------


def unit_box():
    return Aabb(vec3(0, 0, 0), vec3(1, 1, 1))


def test_aabb_hit_from_outside():
    interval = ray_aabb_intersect(
        Ray(vec3(0.5, 0.5, 3.0), vec3(0.0, 0.0, -1.0)), unit_box())
    assert interval is not None
    t_enter, t_exit = interval
    assert abs(t_enter - 2.0) < 1e-12
    assert abs(t_exit - 3.0) < 1e-12


def test_aabb_origin_inside_clips_to_t_min():
    ray = Ray(vec3(0.5, 0.5, 0.5), vec3(1.0, 0.0, 0.0))
    interval = ray_aabb_intersect(ray, unit_box())
    assert interval is not None
    t_enter, t_exit = interval
    assert t_enter == ray.t_min
    assert abs(t_exit - 0.5) < 1e-12


def test_aabb_miss_offset_axis():
    assert ray_aabb_intersect(
        Ray(vec3(2.0, 0.5, 3.0), vec3(0.0, 0.0, -1.0)), unit_box()) is None


def test_aabb_behind_origin():
    assert ray_aabb_intersect(
        Ray(vec3(0.5, 0.5, 3.0), vec3(0.0, 0.0, 1.0)), unit_box()) is None


def test_aabb_axis_parallel_outside_slab():
    assert ray_aabb_intersect(
        Ray(vec3(0.5, 2.0, 0.5), vec3(1.0, 0.0, 0.0)), unit_box()) is None


def box_triangles(lo, hi):
    """The box boundary as 12 triangles (two per face)."""
    x0, y0, z0 = lo
    x1, y1, z1 = hi
    corners = np.array([
        [x0, y0, z0], [x1, y0, z0], [x1, y1, z0], [x0, y1, z0],
        [x0, y0, z1], [x1, y0, z1], [x1, y1, z1], [x0, y1, z1],
    ])
    quads = [
        (0, 1, 2, 3), (4, 5, 6, 7),  # z faces
        (0, 1, 5, 4), (3, 2, 6, 7),  # y faces
        (0, 3, 7, 4), (1, 2, 6, 5),  # x faces
    ]
    tris = []
    for a, b, c, d in quads:
        tris.append(make_tri(corners[a], corners[b], corners[c]))
        tris.append(make_tri(corners[a], corners[c], corners[d]))
    return tris


def test_slab_against_triangulated_box_oracle():
    """10,000 random ray/box pairs: the slab decision must match exhaustive
    intersection against the box's 12 boundary triangles."""
    rng = np.random.default_rng(77)
    disagreements = 0
    for _ in range(10_000):
        lo = rng.uniform(-2.0, 1.0, size=3)
        hi = lo + rng.uniform(0.1, 2.0, size=3)
        origin = rng.uniform(-4.0, 4.0, size=3)
        direction = normalize(rng.normal(size=3))
        ray = Ray(origin, direction)
        slab_hit = ray_aabb_intersect(ray, Aabb(vec3(*lo), vec3(*hi))) is not None
        tri_hit = any(
            ray_triangle_intersect(ray, tri) is not None
            for tri in box_triangles(lo, hi)
        )
        disagreements += slab_hit != tri_hit
    assert disagreements == 0


def test_bounds_never_reject_a_hittable_triangle():
    """Conservative-bounds property: any ray that hits a triangle must also
    hit that triangle's padded AABB."""
    rng = np.random.default_rng(31415)
    checked = 0
    while checked < 2000:
        verts = rng.uniform(-2.0, 2.0, size=(3, 3))
        tri = make_tri(*verts)
        origin = rng.uniform(-5.0, 5.0, size=3)
        target = (verts * rng.dirichlet([1, 1, 1])[:, None]).sum(axis=0)
        if np.linalg.norm(target - origin) < 1e-3:
            continue
        ray = Ray(origin, normalize(target - origin))
        if ray_triangle_intersect(ray, tri) is None:
            continue
        checked += 1
        assert ray_aabb_intersect(ray, triangle_bounds(tri)) is not None


def test_triangle_bounds_padding():
    tri = make_tri((0, 0, 0), (2, 0, 0), (0, 2, 0))  # planar in z
    box = triangle_bounds(tri)
    assert np.all(box.min < np.array([0.0, 0.0, 0.0]))
    assert np.all(box.max > np.array([2.0, 2.0, 0.0]))
    assert box.max[2] - box.min[2] > 0.0  # nonzero slab thickness


def test_aabb_union_and_area():
    a = Aabb(vec3(0, 0, 0), vec3(1, 1, 1))
    b = Aabb(vec3(0.5, -1, 0), vec3(2, 0.5, 3))
    u = aabb_union(a, b)
    assert np.allclose(u.min, (0, -1, 0))
    assert np.allclose(u.max, (2, 1, 3))
    u2 = aabb_union(b, a)
    assert np.allclose(u.min, u2.min) and np.allclose(u.max, u2.max)
    assert aabb_surface_area(a) == 6.0
    assert aabb_surface_area(Aabb.empty()) == 0.0
    merged = aabb_union(Aabb.empty(), a)
    assert np.allclose(merged.min, a.min) and np.allclose(merged.max, a.max)


# ---------------------------------------------------------------------------
# watertightness and validation
# ---------------------------------------------------------------------------


def test_icosphere_interior_rays_always_escape_once():
    """From strictly inside a watertight convex shell every ray crosses the
    surface exactly once; a cracked mesh would leak zero-crossing rays."""
    positions, indices = icosphere(subdivisions=2)
    faces = indices.reshape(-1, 3)
    tris = [make_tri(*positions[f]) for f in faces]
    rng = np.random.default_rng(271828)
    for _ in range(200):
        origin = rng.uniform(-0.4, 0.4, size=3)
        direction = normalize(rng.normal(size=3))
        ray = Ray(origin, direction, t_min=1e-9)
        crossings = sum(ray_triangle_intersect(ray, t) is not None for t in tris)
        assert crossings == 1


def test_ray_validation():
    with pytest.raises(ValueError):
        Ray(vec3(0, 0, 0), vec3(0, 0, 2.0))  # not unit length
    with pytest.raises(ValueError):
        Ray(vec3(0, 0, 0), vec3(0, 0, 1.0), t_min=-1.0)
    with pytest.raises(ValueError):
        Ray(vec3(0, 0, 0), vec3(0, 0, 1.0), t_min=2.0, t_max=1.0)


def test_normalize_rejects_zero():
    with pytest.raises(ValueError):
        normalize(vec3(0, 0, 0))
    v = normalize(vec3(3, 0, 4))
    assert np.allclose(v, (0.6, 0.0, 0.8))


def test_triangle_buffer_shape_checks():
    good = np.zeros((4, 3))
    with pytest.raises(ValueError):
        TriangleBuffer(np.zeros((4, 2)), good, good, good, good, good)
    with pytest.raises(ValueError):
        TriangleBuffer(good, good, good, good, good, good,
                       material_index=np.zeros(3, np.int32))


def test_triangle_buffer_round_trip():
    rng = np.random.default_rng(8)
    tris = [
        make_tri(*rng.uniform(-1, 1, size=(3, 3)))
        for _ in range(5)
    ]
    buf = TriangleBuffer.from_triangles(tris)
    assert len(buf) == 5
    assert buf.material_index.dtype == np.int32
    back = buf[2]
    assert np.allclose(back.v0, tris[2].v0)
    assert np.allclose(back.n1, tris[2].n1)
