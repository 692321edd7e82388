"""Procedural test geometry: an icosphere, a displaced sphere with an exact
triangle count for benchmark sweeps, and a minimal GLB writer so generated
meshes round-trip through the regular ingestion path.

Everything here is deterministic: same arguments, same bytes.
"""
from __future__ import annotations

import json
import math
import struct
from pathlib import Path

import numpy as np

from .scene import generate_smooth_normals

_GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


def icosphere(subdivisions: int = 2, radius: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Subdivided icosahedron projected onto a sphere.

    Returns (positions (n, 3) float64, indices (3k,) int64) with
    k = 20 * 4**subdivisions faces.  Watertight: every edge is shared by
    exactly two faces.
    """
    if subdivisions < 0:
        raise ValueError("subdivisions must be >= 0")
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    t = _GOLDEN
    verts = np.array([
        [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
        [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
        [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
    ], dtype=np.float64)
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    verts = [v / np.linalg.norm(v) for v in verts]

    for _ in range(subdivisions):
        midpoint_cache: dict[tuple[int, int], int] = {}

        def midpoint(a: int, b: int) -> int:
            key = (a, b) if a < b else (b, a)
            cached = midpoint_cache.get(key)
            if cached is not None:
                return cached
            m = verts[a] + verts[b]
            m = m / np.linalg.norm(m)
            verts.append(m)
            midpoint_cache[key] = len(verts) - 1
            return len(verts) - 1

        next_faces = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            next_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = next_faces

    positions = np.asarray(verts) * radius
    indices = np.asarray(faces, dtype=np.int64).ravel()
    return positions, indices


def bumpy_sphere(n_triangles: int, bump_amplitude: float = 0.12,
                 bump_frequencies: tuple[float, float] = (6.0, 4.0),
                 radius: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """A latitude/longitude sphere with a sinusoidal radial displacement,
    truncated to exactly ``n_triangles`` faces.

    The same displaced surface at increasing tessellation levels serves as a
    triangle-count sweep for benchmarks; the truncation trims the final face
    row so any requested count is met exactly.
    """
    if n_triangles < 1:
        raise ValueError("n_triangles must be >= 1")
    # grid of nu x nv quads (2 triangles each) spanning an open sphere; pick
    # a near-square grid generating at least n_triangles faces
    nu = max(int(math.ceil(math.sqrt(n_triangles / 2.0))), 1)
    nv = max(int(math.ceil(n_triangles / (2.0 * nu))), 1)

    fu, fv = bump_frequencies
    # open at the poles: theta stays inside (0, pi) so every quad is non-degenerate
    theta = np.linspace(math.pi / (nv + 2), math.pi * (nv + 1) / (nv + 2), nv + 1)
    phi = np.linspace(0.0, 2.0 * math.pi, nu + 1)            # duplicated seam column

    tg, pg = np.meshgrid(theta, phi, indexing="ij")           # (nv+1, nu+1)
    r = radius * (1.0 + bump_amplitude * np.sin(fu * tg) * np.cos(fv * pg))
    x = r * np.sin(tg) * np.cos(pg)
    y = r * np.cos(tg)
    z = r * np.sin(tg) * np.sin(pg)
    positions = np.stack([x, y, z], axis=-1).reshape(-1, 3)

    # two triangles per quad, row-major
    row = np.arange(nv)[:, None]
    col = np.arange(nu)[None, :]
    i00 = row * (nu + 1) + col
    i01 = i00 + 1
    i10 = i00 + (nu + 1)
    i11 = i10 + 1
    tri_a = np.stack([i00, i10, i01], axis=-1).reshape(-1, 3)
    tri_b = np.stack([i01, i10, i11], axis=-1).reshape(-1, 3)
    faces = np.empty((tri_a.shape[0] * 2, 3), dtype=np.int64)
    faces[0::2] = tri_a
    faces[1::2] = tri_b
    if faces.shape[0] < n_triangles:
        raise AssertionError("grid sizing produced too few faces")
    return positions, faces[:n_triangles].ravel()


def save_glb(path, positions: np.ndarray, indices: np.ndarray,
             normals: np.ndarray | None = None,
             material_name: str | None = None) -> None:
    """Write a single-mesh GLB file (positions + optional normals + u32
    indices, one node, one scene)."""
    path = Path(path)
    positions = np.ascontiguousarray(positions, dtype=np.float32)
    indices = np.ascontiguousarray(indices, dtype=np.uint32).ravel()
    if positions.ndim != 2 or positions.shape[1] != 3:
        raise ValueError("positions must have shape (n, 3)")
    if indices.size % 3 != 0:
        raise ValueError("index count must be a multiple of 3")
    if normals is not None:
        normals = np.ascontiguousarray(normals, dtype=np.float32)
        if normals.shape != positions.shape:
            raise ValueError("normals must match positions in shape")

    def pad4(data: bytes, filler: bytes) -> bytes:
        return data + filler * (-len(data) % 4)

    blobs = [positions.tobytes()]
    if normals is not None:
        blobs.append(normals.tobytes())
    blobs.append(indices.tobytes())

    views = []
    accessors = []
    offset = 0
    for blob in blobs:
        views.append({"buffer": 0, "byteOffset": offset, "byteLength": len(blob)})
        offset += len(pad4(blob, b"\x00"))
    binary = b"".join(pad4(b, b"\x00") for b in blobs)

    accessors.append({
        "bufferView": 0, "componentType": 5126, "count": int(positions.shape[0]),
        "type": "VEC3",
        "min": [float(v) for v in positions.min(axis=0)],
        "max": [float(v) for v in positions.max(axis=0)],
    })
    attributes = {"POSITION": 0}
    if normals is not None:
        accessors.append({"bufferView": 1, "componentType": 5126,
                          "count": int(normals.shape[0]), "type": "VEC3"})
        attributes["NORMAL"] = 1
    accessors.append({"bufferView": len(views) - 1, "componentType": 5125,
                      "count": int(indices.size), "type": "SCALAR"})

    primitive = {"attributes": attributes, "indices": len(accessors) - 1, "mode": 4}
    doc = {
        "asset": {"version": "2.0", "generator": "luxtrace.procgen"},
        "buffers": [{"byteLength": len(binary)}],
        "bufferViews": views,
        "accessors": accessors,
        "meshes": [{"name": "mesh_0", "primitives": [primitive]}],
        "nodes": [{"mesh": 0, "name": "node_0"}],
        "scenes": [{"nodes": [0]}],
        "scene": 0,
    }
    if material_name is not None:
        doc["materials"] = [{"name": material_name,
                             "pbrMetallicRoughness": {
                                 "baseColorFactor": [0.8, 0.8, 0.8, 1.0],
                                 "metallicFactor": 0.0, "roughnessFactor": 0.5}}]
        primitive["material"] = 0

    json_chunk = pad4(json.dumps(doc, separators=(",", ":")).encode(), b" ")
    bin_chunk = pad4(binary, b"\x00")
    total = 12 + 8 + len(json_chunk) + 8 + len(bin_chunk)
    with open(path, "wb") as fh:
        fh.write(struct.pack("<III", 0x46546C67, 2, total))
        fh.write(struct.pack("<II", len(json_chunk), 0x4E4F534A))
        fh.write(json_chunk)
        fh.write(struct.pack("<II", len(bin_chunk), 0x004E4942))
        fh.write(bin_chunk)


def icosphere_glb(path, subdivisions: int = 2, radius: float = 1.0,
                  material_name: str | None = None) -> int:
    """Generate an icosphere and save it as GLB; returns the triangle count."""
    positions, indices = icosphere(subdivisions, radius)
    normals = generate_smooth_normals(positions, indices)
    save_glb(path, positions, indices, normals, material_name)
    return indices.size // 3


def bumpy_sphere_glb(path, n_triangles: int, material_name: str | None = None) -> int:
    """Generate a displaced sphere with exactly n_triangles faces as GLB."""
    positions, indices = bumpy_sphere(n_triangles)
    normals = generate_smooth_normals(positions, indices)
    save_glb(path, positions, indices, normals, material_name)
    return indices.size // 3
