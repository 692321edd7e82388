"""Regenerate the binary test fixtures in this directory.

Run from the repository root after an intentional change to the geometry
generators or the renderer:

    python3 tests/fixtures/generate.py

Outputs (committed to the repository):
  icosphere.glb        smooth-shaded icosphere, 320 triangles, material "shell"
  furnace.glb          flat-shaded enclosing shell, 80 triangles, material
                       "furnace_wall" (normals equal the face normal at every
                       vertex so the analytic bounce series is exact)
  ref_triangle.png     frozen reference render of triangle.gltf
  ref_icosphere.png    frozen reference render of icosphere.glb

triangle.gltf and the *_config.json files are hand-authored; they are not
touched here.  The reference images define the regression baseline: they must
only be regenerated after a deliberate, understood change to the render
output, never to quiet a failing comparison.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from luxtrace import (
    RenderSettings,
    build_bvh,
    icosphere,
    load_scene,
    render_image,
    save_glb,
    tonemap_to_u8,
    write_png,
)

FIXTURE_DIR = Path(__file__).resolve().parent

REF_SPP = 64
REF_SEED = 7


def make_icosphere_glb() -> None:
    positions, indices = icosphere(subdivisions=2, radius=1.0)
    # Smooth shading: vertex normals on a unit sphere equal the positions.
    normals = positions / np.linalg.norm(positions, axis=1, keepdims=True)
    save_glb(FIXTURE_DIR / "icosphere.glb", positions, indices, normals,
             material_name="shell")
    print(f"icosphere.glb: {indices.size // 3} triangles")


def make_furnace_glb() -> None:
    positions, indices = icosphere(subdivisions=1, radius=1.0)
    faces = indices.reshape(-1, 3)
    # Duplicate vertices per face and assign the face normal to all three
    # corners.  Flat shading keeps every scattering cosine strictly positive
    # from inside the shell, so no path terminates on a grazing shading
    # normal and the interior radiance matches the truncated series exactly.
    corners = positions[faces]                       # (f, 3, 3)
    e1 = corners[:, 1] - corners[:, 0]
    e2 = corners[:, 2] - corners[:, 0]
    face_n = np.cross(e1, e2)
    face_n /= np.linalg.norm(face_n, axis=1, keepdims=True)
    flat_pos = corners.reshape(-1, 3)
    flat_nrm = np.repeat(face_n, 3, axis=0)
    flat_idx = np.arange(flat_pos.shape[0], dtype=np.int64)
    save_glb(FIXTURE_DIR / "furnace.glb", flat_pos, flat_idx, flat_nrm,
             material_name="furnace_wall")
    print(f"furnace.glb: {faces.shape[0]} triangles (flat normals)")


def make_reference_png(scene_name: str, config_name: str, out_name: str) -> None:
    scene = load_scene(FIXTURE_DIR / scene_name, FIXTURE_DIR / config_name)
    bvh = build_bvh(scene.triangles)
    settings = RenderSettings(samples_per_pixel=REF_SPP, seed=REF_SEED)
    image = render_image(scene, settings, bvh=bvh)
    write_png(FIXTURE_DIR / out_name, tonemap_to_u8(image))
    print(f"{out_name}: {image.shape[1]}x{image.shape[0]}, {REF_SPP} spp, seed {REF_SEED}")


def main() -> None:
    make_icosphere_glb()
    make_furnace_glb()
    make_reference_png("triangle.gltf", "triangle_config.json", "ref_triangle.png")
    make_reference_png("icosphere.glb", "icosphere_config.json", "ref_icosphere.png")


if __name__ == "__main__":
    main()
