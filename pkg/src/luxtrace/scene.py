"""Scene ingestion: a glTF 2.0 subset loader, the render-config / material-map
document, and flattening of the node hierarchy into a world-space triangle
soup.

Supported glTF: .gltf JSON with external or data-URI buffers, and binary .glb
containers; TRIANGLES-mode primitives with POSITION/NORMAL/indices accessors;
node TRS or matrix hierarchies.  Everything else (skins, animation, cameras,
textures, sparse accessors) is out of scope and rejected with an error that
names the offending element.

Cameras and environments do not come from glTF; they live in the JSON render
config (schema in docs/formats.md) together with the material map that binds
glTF material names to surface parameters.
"""
from __future__ import annotations

import base64
import json
import math
import struct
from dataclasses import dataclass, field
from pathlib import Path
from urllib.parse import unquote

import numpy as np

from .geometry import TriangleBuffer
from .material import OpenPbrParams

DEGENERATE_AREA_SCALE = 1e-12   # area threshold, relative to bbox_extent^2

_GLB_MAGIC = 0x46546C67
_CHUNK_JSON = 0x4E4F534A
_CHUNK_BIN = 0x004E4942

_COMPONENT_DTYPES = {
    5120: np.int8, 5121: np.uint8, 5122: np.int16,
    5123: np.uint16, 5125: np.uint32, 5126: np.float32,
}
_TYPE_COUNTS = {"SCALAR": 1, "VEC2": 2, "VEC3": 3, "VEC4": 4, "MAT4": 16}
_INDEX_COMPONENTS = (5121, 5123, 5125)


class SceneError(ValueError):
    """Raised for any malformed or unsupported scene input."""


# ---------------------------------------------------------------------------
# render configuration
# ---------------------------------------------------------------------------

@dataclass
class CameraConfig:
    position: np.ndarray
    look_at: np.ndarray
    up: np.ndarray = field(default_factory=lambda: np.array([0.0, 1.0, 0.0]))
    vertical_fov_deg: float = 45.0
    width: int = 512
    height: int = 512

    def __post_init__(self) -> None:
        self.position = np.asarray(self.position, dtype=np.float64)
        self.look_at = np.asarray(self.look_at, dtype=np.float64)
        self.up = np.asarray(self.up, dtype=np.float64)
        for name in ("position", "look_at", "up"):
            v = getattr(self, name)
            if v.shape != (3,) or not np.all(np.isfinite(v)):
                raise SceneError(f"camera {name} must be three finite numbers, got {v!r}")
        forward = self.look_at - self.position
        if float(np.linalg.norm(forward)) == 0.0:
            raise SceneError("camera position and look_at must differ")
        if float(np.linalg.norm(self.up)) == 0.0:
            raise SceneError("camera up must be non-zero")
        if float(np.linalg.norm(np.cross(forward, self.up))) < 1e-9:
            raise SceneError("camera up must not be parallel to the view direction")
        if not (0.0 < self.vertical_fov_deg < 180.0):
            raise SceneError(f"vertical_fov_deg must lie in (0, 180), got {self.vertical_fov_deg}")
        self.width = int(self.width)
        self.height = int(self.height)
        if self.width < 1 or self.height < 1:
            raise SceneError("image width and height must be >= 1")


@dataclass
class EnvironmentConfig:
    """The only light source: 'uniform' radiance, or a vertical 'gradient'
    blending horizon -> zenith over upward direction y in [0, 1] (directions
    below the horizon see the horizon color)."""

    kind: str
    radiance: np.ndarray = field(default_factory=lambda: np.zeros(3))
    zenith: np.ndarray = field(default_factory=lambda: np.zeros(3))
    horizon: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self) -> None:
        if self.kind not in ("uniform", "gradient"):
            raise SceneError(f"environment type must be 'uniform' or 'gradient', got {self.kind!r}")
        for name in ("radiance", "zenith", "horizon"):
            v = np.asarray(getattr(self, name), dtype=np.float64)
            if v.shape != (3,) or np.any(v < 0.0) or not np.all(np.isfinite(v)):
                raise SceneError(f"environment {name} must be three non-negative numbers")
            setattr(self, name, v)

    @classmethod
    def uniform(cls, radiance) -> "EnvironmentConfig":
        return cls(kind="uniform", radiance=np.asarray(radiance, dtype=np.float64))

    @classmethod
    def gradient(cls, zenith, horizon) -> "EnvironmentConfig":
        return cls(kind="gradient", zenith=np.asarray(zenith, dtype=np.float64),
                   horizon=np.asarray(horizon, dtype=np.float64))


@dataclass
class MaterialMap:
    """Ordered name -> parameter bindings.  A pattern is either an exact glTF
    material name or a prefix with one trailing '*'; the first matching entry
    wins."""

    entries: list[tuple[str, OpenPbrParams]] = field(default_factory=list)
    default: OpenPbrParams = field(default_factory=OpenPbrParams)

    def __post_init__(self) -> None:
        for pattern, _ in self.entries:
            stars = pattern.count("*")
            if stars > 1 or (stars == 1 and not pattern.endswith("*")):
                raise SceneError(
                    f"material pattern {pattern!r}: only a single trailing '*' wildcard is supported")

    def resolve(self, name: str) -> OpenPbrParams | None:
        for pattern, params in self.entries:
            if pattern.endswith("*"):
                if name.startswith(pattern[:-1]):
                    return params
            elif name == pattern:
                return params
        return None


@dataclass
class RenderConfig:
    camera: CameraConfig
    environment: EnvironmentConfig
    materials: MaterialMap


def _params_from_dict(d: dict, where: str) -> OpenPbrParams:
    if not isinstance(d, dict):
        raise SceneError(f"{where}: material parameters must be an object, got {type(d).__name__}")
    allowed = set(OpenPbrParams.__dataclass_fields__)
    kwargs = {}
    for key, value in d.items():
        if key not in allowed:
            raise SceneError(f"{where}: unknown material parameter {key!r}")
        if key.endswith("_color") or key == "base_color":
            if not (isinstance(value, (list, tuple)) and len(value) == 3):
                raise SceneError(f"{where}: {key} must be a list of three numbers")
            kwargs[key] = tuple(float(c) for c in value)
        else:
            kwargs[key] = float(value)
    try:
        return OpenPbrParams(**kwargs)
    except ValueError as exc:
        raise SceneError(f"{where}: {exc}") from exc


def load_render_config(path) -> RenderConfig:
    path = Path(path)
    if not path.is_file():
        raise SceneError(f"config file not found: {path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SceneError(f"malformed config JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise SceneError(f"config root must be an object: {path}")

    known = {"camera", "environment", "materials", "default_material"}
    unknown = set(doc) - known
    if unknown:
        raise SceneError(f"unknown config keys {sorted(unknown)}; expected a subset of {sorted(known)}")
    for required in ("camera", "environment"):
        if required not in doc:
            raise SceneError(f"config is missing the required '{required}' section")

    cam = doc["camera"]
    if not isinstance(cam, dict) or "position" not in cam or "look_at" not in cam:
        raise SceneError("camera section must contain 'position' and 'look_at'")
    camera = CameraConfig(
        position=cam["position"], look_at=cam["look_at"],
        up=cam.get("up", (0.0, 1.0, 0.0)),
        vertical_fov_deg=float(cam.get("vertical_fov_deg", 45.0)),
        width=int(cam.get("width", 512)), height=int(cam.get("height", 512)))

    env = doc["environment"]
    if not isinstance(env, dict) or "type" not in env:
        raise SceneError("environment section must contain a 'type'")
    if env["type"] == "uniform":
        if "radiance" not in env:
            raise SceneError("uniform environment requires 'radiance'")
        environment = EnvironmentConfig.uniform(env["radiance"])
    elif env["type"] == "gradient":
        if "zenith" not in env or "horizon" not in env:
            raise SceneError("gradient environment requires 'zenith' and 'horizon'")
        environment = EnvironmentConfig.gradient(env["zenith"], env["horizon"])
    else:
        raise SceneError(f"environment type must be 'uniform' or 'gradient', got {env['type']!r}")

    entries = []
    for pattern, params in doc.get("materials", {}).items():
        entries.append((pattern, _params_from_dict(params, f"materials[{pattern!r}]")))
    default = (_params_from_dict(doc["default_material"], "default_material")
               if "default_material" in doc else OpenPbrParams())
    return RenderConfig(camera, environment, MaterialMap(entries, default))


# ---------------------------------------------------------------------------
# glTF document
# ---------------------------------------------------------------------------

@dataclass
class GltfPrimitive:
    positions: np.ndarray            # (n, 3) float64
    normals: np.ndarray | None       # (n, 3) float64 or None
    indices: np.ndarray              # (3k,) int64
    material_name: str | None
    material_fallback: OpenPbrParams | None


@dataclass
class GltfMesh:
    name: str
    primitives: list[GltfPrimitive]


@dataclass
class GltfNode:
    name: str
    matrix: np.ndarray               # (4, 4) float64 local transform
    mesh: int | None
    children: list[int]


@dataclass
class GltfDocument:
    meshes: list[GltfMesh]
    nodes: list[GltfNode]
    roots: list[int]


def _parse_glb(data: bytes, path: Path) -> tuple[dict, bytes | None]:
    if len(data) < 12:
        raise SceneError(f"{path}: truncated GLB header")
    magic, version, length = struct.unpack_from("<III", data, 0)
    if magic != _GLB_MAGIC:
        raise SceneError(f"{path}: not a GLB container (bad magic)")
    if version != 2:
        raise SceneError(f"{path}: unsupported GLB version {version}")
    json_doc = None
    binary = None
    offset = 12
    while offset + 8 <= min(length, len(data)):
        chunk_len, chunk_type = struct.unpack_from("<II", data, offset)
        offset += 8
        if offset + chunk_len > len(data):
            raise SceneError(f"{path}: GLB chunk at byte {offset - 8} overruns the file")
        payload = data[offset:offset + chunk_len]
        offset += chunk_len
        if chunk_type == _CHUNK_JSON:
            try:
                json_doc = json.loads(payload)
            except json.JSONDecodeError as exc:
                raise SceneError(f"{path}: malformed glTF JSON chunk: {exc}") from exc
        elif chunk_type == _CHUNK_BIN:
            binary = payload
    if json_doc is None:
        raise SceneError(f"{path}: GLB container has no JSON chunk")
    return json_doc, binary


def _resolve_buffers(gltf: dict, base_dir: Path, glb_bin: bytes | None) -> list[bytes]:
    out = []
    for i, buf in enumerate(gltf.get("buffers", [])):
        uri = buf.get("uri")
        if uri is None:
            if glb_bin is None:
                raise SceneError(f"buffer {i}: no URI and no GLB binary chunk")
            data = glb_bin
        elif uri.startswith("data:"):
            try:
                _, b64 = uri.split(",", 1)
                data = base64.b64decode(b64)
            except (ValueError, base64.binascii.Error) as exc:
                raise SceneError(f"buffer {i}: malformed data URI: {exc}") from exc
        else:
            ext = base_dir / unquote(uri)
            if not ext.is_file():
                raise SceneError(f"buffer {i}: file not found: {ext}")
            data = ext.read_bytes()
        length = buf.get("byteLength", len(data))
        if len(data) < length:
            raise SceneError(f"buffer {i}: expected {length} bytes, got {len(data)}")
        out.append(data[:length])
    return out


def _read_accessor(gltf: dict, buffers: list[bytes], idx: int) -> np.ndarray:
    accessors = gltf.get("accessors", [])
    if not 0 <= idx < len(accessors):
        raise SceneError(f"accessor {idx} does not exist")
    acc = accessors[idx]
    if "sparse" in acc:
        raise SceneError(f"accessor {idx}: sparse accessors are not supported")
    ctype = acc.get("componentType")
    if ctype not in _COMPONENT_DTYPES:
        raise SceneError(f"accessor {idx}: unsupported componentType {ctype}")
    if acc.get("type") not in _TYPE_COUNTS:
        raise SceneError(f"accessor {idx}: unsupported type {acc.get('type')!r}")
    dtype = np.dtype(_COMPONENT_DTYPES[ctype])
    ncomp = _TYPE_COUNTS[acc["type"]]
    count = int(acc.get("count", 0))
    if count == 0:
        return np.zeros((0, ncomp), dtype=dtype)

    bv_idx = acc.get("bufferView")
    if bv_idx is None:
        return np.zeros((count, ncomp), dtype=dtype)
    views = gltf.get("bufferViews", [])
    if not 0 <= bv_idx < len(views):
        raise SceneError(f"accessor {idx}: bufferView {bv_idx} does not exist")
    bv = views[bv_idx]
    buf_idx = bv.get("buffer", 0)
    if not 0 <= buf_idx < len(buffers):
        raise SceneError(f"accessor {idx}: buffer {buf_idx} does not exist")
    raw = buffers[buf_idx]

    tight = dtype.itemsize * ncomp
    stride = int(bv.get("byteStride", 0)) or tight
    start = int(bv.get("byteOffset", 0)) + int(acc.get("byteOffset", 0))
    end = start + stride * (count - 1) + tight
    view_end = int(bv.get("byteOffset", 0)) + int(bv.get("byteLength", len(raw)))
    if end > len(raw) or end > view_end:
        raise SceneError(f"accessor {idx}: data range [{start}, {end}) overruns its buffer view")

    if stride == tight:
        flat = np.frombuffer(raw, dtype=dtype, count=count * ncomp, offset=start)
        return flat.reshape(count, ncomp)
    bytes_view = np.frombuffer(raw, dtype=np.uint8)
    gathered = np.lib.stride_tricks.as_strided(
        bytes_view[start:], shape=(count, tight), strides=(stride, 1)).copy()
    return gathered.view(dtype).reshape(count, ncomp)


def _node_matrix(node: dict, index: int) -> np.ndarray:
    if "matrix" in node:
        m = np.asarray(node["matrix"], dtype=np.float64)
        if m.size != 16:
            raise SceneError(f"node {index}: matrix must have 16 entries")
        return m.reshape(4, 4, order="F")  # glTF matrices are column-major
    m = np.eye(4)
    if "scale" in node:
        m[0, 0], m[1, 1], m[2, 2] = (float(s) for s in node["scale"])
    if "rotation" in node:
        x, y, z, w = (float(c) for c in node["rotation"])
        n = math.sqrt(x * x + y * y + z * z + w * w)
        if n == 0.0:
            raise SceneError(f"node {index}: zero-length rotation quaternion")
        x, y, z, w = x / n, y / n, z / n, w / n
        rot = np.array([
            [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
            [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
            [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
        ])
        r4 = np.eye(4)
        r4[:3, :3] = rot
        m = r4 @ m
    if "translation" in node:
        t = np.eye(4)
        t[:3, 3] = [float(c) for c in node["translation"]]
        m = t @ m
    return m


def load_gltf(path) -> GltfDocument:
    """Parse a .gltf/.glb file into an intermediate document (mesh-space
    geometry plus the node hierarchy)."""
    path = Path(path)
    if not path.is_file():
        raise SceneError(f"scene file not found: {path}")
    raw = path.read_bytes()
    if raw[:4] == b"glTF":
        gltf, glb_bin = _parse_glb(raw, path)
    else:
        try:
            gltf = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise SceneError(f"{path}: malformed glTF JSON: {exc}") from exc
        glb_bin = None
    if not isinstance(gltf, dict):
        raise SceneError(f"{path}: glTF root must be a JSON object")

    buffers = _resolve_buffers(gltf, path.parent, glb_bin)

    gltf_materials = gltf.get("materials", [])

    meshes: list[GltfMesh] = []
    for mi, mesh in enumerate(gltf.get("meshes", [])):
        name = mesh.get("name", f"mesh_{mi}")
        prims: list[GltfPrimitive] = []
        for pi, prim in enumerate(mesh.get("primitives", [])):
            where = f"mesh {mi} ({name!r}) primitive {pi}"
            mode = prim.get("mode", 4)
            if mode != 4:
                raise SceneError(f"{where}: unsupported primitive mode {mode}; "
                                 "only TRIANGLES (4) is supported")
            attrs = prim.get("attributes", {})
            if "POSITION" not in attrs:
                raise SceneError(f"{where}: missing POSITION attribute")
            pos_acc = gltf["accessors"][attrs["POSITION"]] if attrs["POSITION"] < len(
                gltf.get("accessors", [])) else {}
            if pos_acc.get("componentType") != 5126 or pos_acc.get("type") != "VEC3":
                raise SceneError(f"{where}: POSITION must be a float32 VEC3 accessor")
            positions = _read_accessor(gltf, buffers, attrs["POSITION"]).astype(np.float64)

            normals = None
            if "NORMAL" in attrs:
                nrm_acc = gltf["accessors"][attrs["NORMAL"]]
                if nrm_acc.get("componentType") != 5126 or nrm_acc.get("type") != "VEC3":
                    raise SceneError(f"{where}: NORMAL must be a float32 VEC3 accessor")
                normals = _read_accessor(gltf, buffers, attrs["NORMAL"]).astype(np.float64)
                if normals.shape != positions.shape:
                    raise SceneError(f"{where}: NORMAL count differs from POSITION count")

            if "indices" in prim:
                idx_acc = gltf["accessors"][prim["indices"]] if prim["indices"] < len(
                    gltf.get("accessors", [])) else {}
                if idx_acc.get("componentType") not in _INDEX_COMPONENTS or \
                        idx_acc.get("type") != "SCALAR":
                    raise SceneError(f"{where}: indices must be a scalar u8/u16/u32 accessor")
                indices = _read_accessor(gltf, buffers, prim["indices"]).astype(np.int64).ravel()
            else:
                indices = np.arange(positions.shape[0], dtype=np.int64)
            if indices.size % 3 != 0:
                raise SceneError(f"{where}: index count {indices.size} is not a multiple of 3")
            if indices.size and (indices.min() < 0 or indices.max() >= positions.shape[0]):
                raise SceneError(f"{where}: index out of range")

            material_name = None
            fallback = None
            if "material" in prim:
                m_idx = prim["material"]
                if not 0 <= m_idx < len(gltf_materials):
                    raise SceneError(f"{where}: material {m_idx} does not exist")
                mat = gltf_materials[m_idx]
                material_name = mat.get("name", f"material_{m_idx}")
                pbr = mat.get("pbrMetallicRoughness", {})
                base = pbr.get("baseColorFactor", [1.0, 1.0, 1.0, 1.0])
                fallback = OpenPbrParams(
                    base_color=tuple(min(max(float(c), 0.0), 1.0) for c in base[:3]),
                    base_metalness=min(max(float(pbr.get("metallicFactor", 1.0)), 0.0), 1.0),
                    specular_roughness=min(max(float(pbr.get("roughnessFactor", 1.0)), 0.0), 1.0),
                )
            prims.append(GltfPrimitive(positions, normals, indices, material_name, fallback))
        meshes.append(GltfMesh(name, prims))

    nodes: list[GltfNode] = []
    for ni, node in enumerate(gltf.get("nodes", [])):
        mesh_idx = node.get("mesh")
        if mesh_idx is not None and not 0 <= mesh_idx < len(meshes):
            raise SceneError(f"node {ni}: mesh {mesh_idx} does not exist")
        nodes.append(GltfNode(node.get("name", f"node_{ni}"), _node_matrix(node, ni),
                              mesh_idx, list(node.get("children", []))))

    scenes = gltf.get("scenes", [])
    if scenes:
        scene_idx = gltf.get("scene", 0)
        if not 0 <= scene_idx < len(scenes):
            raise SceneError(f"default scene {scene_idx} does not exist")
        roots = list(scenes[scene_idx].get("nodes", []))
    else:
        is_child = {c for n in nodes for c in n.children}
        roots = [i for i in range(len(nodes)) if i not in is_child]
    for r in roots:
        if not 0 <= r < len(nodes):
            raise SceneError(f"scene references node {r} which does not exist")
    return GltfDocument(meshes, nodes, roots)


# ---------------------------------------------------------------------------
# flattening
# ---------------------------------------------------------------------------

def generate_smooth_normals(positions: np.ndarray, indices: np.ndarray) -> np.ndarray:
    """Area-weighted vertex normals: accumulate face cross products and
    normalize."""
    v0 = positions[indices[0::3]]
    v1 = positions[indices[1::3]]
    v2 = positions[indices[2::3]]
    face = np.cross(v1 - v0, v2 - v0)  # length = 2 * area, the weighting
    out = np.zeros_like(positions)
    for corner in (indices[0::3], indices[1::3], indices[2::3]):
        np.add.at(out, corner, face)
    norms = np.linalg.norm(out, axis=1, keepdims=True)
    zero = norms[:, 0] == 0.0
    out[zero] = (0.0, 0.0, 1.0)
    norms[zero] = 1.0
    return out / norms


@dataclass
class SceneDescription:
    triangles: TriangleBuffer
    materials: list[OpenPbrParams]
    camera: CameraConfig
    environment: EnvironmentConfig
    degenerate_dropped: int = 0


def flatten_scene(doc: GltfDocument, materials: MaterialMap,
                  camera: CameraConfig, environment: EnvironmentConfig) -> SceneDescription:
    """Bake node transforms into a world-space triangle soup, resolve
    materials and drop degenerate triangles."""
    chunks = []  # (v0, v1, v2, n0, n1, n2, material_index)
    resolved: dict[OpenPbrParams, int] = {}
    material_list: list[OpenPbrParams] = []

    def material_index(params: OpenPbrParams) -> int:
        if params not in resolved:
            resolved[params] = len(material_list)
            material_list.append(params)
        return resolved[params]

    def visit(node_idx: int, parent: np.ndarray, trail: tuple[int, ...]) -> None:
        if node_idx in trail:
            raise SceneError(f"node {node_idx}: cycle in node hierarchy")
        node = doc.nodes[node_idx]
        world = parent @ node.matrix
        if node.mesh is not None:
            linear = world[:3, :3]
            det = float(np.linalg.det(linear))
            if det == 0.0:
                raise SceneError(f"node {node_idx} ({node.name!r}): singular transform")
            normal_mat = np.linalg.inv(linear).T
            for prim in doc.meshes[node.mesh].primitives:
                pos = prim.positions @ linear.T + world[:3, 3]
                local_n = prim.normals
                if local_n is None:
                    local_n = generate_smooth_normals(prim.positions, prim.indices)
                nrm = local_n @ normal_mat.T
                params = materials.resolve(prim.material_name) if prim.material_name else None
                if params is None:
                    params = prim.material_fallback
                if params is None:
                    params = materials.default
                mat_idx = material_index(params)
                idx = prim.indices
                chunks.append((pos[idx[0::3]], pos[idx[1::3]], pos[idx[2::3]],
                               nrm[idx[0::3]], nrm[idx[1::3]], nrm[idx[2::3]], mat_idx))
        for child in node.children:
            visit(child, world, trail + (node_idx,))

    for root in doc.roots:
        visit(root, np.eye(4), ())

    if not chunks or sum(c[0].shape[0] for c in chunks) == 0:
        raise SceneError("empty scene")

    v0 = np.vstack([c[0] for c in chunks])
    v1 = np.vstack([c[1] for c in chunks])
    v2 = np.vstack([c[2] for c in chunks])
    n0 = np.vstack([c[3] for c in chunks])
    n1 = np.vstack([c[4] for c in chunks])
    n2 = np.vstack([c[5] for c in chunks])
    mat = np.concatenate([np.full(c[0].shape[0], c[6], dtype=np.int32) for c in chunks])

    # degenerate filter, relative to the whole scene's bounding box
    all_pts = np.vstack([v0, v1, v2])
    extent = float(np.max(all_pts.max(axis=0) - all_pts.min(axis=0)))
    areas = 0.5 * np.linalg.norm(np.cross(v1 - v0, v2 - v0), axis=1)
    # strict comparison so exact-zero areas are dropped even when the whole
    # scene collapses to a point (extent 0 would otherwise accept them)
    keep = areas > DEGENERATE_AREA_SCALE * extent * extent
    dropped = int(np.count_nonzero(~keep))
    if not np.any(keep):
        raise SceneError("empty scene")

    def unit_rows(a: np.ndarray) -> np.ndarray:
        norms = np.linalg.norm(a, axis=1, keepdims=True)
        norms[norms == 0.0] = 1.0
        return a / norms

    triangles = TriangleBuffer(
        v0[keep], v1[keep], v2[keep],
        unit_rows(n0[keep]), unit_rows(n1[keep]), unit_rows(n2[keep]),
        mat[keep])
    return SceneDescription(triangles, material_list, camera, environment, dropped)


def load_scene(scene_path, config_path) -> SceneDescription:
    """Convenience: parse the glTF file and the render config, then flatten."""
    config = load_render_config(config_path)
    doc = load_gltf(scene_path)
    return flatten_scene(doc, config.materials, config.camera, config.environment)
