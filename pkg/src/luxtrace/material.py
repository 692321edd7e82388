"""OpenPBR-style surface model: one uber-shader with a metallic GGX lobe, a
dielectric GGX lobe and a Fresnel-coupled Lambertian base, blended by
`base_metalness`.

Conventions: `wo` points from the surface toward the viewer, `wi` toward the
light, both unit length and expressed in world space; `n` is the unit shading
normal with dot(n, wo) > 0.  `eval_bsdf` returns the BSDF value without the
cosine; `sample_bsdf` returns the full throughput weight f * cos / pdf for
its own exact mixture density `pdf_bsdf`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _parallel  # noqa: F401
from numba import njit

ALPHA_MIN = 1e-4  # roughness^2 clamp; at the clamp the GGX lobe is a near-mirror spike
_INV_PI = 1.0 / math.pi


@dataclass(frozen=True)
class OpenPbrParams:
    base_weight: float = 1.0
    base_color: tuple[float, float, float] = (0.8, 0.8, 0.8)
    base_metalness: float = 0.0
    specular_weight: float = 1.0
    specular_color: tuple[float, float, float] = (1.0, 1.0, 1.0)
    specular_roughness: float = 0.3
    specular_ior: float = 1.5
    emission_luminance: float = 0.0
    emission_color: tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self) -> None:
        def unit(name: str, v: float) -> None:
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {v!r}")

        unit("base_weight", self.base_weight)
        unit("base_metalness", self.base_metalness)
        unit("specular_weight", self.specular_weight)
        unit("specular_roughness", self.specular_roughness)
        for name in ("base_color", "specular_color", "emission_color"):
            c = getattr(self, name)
            if len(c) != 3 or any(not (0.0 <= x <= 1.0) for x in c):
                raise ValueError(f"{name} must be three channels in [0, 1], got {c!r}")
        if self.specular_ior < 1.0:
            raise ValueError(f"specular_ior must be >= 1, got {self.specular_ior!r}")
        if self.emission_luminance < 0.0:
            raise ValueError(f"emission_luminance must be >= 0, got {self.emission_luminance!r}")


@dataclass(frozen=True)
class BsdfSample:
    direction: np.ndarray
    throughput_weight: np.ndarray   # f * cos(theta_i) / pdf
    pdf: float
    is_specular_spike: bool


def emitted_radiance(params: OpenPbrParams) -> np.ndarray:
    return params.emission_luminance * np.asarray(params.emission_color, dtype=np.float64)


def pack_materials(materials: list[OpenPbrParams]):
    """SoA arrays for the render kernels, in the fixed order consumed by
    the integrator."""
    k = len(materials)
    base_weight = np.empty(k)
    base_color = np.empty((k, 3))
    metalness = np.empty(k)
    spec_weight = np.empty(k)
    spec_color = np.empty((k, 3))
    roughness = np.empty(k)
    ior = np.empty(k)
    emis_lum = np.empty(k)
    emis_color = np.empty((k, 3))
    for i, p in enumerate(materials):
        base_weight[i] = p.base_weight
        base_color[i] = p.base_color
        metalness[i] = p.base_metalness
        spec_weight[i] = p.specular_weight
        spec_color[i] = p.specular_color
        roughness[i] = p.specular_roughness
        ior[i] = p.specular_ior
        emis_lum[i] = p.emission_luminance
        emis_color[i] = p.emission_color
    return (base_weight, base_color, metalness, spec_weight, spec_color,
            roughness, ior, emis_lum, emis_color)


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------

@njit(cache=True, error_model="numpy")
def _alpha_of(roughness):
    a = roughness * roughness
    if a < ALPHA_MIN:
        a = ALPHA_MIN
    return a


@njit(cache=True, error_model="numpy")
def _ggx_ndf(nh, alpha):
    if nh <= 0.0:
        return 0.0
    a2 = alpha * alpha
    # t = nh^2 (a2 - 1) + 1, written to avoid cancellation near nh = 1
    t = nh * nh * a2 + (1.0 - nh) * (1.0 + nh)
    return a2 / (math.pi * t * t)


@njit(cache=True, error_model="numpy")
def _smith_g2(no, ni, alpha):
    """Height-correlated Smith masking-shadowing for GGX."""
    a2 = alpha * alpha
    lo = ni * math.sqrt(a2 + (1.0 - a2) * no * no)
    li = no * math.sqrt(a2 + (1.0 - a2) * ni * ni)
    denom = lo + li
    if denom <= 0.0:
        return 0.0
    return 2.0 * no * ni / denom


@njit(cache=True, error_model="numpy")
def _pow5(x):
    x2 = x * x
    return x2 * x2 * x


@njit(cache=True, error_model="numpy")
def _f0_from_ior(ior):
    r = (ior - 1.0) / (ior + 1.0)
    return r * r


@njit(cache=True, error_model="numpy")
def _diel_fresnel(c, f0d, sw):
    """Dielectric specular Fresnel, scaled as a whole by specular_weight so
    the lobe vanishes entirely at specular_weight = 0."""
    return sw * (f0d + (1.0 - f0d) * _pow5(1.0 - c))


@njit(cache=True, error_model="numpy")
def _diel_fresnel_avg(f0d, sw):
    """Cosine-weighted hemisphere average of the Schlick curve:
    f0 + (1 - f0)/21."""
    return sw * (f0d + (1.0 - f0d) / 21.0)


@njit(cache=True, error_model="numpy")
def _eval_core(wox, woy, woz, wix, wiy, wiz, nx, ny, nz,
               bw, bcr, bcg, bcb, m, sw, scr, scg, scb, rough, ior):
    no = nx * wox + ny * woy + nz * woz
    ni = nx * wix + ny * wiy + nz * wiz
    if no <= 0.0 or ni <= 0.0:
        return 0.0, 0.0, 0.0

    hx = wox + wix
    hy = woy + wiy
    hz = woz + wiz
    hl = math.sqrt(hx * hx + hy * hy + hz * hz)
    if hl <= 0.0:
        return 0.0, 0.0, 0.0
    hx /= hl; hy /= hl; hz /= hl
    nh = nx * hx + ny * hy + nz * hz
    oh = wox * hx + woy * hy + woz * hz
    if oh <= 0.0:
        return 0.0, 0.0, 0.0

    alpha = _alpha_of(rough)
    spec_common = _ggx_ndf(nh, alpha) * _smith_g2(no, ni, alpha) / (4.0 * no * ni)

    fr = 0.0; fg = 0.0; fb = 0.0
    if m < 1.0:
        f0d = _f0_from_ior(ior)
        diff = bw * _INV_PI * (1.0 - _diel_fresnel_avg(f0d, sw))
        fd = _diel_fresnel(oh, f0d, sw) * spec_common
        w = 1.0 - m
        fr += w * (diff * bcr + fd)
        fg += w * (diff * bcg + fd)
        fb += w * (diff * bcb + fd)
    if m > 0.0:
        s = _pow5(1.0 - oh)
        f0r = bw * bcr; f0g = bw * bcg; f0b = bw * bcb
        fr += m * spec_common * (f0r + (scr - f0r) * s)
        fg += m * spec_common * (f0g + (scg - f0g) * s)
        fb += m * spec_common * (f0b + (scb - f0b) * s)
    return fr, fg, fb


@njit(cache=True, error_model="numpy")
def _p_spec_select(no, bw, m, sw, f0d):
    """Probability of picking the dielectric GGX lobe over diffuse.
    -1.0 signals that the dielectric side has no lobes at all."""
    has_diff = bw > 0.0
    has_spec = sw > 0.0
    if has_diff and has_spec:
        p = _diel_fresnel(no, f0d, sw)
        if p < 0.05:
            p = 0.05
        elif p > 0.95:
            p = 0.95
        return p
    if has_spec:
        return 1.0
    if has_diff:
        return 0.0
    return -1.0


@njit(cache=True, error_model="numpy")
def _pdf_core(wox, woy, woz, wix, wiy, wiz, nx, ny, nz,
              bw, m, sw, rough, ior):
    no = nx * wox + ny * woy + nz * woz
    ni = nx * wix + ny * wiy + nz * wiz
    if no <= 0.0 or ni <= 0.0:
        return 0.0

    hx = wox + wix; hy = woy + wiy; hz = woz + wiz
    hl = math.sqrt(hx * hx + hy * hy + hz * hz)
    if hl <= 0.0:
        return 0.0
    hx /= hl; hy /= hl; hz /= hl
    nh = nx * hx + ny * hy + nz * hz
    oh = wox * hx + woy * hy + woz * hz

    alpha = _alpha_of(rough)
    pdf_ggx = 0.0
    if oh > 0.0 and nh > 0.0:
        pdf_ggx = _ggx_ndf(nh, alpha) * nh / (4.0 * oh)
    pdf_cos = ni * _INV_PI

    pdf = m * pdf_ggx
    if m < 1.0:
        p_spec = _p_spec_select(no, bw, m, sw, _f0_from_ior(ior))
        if p_spec >= 0.0:
            pdf += (1.0 - m) * (p_spec * pdf_ggx + (1.0 - p_spec) * pdf_cos)
    return pdf


@njit(cache=True, error_model="numpy")
def _onb(nx, ny, nz):
    """Deterministic orthonormal basis (t, b) around unit n."""
    if abs(nx) > 0.9:
        ax, ay, az = 0.0, 1.0, 0.0
    else:
        ax, ay, az = 1.0, 0.0, 0.0
    tx = ay * nz - az * ny
    ty = az * nx - ax * nz
    tz = ax * ny - ay * nx
    tl = math.sqrt(tx * tx + ty * ty + tz * tz)
    tx /= tl; ty /= tl; tz /= tl
    bx = ny * tz - nz * ty
    by = nz * tx - nx * tz
    bz = nx * ty - ny * tx
    return tx, ty, tz, bx, by, bz


@njit(cache=True, error_model="numpy")
def _cosine_sample(nx, ny, nz, u1, u2):
    tx, ty, tz, bx, by, bz = _onb(nx, ny, nz)
    r = math.sqrt(u1)
    phi = 2.0 * math.pi * u2
    x = r * math.cos(phi)
    y = r * math.sin(phi)
    z = math.sqrt(max(0.0, 1.0 - u1))
    return (x * tx + y * bx + z * nx,
            x * ty + y * by + z * ny,
            x * tz + y * bz + z * nz)


@njit(cache=True, error_model="numpy")
def _ggx_sample_half(nx, ny, nz, alpha, u1, u2):
    """Half vector drawn from the GGX normal distribution (density
    D(h) * (n.h) in solid angle)."""
    tx, ty, tz, bx, by, bz = _onb(nx, ny, nz)
    a2 = alpha * alpha
    ct = math.sqrt((1.0 - u1) / (1.0 + (a2 - 1.0) * u1))
    st = math.sqrt(max(0.0, 1.0 - ct * ct))
    phi = 2.0 * math.pi * u2
    x = st * math.cos(phi)
    y = st * math.sin(phi)
    return (x * tx + y * bx + ct * nx,
            x * ty + y * by + ct * ny,
            x * tz + y * bz + ct * nz)


@njit(cache=True, error_model="numpy")
def _sample_core(wox, woy, woz, nx, ny, nz,
                 bw, bcr, bcg, bcb, m, sw, scr, scg, scb, rough, ior,
                 u_lobe, u1, u2):
    """Draw wi from the lobe mixture.  Returns
    (valid, wix, wiy, wiz, weight_r, weight_g, weight_b, pdf, is_spike).
    Invalid means a zero-density outcome: the caller terminates the path."""
    alpha = _alpha_of(rough)
    f0d = _f0_from_ior(ior)
    no = nx * wox + ny * woy + nz * woz

    if m <= 0.0 and sw <= 0.0:
        # diffuse-only material: f. cos / pdf collapses to the albedo exactly
        if bw <= 0.0 or no <= 0.0:
            return False, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, False
        wix, wiy, wiz = _cosine_sample(nx, ny, nz, u1, u2)
        ni = nx * wix + ny * wiy + nz * wiz
        if ni <= 0.0:
            return False, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, False
        pdf = ni * _INV_PI
        if pdf <= 0.0:
            return False, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, False
        return True, wix, wiy, wiz, bw * bcr, bw * bcg, bw * bcb, pdf, False

    use_ggx = False
    if u_lobe < m:
        use_ggx = True
    else:
        p_spec = _p_spec_select(no, bw, m, sw, f0d)
        if p_spec < 0.0:
            return False, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, False
        # remap the lobe draw into the dielectric branch
        u_d = (u_lobe - m) / (1.0 - m) if m < 1.0 else 0.0
        use_ggx = u_d < p_spec

    if use_ggx:
        hx, hy, hz = _ggx_sample_half(nx, ny, nz, alpha, u1, u2)
        oh = wox * hx + woy * hy + woz * hz
        if oh <= 0.0:
            return False, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, False
        wix = 2.0 * oh * hx - wox
        wiy = 2.0 * oh * hy - woy
        wiz = 2.0 * oh * hz - woz
    else:
        wix, wiy, wiz = _cosine_sample(nx, ny, nz, u1, u2)

    ni = nx * wix + ny * wiy + nz * wiz
    if ni <= 0.0:
        return False, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, False

    pdf = _pdf_core(wox, woy, woz, wix, wiy, wiz, nx, ny, nz, bw, m, sw, rough, ior)
    if pdf <= 0.0 or not math.isfinite(pdf):
        return False, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, False

    fr, fg, fb = _eval_core(wox, woy, woz, wix, wiy, wiz, nx, ny, nz,
                            bw, bcr, bcg, bcb, m, sw, scr, scg, scb, rough, ior)
    scale = ni / pdf
    is_spike = use_ggx and alpha <= ALPHA_MIN
    return True, wix, wiy, wiz, fr * scale, fg * scale, fb * scale, pdf, is_spike


# ---------------------------------------------------------------------------
# API
# ---------------------------------------------------------------------------

def _check_shading_frame(wo: np.ndarray, n: np.ndarray) -> None:
    if abs(float(np.linalg.norm(wo)) - 1.0) > 1e-6 or abs(float(np.linalg.norm(n)) - 1.0) > 1e-6:
        raise ValueError("wo and n must be unit length")
    if float(np.dot(wo, n)) <= 0.0:
        raise ValueError("wo must lie in the hemisphere of n")


def fresnel_schlick(cos_theta: float, f0: np.ndarray, f90: np.ndarray | float = 1.0) -> np.ndarray:
    f0 = np.asarray(f0, dtype=np.float64)
    f90 = np.asarray(f90, dtype=np.float64)
    return f0 + (f90 - f0) * (1.0 - cos_theta) ** 5


def ggx_ndf(n_dot_h: float, alpha: float) -> float:
    return float(_ggx_ndf(float(n_dot_h), float(alpha)))


def smith_g2(n_dot_o: float, n_dot_i: float, alpha: float) -> float:
    return float(_smith_g2(float(n_dot_o), float(n_dot_i), float(alpha)))


def cosine_sample_hemisphere(n: np.ndarray, u1: float, u2: float) -> np.ndarray:
    x, y, z = _cosine_sample(n[0], n[1], n[2], float(u1), float(u2))
    return np.array([x, y, z])


def ggx_sample_half_vector(n: np.ndarray, alpha: float, u1: float, u2: float) -> np.ndarray:
    x, y, z = _ggx_sample_half(n[0], n[1], n[2], float(alpha), float(u1), float(u2))
    return np.array([x, y, z])


def eval_bsdf(wo: np.ndarray, wi: np.ndarray, n: np.ndarray, params: OpenPbrParams) -> np.ndarray:
    """BSDF value (per steradian, cosine excluded); zero when wi falls below
    the shading hemisphere."""
    _check_shading_frame(wo, n)
    fr, fg, fb = _eval_core(
        wo[0], wo[1], wo[2], wi[0], wi[1], wi[2], n[0], n[1], n[2],
        params.base_weight, *params.base_color, params.base_metalness,
        params.specular_weight, *params.specular_color,
        params.specular_roughness, params.specular_ior)
    return np.array([fr, fg, fb])


def pdf_bsdf(wo: np.ndarray, wi: np.ndarray, n: np.ndarray, params: OpenPbrParams) -> float:
    """Exact solid-angle density of sample_bsdf; 0 below the hemisphere."""
    _check_shading_frame(wo, n)
    return float(_pdf_core(
        wo[0], wo[1], wo[2], wi[0], wi[1], wi[2], n[0], n[1], n[2],
        params.base_weight, params.base_metalness, params.specular_weight,
        params.specular_roughness, params.specular_ior))


def sample_bsdf(wo: np.ndarray, n: np.ndarray, params: OpenPbrParams,
                draws: tuple[float, float, float]) -> BsdfSample | None:
    """Importance-sample the lobe mixture with three unit draws
    (lobe selection, then the 2D direction draw).  None signals a
    zero-density outcome (terminate or resample)."""
    _check_shading_frame(wo, n)
    u_lobe, u1, u2 = draws
    ok, wix, wiy, wiz, wr, wg, wb, pdf, spike = _sample_core(
        wo[0], wo[1], wo[2], n[0], n[1], n[2],
        params.base_weight, *params.base_color, params.base_metalness,
        params.specular_weight, *params.specular_color,
        params.specular_roughness, params.specular_ior,
        float(u_lobe), float(u1), float(u2))
    if not ok:
        return None
    return BsdfSample(np.array([wix, wiy, wiz]), np.array([wr, wg, wb]),
                      float(pdf), bool(spike))
