"""Display transform: Khronos PBR Neutral tone map, sRGB encode, 8-bit
quantization, PNG/raw output.

All functions are vectorized over the trailing channel axis and accept any
leading shape.  The full pipeline for the PNG path is
`pbr_neutral_tonemap -> linear_to_srgb -> quantize_to_u8`.
"""
from __future__ import annotations

import numpy as np
from PIL import Image

# Khronos PBR Neutral constants (frozen; see docs/tone_mapping.md)
START_COMPRESSION = 0.8 - 0.04
DESATURATION = 0.15


def pbr_neutral_tonemap(color: np.ndarray) -> np.ndarray:
    """Map linear radiance (..., 3) >= 0 into [0, 1], hue-preserving below
    the compression knee and desaturating toward white above it."""
    c = np.asarray(color, dtype=np.float64)
    if c.shape[-1] != 3:
        raise ValueError(f"expected trailing channel axis of size 3, got {c.shape}")
    if np.any(c < 0.0):
        raise ValueError("tone map input must be non-negative")

    x = np.min(c, axis=-1, keepdims=True)
    offset = np.where(x < 0.08, x - 6.25 * x * x, 0.04)
    c = c - offset

    peak = np.max(c, axis=-1, keepdims=True)
    d = 1.0 - START_COMPRESSION
    new_peak = 1.0 - d * d / (peak + d - START_COMPRESSION)
    compress = peak > START_COMPRESSION

    safe_peak = np.where(compress, peak, 1.0)
    scaled = c * (np.where(compress, new_peak, safe_peak) / safe_peak)
    g = np.where(compress, 1.0 - 1.0 / (DESATURATION * (peak - new_peak) + 1.0), 0.0)
    return np.where(compress, scaled * (1.0 - g) + new_peak * g, c)


def linear_to_srgb(x: np.ndarray) -> np.ndarray:
    """sRGB transfer function on [0, 1] linear values."""
    x = np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0)
    return np.where(x <= 0.0031308, 12.92 * x, 1.055 * np.power(x, 1.0 / 2.4) - 0.055)


def srgb_to_linear(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return np.where(x <= 0.04045, x / 12.92, np.power((x + 0.055) / 1.055, 2.4))


def quantize_to_u8(x: np.ndarray) -> np.ndarray:
    """round(255 * v) with half-up rounding, clipped to [0, 255]."""
    v = np.floor(255.0 * np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0) + 0.5)
    return v.astype(np.uint8)


def tonemap_to_u8(linear: np.ndarray) -> np.ndarray:
    """Full display pipeline: tone map, sRGB encode, quantize."""
    return quantize_to_u8(linear_to_srgb(pbr_neutral_tonemap(linear)))


def write_png(path, pixels_u8: np.ndarray) -> None:
    """8-bit RGB PNG, no alpha."""
    arr = np.asarray(pixels_u8)
    if arr.dtype != np.uint8 or arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected uint8 array of shape (h, w, 3), got {arr.dtype} {arr.shape}")
    Image.fromarray(arr, mode="RGB").save(path, format="PNG")


def write_linear_dump(path, linear: np.ndarray) -> None:
    """Raw render output: row-major float32 RGB triplets, little-endian."""
    arr = np.asarray(linear, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected array of shape (h, w, 3), got {arr.shape}")
    np.ascontiguousarray(arr, dtype="<f4").tofile(path)
