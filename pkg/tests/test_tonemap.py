"""Tests for the display transform: PBR Neutral tone map, sRGB, quantization,
and the PNG / raw-dump writers.

The frozen probe vectors were produced by an independent scalar
implementation of the published tone-map formula (straight-line Python,
no numpy broadcasting) and are pinned here to guard against regressions.
"""

import numpy as np
import pytest

from luxtrace import (
    linear_to_srgb,
    pbr_neutral_tonemap,
    quantize_to_u8,
    srgb_to_linear,
    tonemap_to_u8,
    write_linear_dump,
    write_png,
)

# (input rgb, expected rgb) pairs, frozen from the scalar reference.
FROZEN_PROBES = [
    ((0.0, 0.0, 0.0), (0.0, 0.0, 0.0)),
    ((0.5, 0.5, 0.5), (0.46, 0.46, 0.46)),
    ((0.75, 0.75, 0.75), (0.71, 0.71, 0.71)),
    ((1000.0, 1000.0, 1000.0),
     (0.99994236772592648, 0.99994236772592648, 0.99994236772592648)),
    ((0.04, 0.04, 0.04),
     (0.010000000000000002, 0.010000000000000002, 0.010000000000000002)),
    ((0.08, 0.08, 0.08), (0.04, 0.04, 0.04)),
    ((1.0, 0.25, 0.05),
     (0.87074333800841508, 0.20392811327377777, 0.02611072001120783)),
    ((2.0, 1.0, 0.5),
     (0.96, 0.53409050576752426, 0.32113575865128652)),
]


@pytest.mark.parametrize("rgb,expected", FROZEN_PROBES)
def test_frozen_probe_vectors(rgb, expected):
    out = pbr_neutral_tonemap(np.array(rgb))
    assert np.allclose(out, expected, rtol=0.0, atol=1e-12)


def test_broadcasts_over_leading_axes():
    flat = np.array([p for p, _ in FROZEN_PROBES])
    expected = np.array([e for _, e in FROZEN_PROBES])
    assert np.allclose(pbr_neutral_tonemap(flat), expected, atol=1e-12)
    as_image = flat.reshape(2, 4, 3)
    assert np.allclose(pbr_neutral_tonemap(as_image), expected.reshape(2, 4, 3), atol=1e-12)


def test_monotonic_on_gray_ramp():
    ramp = np.linspace(0.0, 20.0, 100_000)
    out = pbr_neutral_tonemap(np.stack([ramp] * 3, axis=-1))
    diffs = np.diff(out[:, 0])
    assert np.all(diffs >= -1e-15)


def test_output_range():
    rng = np.random.default_rng(2871)
    wild = rng.uniform(0.0, 1.0, size=(5000, 3)) ** 4 * rng.choice(
        [1.0, 10.0, 1e4], size=(5000, 1)
    )
    out = pbr_neutral_tonemap(wild)
    assert np.all(out >= 0.0)
    assert np.all(out <= 1.0)


def test_continuity_everywhere_on_dense_ramp():
    """No branch of the curve may jump: 1e5 colinear samples through both
    knees (offset knee at min-channel 0.08, compression knee at peak 0.80)
    must change by no more than a small multiple of the input spacing."""
    n = 100_000
    t = np.linspace(0.0, 2.0, n)
    spacing = t[1] - t[0]
    for tint in [(1.0, 1.0, 1.0), (1.0, 0.7, 0.4)]:
        colors = t[:, None] * np.array(tint)[None, :]
        out = pbr_neutral_tonemap(colors)
        jumps = np.abs(np.diff(out, axis=0)).max()
        assert jumps < 4.0 * spacing


def test_continuity_at_knees_exact():
    eps = 1e-9
    for knee_gray in (0.08, 0.80):
        lo = pbr_neutral_tonemap(np.array([knee_gray - eps] * 3))
        hi = pbr_neutral_tonemap(np.array([knee_gray + eps] * 3))
        assert np.all(np.abs(hi - lo) < 1e-4)


def test_plain_offset_below_compression_knee():
    """With every channel in [0.08, 0.80] the transform is exactly the 0.04
    black offset, so channel differences are preserved."""
    rng = np.random.default_rng(99)
    colors = rng.uniform(0.08, 0.80, size=(2000, 3))
    out = pbr_neutral_tonemap(colors)
    assert np.allclose(out, colors - 0.04, atol=1e-15)


def test_rejects_negative_and_bad_shape():
    with pytest.raises(ValueError):
        pbr_neutral_tonemap(np.array([0.1, -1e-6, 0.2]))
    with pytest.raises(ValueError):
        pbr_neutral_tonemap(np.zeros((4, 4)))


def test_srgb_endpoints_and_branch():
    assert linear_to_srgb(np.array(0.0)) == 0.0
    assert abs(linear_to_srgb(np.array(1.0)) - 1.0) < 1e-12
    assert abs(linear_to_srgb(np.array(0.0031308)) - 0.04045) < 1e-6


def test_srgb_round_trip():
    x = np.linspace(0.0, 1.0, 256)
    back = srgb_to_linear(linear_to_srgb(x))
    assert np.allclose(back, x, atol=1e-6)


def test_quantize_half_up():
    assert quantize_to_u8(np.array(0.0)) == 0
    assert quantize_to_u8(np.array(1.0)) == 255
    assert quantize_to_u8(np.array(2.5)) == 255  # clipped
    # exactly representable eighth-steps round half-up
    assert quantize_to_u8(np.array(127.5 / 255.0)) == 128
    codes = np.arange(256) / 255.0
    assert np.array_equal(quantize_to_u8(codes), np.arange(256, dtype=np.uint8))


def test_tonemap_to_u8_is_composed_pipeline():
    rng = np.random.default_rng(5)
    img = rng.uniform(0.0, 3.0, size=(7, 9, 3))
    manual = quantize_to_u8(linear_to_srgb(pbr_neutral_tonemap(img)))
    assert np.array_equal(tonemap_to_u8(img), manual)


def test_png_gradient_fixture_round_trip(tmp_path):
    """2x2 hand-computed gradient decodes to the exact bytes, via an
    independent decoder (OpenCV, which returns BGR)."""
    import cv2

    pixels = np.array(
        [[[0, 64, 128], [255, 255, 255]], [[10, 20, 30], [200, 100, 50]]],
        dtype=np.uint8,
    )
    path = tmp_path / "gradient.png"
    write_png(path, pixels)
    decoded_bgr = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    assert decoded_bgr.shape == (2, 2, 3)  # no alpha channel
    assert np.array_equal(decoded_bgr[:, :, ::-1], pixels)


def test_png_white_pixel(tmp_path):
    import cv2

    path = tmp_path / "white.png"
    write_png(path, np.full((1, 1, 3), 255, np.uint8))
    assert np.array_equal(cv2.imread(str(path)), np.full((1, 1, 3), 255, np.uint8))


def test_png_rejects_bad_input(tmp_path):
    with pytest.raises(ValueError):
        write_png(tmp_path / "bad.png", np.zeros((4, 4, 3), np.float32))
    with pytest.raises(ValueError):
        write_png(tmp_path / "bad.png", np.zeros((4, 4, 4), np.uint8))


def test_linear_dump_round_trip(tmp_path):
    rng = np.random.default_rng(17)
    img = rng.uniform(0.0, 5.0, size=(6, 11, 3))
    path = tmp_path / "frame.bin"
    write_linear_dump(path, img)
    back = np.fromfile(path, dtype="<f4").reshape(6, 11, 3)
    assert np.allclose(back, img.astype(np.float32), atol=0.0)
    assert path.stat().st_size == 6 * 11 * 3 * 4


def test_linear_dump_rejects_bad_shape(tmp_path):
    with pytest.raises(ValueError):
        write_linear_dump(tmp_path / "bad.bin", np.zeros((4, 3)))
