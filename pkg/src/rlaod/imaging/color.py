"""RGB and HSV image value types and the conversions between them.

H is kept in degrees [0, 360), S in [0, 1], and V in [0, 255] as floats so
that brightness math can run without quantization until RGB export.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RgbImage:
    """8-bit RGB image; pixels shape (height, width, 3), dtype uint8."""

    pixels: np.ndarray

    def __post_init__(self):
        p = self.pixels
        if p.ndim != 3 or p.shape[2] != 3 or p.dtype != np.uint8:
            raise ValueError(f"expected (h, w, 3) uint8 pixels, got {p.shape} {p.dtype}")
        if p.shape[0] < 1 or p.shape[1] < 1:
            raise ValueError("image must have at least one pixel")

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class HsvImage:
    """Float HSV image: h in degrees [0, 360), s in [0, 1], v in [0, 255]."""

    h: np.ndarray
    s: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        if not (self.h.shape == self.s.shape == self.v.shape):
            raise ValueError("h, s, v channel shapes must match")

    @property
    def width(self) -> int:
        return self.v.shape[1]

    @property
    def height(self) -> int:
        return self.v.shape[0]


def value_channel(img: RgbImage) -> np.ndarray:
    """The V channel alone (max of R, G, B per pixel) as float64."""
    p = img.pixels
    return np.maximum(np.maximum(p[..., 0], p[..., 1]), p[..., 2]).astype(np.float64)


def rgb_to_hsv(img: RgbImage) -> HsvImage:
    """Standard RGB -> HSV conversion; V is max(R, G, B) kept on the 0..255 scale."""
    p = img.pixels
    if np.array_equal(p[..., 0], p[..., 1]) and np.array_equal(p[..., 1], p[..., 2]):
        v = p[..., 0].astype(np.float64)
        zero = np.zeros_like(v)
        return HsvImage(h=zero, s=zero.copy(), v=v)

    rgb = p.astype(np.float64)
    r = np.ascontiguousarray(rgb[..., 0])
    g = np.ascontiguousarray(rgb[..., 1])
    b = np.ascontiguousarray(rgb[..., 2])

    v = np.maximum(np.maximum(r, g), b)
    c = v - np.minimum(np.minimum(r, g), b)

    safe_v = np.where(v > 0.0, v, 1.0)
    s = np.where(v > 0.0, c / safe_v, 0.0)

    safe_c = np.where(c > 0.0, c, 1.0)
    h = np.where(
        c <= 0.0,
        0.0,
        np.where(
            v == r,
            (g - b) / safe_c,
            np.where(v == g, (b - r) / safe_c + 2.0, (r - g) / safe_c + 4.0),
        ),
    )
    h = (h * 60.0) % 360.0
    return HsvImage(h=h, s=s, v=v)


def _hsv_channel(n: float, h60: np.ndarray, v: np.ndarray, c: np.ndarray) -> np.ndarray:
    k = (n + h60) % 6.0
    w = np.minimum(np.minimum(k, 4.0 - k), 1.0)
    return v - c * np.maximum(w, 0.0)


def hsv_to_rgb(img: HsvImage) -> RgbImage:
    """Inverse of rgb_to_hsv; channels rounded half-away-from-zero and clamped to [0, 255]."""
    v = np.minimum(np.maximum(img.v, 0.0), 255.0)
    if img.s.max() <= 0.0:
        # Grayscale shortcut; values are nonnegative so half-away == half-up.
        q = np.floor(v + 0.5).astype(np.uint8)
        return RgbImage(pixels=np.repeat(q[..., None], 3, axis=2))

    s = np.minimum(np.maximum(img.s, 0.0), 1.0)
    h60 = (img.h % 360.0) / 60.0
    c = v * s
    out = np.empty(v.shape + (3,), dtype=np.uint8)
    for i, n in enumerate((5.0, 3.0, 1.0)):  # R, G, B
        chan = _hsv_channel(n, h60, v, c)
        out[..., i] = np.minimum(np.maximum(np.floor(chan + 0.5), 0.0), 255.0)
    return RgbImage(pixels=out)


def merge_v_channel(hsv: HsvImage, v: np.ndarray) -> HsvImage:
    """New HsvImage sharing H and S but with a replaced V channel."""
    if v.shape != hsv.v.shape:
        raise ValueError(f"V shape {v.shape} does not match image {hsv.v.shape}")
    return HsvImage(h=hsv.h, s=hsv.s, v=v)
