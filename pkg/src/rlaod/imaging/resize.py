"""Bilinear resampling with corner-aligned source coordinates."""

from __future__ import annotations

import numpy as np

from ..util import round_half_away
from .color import RgbImage

MIN_SIDE = 8
MAX_SIDE = 4096


def _source_coords(n_out: int, n_in: int) -> np.ndarray:
    """Corner-aligned source positions for each output index."""
    if n_out == 1:
        return np.array([(n_in - 1) / 2.0])
    return np.arange(n_out) * ((n_in - 1) / (n_out - 1))


def resample_bilinear(values: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Bilinearly resample a (h, w) or (h, w, c) float array to (out_h, out_w).

    Separable: rows are blended vertically first, then sampled horizontally.
    """
    if out_h < 1 or out_w < 1:
        raise ValueError("output dimensions must be positive")
    src = np.asarray(values, dtype=np.float64)
    h, w = src.shape[:2]

    ys = _source_coords(out_h, h)
    xs = _source_coords(out_w, w)
    y0 = np.minimum(np.floor(ys).astype(np.int64), h - 1)
    x0 = np.minimum(np.floor(xs).astype(np.int64), w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    wy = (ys - y0).reshape(-1, 1)
    wx = (xs - x0).reshape(1, -1)
    if src.ndim == 3:
        wy = wy[..., None]
        wx = wx[..., None]

    rows = src[y0] * (1.0 - wy) + src[y1] * wy
    return rows[:, x0] * (1.0 - wx) + rows[:, x1] * wx


def scaled_dims(width: int, height: int, factor: float) -> tuple[int, int]:
    """Output (width, height) for a linear resize factor, clamped to sane bounds."""
    if factor <= 0.0:
        raise ValueError(f"resize factor must be positive, got {factor}")
    out_w = int(min(MAX_SIDE, max(MIN_SIDE, round_half_away(width * factor))))
    out_h = int(min(MAX_SIDE, max(MIN_SIDE, round_half_away(height * factor))))
    return out_w, out_h


def resize_bilinear(img: RgbImage, factor: float) -> RgbImage:
    """Resize an RGB image by a linear factor; deterministic, corner-aligned."""
    out_w, out_h = scaled_dims(img.width, img.height, factor)
    if (out_w, out_h) == (img.width, img.height):
        return RgbImage(pixels=img.pixels.copy())
    out = resample_bilinear(img.pixels, out_h, out_w)
    # Interpolated values are nonnegative, so half-up equals half-away.
    return RgbImage(pixels=np.minimum(np.floor(out + 0.5), 255.0).astype(np.uint8))
