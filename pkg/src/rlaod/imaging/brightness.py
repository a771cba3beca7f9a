"""Brightness level algebra.

An image's V channel is modeled as a scalar level in [-1, 1] applied to a
per-image base matrix:

    level < 0:   V = (1 + level) * base
    level >= 0:  V = (1 - level) * base + 255 * level

The base is fitted once from a source image and every later brightness
change re-renders from it, so repeated adjustments never accumulate the
truncation loss that multiplying the current frame would cause.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ContractViolation
from .actions import AttributeAction

# Fitting divides by (1 +/- level); keep the divisor away from zero.
FIT_LEVEL_LIMIT = 0.98

# The 11 evenly spaced quantiles form 5 symmetric pairs plus the median;
# each pair sums to the full-range estimate d and the median to d/2.
_QUANTILES = np.arange(11) / 10.0
_QUANTILE_DIVISOR = 5.5


@dataclass(frozen=True)
class BrightnessModel:
    """Current brightness level plus the fixed base matrix it renders from.

    The base is produced by fit_brightness_base and is guaranteed to lie
    in [0, 255]; only the level is revalidated on construction.
    """

    level: float
    base: np.ndarray

    def __post_init__(self):
        if not -1.0 <= self.level <= 1.0:
            raise ValueError(f"level {self.level} outside [-1, 1]")

    def with_level(self, level: float) -> "BrightnessModel":
        return BrightnessModel(level=level, base=self.base)


def interpolated_quantiles(values: np.ndarray, qs: np.ndarray) -> np.ndarray:
    """Quantiles by linear interpolation between order statistics."""
    flat = np.sort(np.asarray(values, dtype=np.float64).ravel())
    n = flat.size
    if n == 1:
        return np.full(len(qs), flat[0])
    pos = np.asarray(qs) * (n - 1)
    lo = pos.astype(np.int64)
    hi = np.minimum(lo + 1, n - 1)
    frac = pos - lo
    return flat[lo] * (1.0 - frac) + flat[hi] * frac


def estimate_brightness_level(v: np.ndarray) -> float:
    """Estimate the brightness level of a V channel from its 11 deciles.

    Interpolated quantiles transform affinely with the rendering map, so the
    estimate of a rendered image recovers the level it was rendered at
    (exactly, when the base's own estimate is zero).
    """
    if v.size < 1:
        raise ValueError("V channel must contain at least one pixel")
    d = interpolated_quantiles(v, _QUANTILES).sum() / _QUANTILE_DIVISOR
    return float(min(1.0, max(-1.0, d / 255.0 - 1.0)))


def fit_brightness_base(v: np.ndarray, level: float) -> BrightnessModel:
    """Invert the rendering map at the given level to recover the base matrix."""
    if not -1.0 <= level <= 1.0:
        raise ValueError(f"level {level} outside [-1, 1]")
    lv = float(min(FIT_LEVEL_LIMIT, max(-FIT_LEVEL_LIMIT, level)))
    v = np.asarray(v, dtype=np.float64)
    if lv < 0.0:
        base = v / (1.0 + lv)
    else:
        base = (v - 255.0 * lv) / (1.0 - lv)
    return BrightnessModel(level=lv, base=np.minimum(np.maximum(base, 0.0), 255.0))


def render_brightness(model: BrightnessModel, level: float) -> np.ndarray:
    """Render the V channel of the model's base at an arbitrary level."""
    if not -1.0 <= level <= 1.0:
        raise ValueError(f"level {level} outside [-1, 1]")
    if level < 0.0:
        v = (1.0 + level) * model.base
    else:
        v = (1.0 - level) * model.base + 255.0 * level
    return np.minimum(np.maximum(v, 0.0), 255.0)


def update_brightness_level(level: float, action: AttributeAction) -> float:
    """Contract the level 10% toward +1 (brighten) or -1 (darken)."""
    if not -1.0 <= level <= 1.0:
        raise ValueError(f"level {level} outside [-1, 1]")
    if action is AttributeAction.BRIGHTEN:
        return 0.9 * level + 0.1
    if action is AttributeAction.DARKEN:
        return 0.9 * level - 0.1
    raise ContractViolation(f"{action} is not a brightness action")
