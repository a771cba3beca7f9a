import numpy as np
import pytest

from rlaod.imaging import BrightnessModel, RgbImage, render_brightness


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def uniform_ramp_base(shape, rng):
    """Base matrix whose interpolated-decile estimate is exactly zero:
    an evenly spaced ramp over [0, 255], shuffled."""
    n = shape[0] * shape[1]
    vals = np.linspace(0.0, 255.0, n)
    rng.shuffle(vals)
    return vals.reshape(shape)


def rendered_image(level, shape, rng):
    """Grayscale RgbImage whose V channel is an exact render of a
    zero-estimate base at `level` (quantized to 8 bits)."""
    base = uniform_ramp_base(shape, rng)
    v = render_brightness(BrightnessModel(level=0.0, base=base), level)
    q = np.floor(v + 0.5).astype(np.uint8)
    return RgbImage(pixels=np.repeat(q[..., None], 3, axis=2))
