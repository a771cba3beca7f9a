import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rlaod.errors import ContractViolation
from rlaod.imaging import (
    AttributeAction,
    BrightnessModel,
    estimate_brightness_level,
    fit_brightness_base,
    interpolated_quantiles,
    render_brightness,
    update_brightness_level,
)

from conftest import uniform_ramp_base


def brute_force_quantiles(values, qs):
    """Independent oracle: sort and interpolate by hand."""
    flat = sorted(float(x) for x in np.ravel(values))
    n = len(flat)
    out = []
    for q in qs:
        pos = q * (n - 1)
        lo = int(np.floor(pos))
        hi = min(lo + 1, n - 1)
        frac = pos - lo
        out.append(flat[lo] * (1 - frac) + flat[hi] * frac)
    return np.array(out)


class TestEstimate:
    def test_uniform_spread_is_zero(self, rng):
        v = rng.uniform(0.0, 255.0, size=(128, 128))
        assert abs(estimate_brightness_level(v)) <= 0.02

    def test_all_zero_is_minus_one(self):
        assert estimate_brightness_level(np.zeros((8, 8))) == -1.0

    def test_halved_uniform_base(self, rng):
        v = 0.5 * rng.uniform(0.0, 255.0, size=(128, 128))
        qs = brute_force_quantiles(v, np.arange(11) / 10)
        expected = np.clip(qs.sum() / 5.5 / 255.0 - 1.0, -1.0, 1.0)
        got = estimate_brightness_level(v)
        assert got == pytest.approx(expected, abs=1e-12)
        assert got == pytest.approx(-0.5, abs=0.02)

    def test_quantiles_match_brute_force(self, rng):
        v = rng.uniform(0.0, 255.0, size=37)
        qs = np.arange(11) / 10
        assert interpolated_quantiles(v, qs) == pytest.approx(
            brute_force_quantiles(v, qs), abs=1e-9
        )

    def test_monotone_in_render_level(self, rng):
        base = uniform_ramp_base((32, 32), rng)
        model = BrightnessModel(level=0.0, base=base)
        levels = np.linspace(-1, 1, 21)
        estimates = [
            estimate_brightness_level(render_brightness(model, lv)) for lv in levels
        ]
        assert all(b >= a - 1e-9 for a, b in zip(estimates, estimates[1:]))


class TestFitRender:
    def test_fit_level_zero_is_identity(self, rng):
        v = rng.uniform(0.0, 255.0, size=(9, 9))
        model = fit_brightness_base(v, 0.0)
        assert model.base == pytest.approx(v)

    def test_fit_dark(self):
        model = fit_brightness_base(np.full((3, 3), 50.0), -0.5)
        assert model.base == pytest.approx(np.full((3, 3), 100.0))

    def test_fit_bright(self):
        model = fit_brightness_base(np.full((3, 3), 177.5), 0.5)
        assert model.base == pytest.approx(np.full((3, 3), 100.0))

    def test_render_dark_branch(self):
        model = BrightnessModel(level=0.0, base=np.full((2, 2), 100.0))
        assert render_brightness(model, -0.5) == pytest.approx(np.full((2, 2), 50.0))

    def test_render_identity(self, rng):
        base = rng.uniform(0.0, 255.0, size=(5, 5))
        model = BrightnessModel(level=0.0, base=base)
        assert render_brightness(model, 0.0) == pytest.approx(base)

    def test_render_bright_branch(self):
        model = BrightnessModel(level=0.0, base=np.full((2, 2), 100.0))
        assert render_brightness(model, 0.5) == pytest.approx(np.full((2, 2), 177.5))

    def test_round_trip_at_fitted_level(self, rng):
        # Render a zero-estimate base at a known level, re-fit, re-render.
        base = uniform_ramp_base((48, 48), rng)
        for true_level in (-0.9, -0.4, 0.0, 0.3, 0.8):
            v = render_brightness(BrightnessModel(level=0.0, base=base), true_level)
            est = estimate_brightness_level(v)
            assert est == pytest.approx(true_level, abs=1e-9)
            model = fit_brightness_base(v, est)
            back = render_brightness(model, est)
            assert np.abs(back - v).max() <= 1.0


class TestUpdate:
    def test_brighten_from_zero(self):
        assert update_brightness_level(0.0, AttributeAction.BRIGHTEN) == pytest.approx(0.1)

    def test_fixed_point_at_one(self):
        assert update_brightness_level(1.0, AttributeAction.BRIGHTEN) == pytest.approx(1.0)

    def test_darken(self):
        assert update_brightness_level(-0.8, AttributeAction.DARKEN) == pytest.approx(-0.82)

    def test_wrong_action_kind(self):
        with pytest.raises(ContractViolation):
            update_brightness_level(0.0, AttributeAction.ZOOM_IN)

    @settings(max_examples=100, deadline=None)
    @given(level=st.floats(-1.0, 1.0), brighten=st.booleans())
    def test_stays_in_range_and_contracts(self, level, brighten):
        action = AttributeAction.BRIGHTEN if brighten else AttributeAction.DARKEN
        target = 1.0 if brighten else -1.0
        new = update_brightness_level(level, action)
        assert -1.0 <= new <= 1.0
        assert abs(new - target) == pytest.approx(0.9 * abs(level - target), abs=1e-12)

    def test_brighten_then_darken_closed_form(self):
        for level in (-1.0, -0.3, 0.0, 0.5, 1.0):
            once = update_brightness_level(level, AttributeAction.BRIGHTEN)
            twice = update_brightness_level(once, AttributeAction.DARKEN)
            assert twice == pytest.approx(0.81 * level - 0.01, abs=1e-12)
