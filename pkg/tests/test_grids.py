import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from waverate.grids import (
    COMPACT,
    DecayHint,
    DyadicGrid,
    SampledFunction,
    default_level,
    product_quad,
    sample,
)


class TestDyadicGrid:
    def test_count_and_spacing(self):
        g = DyadicGrid(-1.0, 2.0, 3)
        assert g.count == 25
        assert g.spacing == 0.125
        pts = g.points()
        assert pts[0] == -1.0 and pts[-1] == 2.0
        assert np.all(np.diff(pts) > 0)

    def test_rejects_non_dyadic_endpoint(self):
        with pytest.raises(ValueError):
            DyadicGrid(0.3, 1.0, 4)

    def test_rejects_empty_interval(self):
        with pytest.raises(ValueError):
            DyadicGrid(1.0, 1.0, 4)

    def test_index_of(self):
        g = DyadicGrid(0.0, 1.0, 4)
        assert g.index_of(0.5) == 8
        with pytest.raises(ValueError):
            g.index_of(0.51)

    def test_refine_keeps_endpoints(self):
        g = DyadicGrid(-0.5, 0.5, 2).refine(3)
        assert g.level == 5
        assert g.points()[0] == -0.5

    @given(
        level=st.integers(0, 12),
        a=st.integers(-8, 7),
        width=st.integers(1, 8),
    )
    @settings(max_examples=50)
    def test_points_are_exact_dyadics(self, level, a, width):
        g = DyadicGrid(float(a), float(a + width), level)
        pts = g.points()
        assert len(pts) == g.count
        # every point must be exactly representable at this level
        scaled = pts * 2.0**level
        assert np.all(scaled == np.floor(scaled))


class TestSampledFunction:
    def test_compact_requires_zero_endpoints(self):
        g = DyadicGrid(0.0, 1.0, 2)
        with pytest.raises(ValueError):
            SampledFunction(g, np.ones(g.count), COMPACT)

    def test_interpolation_and_zero_extension(self):
        g = DyadicGrid(0.0, 1.0, 1)
        f = SampledFunction(g, np.array([0.0, 1.0, 0.0]), COMPACT)
        assert f(0.25) == 0.5
        assert f(2.0) == 0.0 and f(-1.0) == 0.0

    def test_norms_of_tent(self):
        g = DyadicGrid(-1.0, 1.0, 8)
        f = sample(lambda x: np.maximum(0.0, 1.0 - np.abs(x)), g)
        assert f.integral() == pytest.approx(1.0, abs=1e-12)
        assert f.norm_l1() == pytest.approx(1.0, abs=1e-12)
        assert f.norm_l2() == pytest.approx(np.sqrt(2.0 / 3.0), abs=1e-5)
        assert f.norm_sup() == 1.0

    def test_restrict(self):
        g = DyadicGrid(-1.0, 1.0, 3)
        f = sample(lambda x: x, g, DecayHint("none"))
        sub = f.restrict(0.0, 0.5)
        assert sub.grid.left == 0.0 and sub.grid.right == 0.5
        assert sub.values[0] == 0.0 and sub.values[-1] == 0.5


class TestDecayHint:
    def test_exponential_needs_rate(self):
        with pytest.raises(ValueError):
            DecayHint("exponential")
        DecayHint("exponential", a=1.0)

    def test_algebraic_needs_order_above_one(self):
        with pytest.raises(ValueError):
            DecayHint("algebraic", N=1.0)
        DecayHint("algebraic", N=2.0)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            DecayHint("linear")


class TestProductQuad:
    def test_exact_for_aligned_midpoint_jumps(self):
        # indicator of [0,1) with midpoint convention, against itself
        g = DyadicGrid(-1.0, 2.0, 6)
        x = g.points()
        v = np.where((x > 0) & (x < 1), 1.0, 0.0)
        v[g.index_of(0.0)] = 0.5
        v[g.index_of(1.0)] = 0.5
        assert product_quad(v, v, g.spacing) == pytest.approx(1.0, abs=1e-14)

    def test_second_order_for_smooth(self):
        g = DyadicGrid(0.0, 1.0, 10)
        x = g.points()
        got = product_quad(np.sin(np.pi * x), np.sin(np.pi * x), g.spacing)
        assert got == pytest.approx(0.5, abs=1e-9)

    @given(st.integers(3, 30))
    def test_plain_trapezoid_fallback_for_odd_intervals(self, n):
        vals = np.linspace(0.0, 1.0, n)
        got = product_quad(vals, np.ones(n), 0.5)
        want = np.trapezoid(vals, dx=0.5)
        if (n - 1) % 2 == 0:
            want = 2 * want - np.trapezoid(vals[::2], dx=1.0)
        assert got == pytest.approx(float(want), abs=1e-12)


def test_default_level_env(monkeypatch):
    monkeypatch.delenv("WAVERATE_GRID_LEVEL", raising=False)
    assert default_level() == 10
    monkeypatch.setenv("WAVERATE_GRID_LEVEL", "8")
    assert default_level() == 8
    monkeypatch.setenv("WAVERATE_GRID_LEVEL", "2")
    with pytest.raises(ValueError):
        default_level()
