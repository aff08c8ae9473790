"""Radial program, exponent formulas, projections, distances."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from persistlab.errors import ConfigError
from persistlab.geometry import (
    Ball,
    Polytope,
    box,
    exponent_report,
    h_value,
    interval,
    nonstandard_exponent,
    persistence_exponent,
    projection_exponent_bound,
    projection_interval,
    r_star,
    radial_bounds,
    scaled_gap_ratio,
    set_distance,
)


def ray_scan_ratio(lo, hi, points=200001):
    # Independent oracle for a 2-D box: per-direction chord [L, U] from the
    # four halfplane crossings, maximized over a dense angle grid.
    best = 0.0
    for th in np.linspace(1e-9, math.pi / 2 - 1e-9, points):
        cth, sth = math.cos(th), math.sin(th)
        entry = max(lo[0] / cth, lo[1] / sth)
        exit_ = min(hi[0] / cth, hi[1] / sth)
        if exit_ >= entry > 0:
            best = max(best, exit_ / entry)
    return best


class TestRStar:
    def test_interval_exact(self, unit_interval):
        r, witness = r_star(unit_interval)
        assert r == pytest.approx(2.0, abs=1e-9)
        assert witness[0] > 0
        assert r_star(interval(2.0, 3.0))[0] == pytest.approx(1.5, abs=1e-9)

    def test_ball_formula(self, ball):
        assert r_star(ball)[0] == pytest.approx(2.0, abs=1e-6)
        far = Ball((0.0, 5.0), 2.0)
        assert r_star(far)[0] == pytest.approx(7.0 / 3.0, abs=1e-6)

    def test_offset_box_against_ray_oracle(self, offset_box):
        oracle = ray_scan_ratio((1.0, 2.0), (2.0, 3.0))
        assert oracle == pytest.approx(1.5, abs=1e-9)
        r, _ = r_star(offset_box)
        assert r == pytest.approx(oracle, abs=1e-6)
        assert r == pytest.approx(1.5, abs=1e-6)

    def test_scale_invariance(self, ball, offset_box):
        # The radial ratio is 0-homogeneous; scaling the body is a no-op.
        assert r_star(offset_box.scale(3.0))[0] == pytest.approx(
            r_star(offset_box)[0], abs=1e-9
        )
        assert r_star(ball.scale(0.5))[0] == pytest.approx(r_star(ball)[0], abs=1e-9)

    @settings(max_examples=20, deadline=None)
    @given(st.floats(0.05, 20.0))
    def test_interval_scale_invariance(self, s):
        assert r_star(interval(1.0, 2.0).scale(s))[0] == pytest.approx(2.0, abs=1e-9)

    def test_square_diagonal(self, square):
        # Nearest point (1,1), farthest (2,2) along the same ray.
        r, witness = r_star(square)
        assert r == pytest.approx(2.0, abs=1e-6)
        w = np.asarray(witness)
        assert np.allclose(w / np.linalg.norm(w), [1 / math.sqrt(2)] * 2, atol=1e-4)


class TestRadialBounds:
    def test_square_diagonal_chord(self, square):
        rb = radial_bounds(square, (1 / math.sqrt(2), 1 / math.sqrt(2)))
        assert rb.present
        assert rb.lower == pytest.approx(math.sqrt(2), abs=1e-9)
        assert rb.upper == pytest.approx(2 * math.sqrt(2), abs=1e-9)
        assert rb.ratio == pytest.approx(2.0, abs=1e-9)

    def test_ball_axis_chord(self, ball):
        rb = radial_bounds(ball, (1.0, 0.0))
        assert rb.lower == pytest.approx(2.0, abs=1e-9)
        assert rb.upper == pytest.approx(4.0, abs=1e-9)

    def test_missing_ray(self, square):
        rb = radial_bounds(square, (0.0, 1.0))
        assert not rb.present
        with pytest.raises(ConfigError, match="ray misses the body"):
            rb.ratio


class TestExponentFormulas:
    def test_one_dim_formula(self):
        assert persistence_exponent(2.0, 3.0) == pytest.approx(1 / math.log(2), rel=1e-14)
        assert persistence_exponent(math.e**2, 2.0) == pytest.approx(0.25, rel=1e-14)

    def test_formula_validation(self):
        with pytest.raises(ConfigError, match="radial ratio must exceed 1"):
            persistence_exponent(1.0, 2.0)
        with pytest.raises(ConfigError, match="alpha must exceed 1"):
            persistence_exponent(2.0, 1.0)

    def test_product_sum_formula(self):
        # Half-sum of per-component interval exponents.
        val = nonstandard_exponent([(1.0, 2.0, 2.0), (1.0, 4.0, 3.0)])
        assert val == pytest.approx(1 / math.log(2), rel=1e-14)
        single = nonstandard_exponent([(1.0, 2.0, 1.5)])
        assert single == pytest.approx(persistence_exponent(2.0, 1.5), rel=1e-14)
        e = math.e
        three = nonstandard_exponent([(1.0, e, 2.0), (1.0, e**2, 3.0), (1.0, e, 4.0)])
        assert three == pytest.approx(2.5, rel=1e-14)

    def test_product_validation(self):
        with pytest.raises(ConfigError, match="0 < a < b"):
            nonstandard_exponent([(2.0, 1.0, 2.0)])


class TestProjection:
    def test_interval_along_direction(self, offset_box):
        lo, hi = projection_interval(offset_box, (1.0, 2.0))
        assert lo == pytest.approx(math.sqrt(5), rel=1e-12)
        assert hi == pytest.approx(8 / math.sqrt(5), rel=1e-12)
        assert hi / lo == pytest.approx(1.6, rel=1e-12)

    def test_bound_sharp_for_ball(self, ball):
        bound, _ = projection_exponent_bound(ball, 3.0)
        assert bound == pytest.approx(persistence_exponent(2.0, 3.0), abs=1e-9)

    def test_bound_sharp_for_square(self, square):
        bound, _ = projection_exponent_bound(square, 2.0)
        assert bound == pytest.approx(persistence_exponent(2.0, 2.0), abs=1e-9)

    def test_offset_box_grid_bound_attained_on_axis(self, offset_box):
        # The sup over directions is still the radial exponent: the second
        # coordinate axis has shadow [2, 3], whose ratio equals r* = 3/2.
        bound, direction = projection_exponent_bound(offset_box, 1.5)
        assert bound == pytest.approx(persistence_exponent(1.5, 1.5), abs=1e-9)
        assert abs(direction[1]) > 0.999

    def test_offset_box_fixed_direction_gap(self, offset_box):
        # Along the nearest-point direction the shadow ratio is 8/5 > r*,
        # so the one-dimensional bound is strictly below the exponent.
        bound, _ = projection_exponent_bound(
            offset_box, 1.5, directions=[(1.0, 2.0)], refine=False
        )
        assert bound == pytest.approx(persistence_exponent(1.6, 1.5), abs=1e-9)
        assert bound == pytest.approx(0.5319107863086108, abs=1e-9)
        assert persistence_exponent(1.5, 1.5) - bound > 0.08


class TestDistances:
    def test_scaled_body_distance(self, ball):
        rs = r_star(ball)[0]
        inside = set_distance(ball, ball.scale(rs * (1 - 1e-5)))
        outside = set_distance(ball, ball.scale(rs * (1 + 1e-5)))
        assert inside == pytest.approx(0.0, abs=1e-9)
        # d(B, qB) = (q - r*) * |nearest point| past the touching scale.
        assert outside == pytest.approx(4.0e-5, abs=1e-8)

    def test_scaled_gap_ratio(self, unit_interval):
        assert scaled_gap_ratio(unit_interval, 2.2) == pytest.approx(0.2, abs=1e-9)
        assert scaled_gap_ratio(unit_interval, 2.0) == pytest.approx(0.0, abs=1e-9)


class TestExponentReport:
    def test_ball_report(self, ball):
        rep = exponent_report(ball, 3.0)
        assert rep.r_star == pytest.approx(2.0, abs=1e-9)
        assert rep.exponent == pytest.approx(1 / math.log(2), rel=1e-12)
        deltas = [d for d, _ in rep.delta_curve]
        assert deltas == [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6]
        # r_delta for the ball is (4 + delta) / (2 - delta), decreasing to r*.
        first, last = rep.delta_curve[0][1], rep.delta_curve[-1][1]
        assert first == pytest.approx(4.1 / 1.9, abs=1e-6)
        assert last == pytest.approx((4 + 1e-6) / (2 - 1e-6), abs=1e-6)
        rs = [r for _, r in rep.delta_curve]
        assert all(a > b for a, b in zip(rs, rs[1:]))
        assert all(r > rep.r_star for r in rs)
        assert rep.exponent - rep.projection_bound == pytest.approx(0.0, abs=1e-9)


class TestBodyValidation:
    def test_unbounded_polytope(self):
        with pytest.raises(ConfigError, match="unbounded along a coordinate direction"):
            Polytope([[1.0, 0.0]], [-1.0])

    def test_origin_inside(self):
        with pytest.raises(ConfigError, match="origin must lie strictly outside"):
            box((-1.0, -1.0), (1.0, 1.0))
        with pytest.raises(ConfigError, match="origin must lie strictly outside"):
            Ball((0.5, 0.0), 1.0)

    def test_empty_box(self):
        with pytest.raises(ConfigError, match="strictly below upper bounds"):
            box((1.0, 1.0), (1.0, 2.0))

    def test_bad_ball_radius(self):
        with pytest.raises(ConfigError, match="radius must be positive"):
            Ball((3.0, 0.0), 0.0)

    def test_h_value_sign_convention(self, ball, square):
        # h <= 0 inside, > 0 outside; the gauge the walkers are tested with.
        assert h_value(ball, (3.0, 0.0)) < 0
        assert h_value(ball, (5.0, 0.0)) > 0
        assert h_value(square, (1.5, 1.5)) < 0
        assert h_value(square, (0.5, 1.5)) > 0
