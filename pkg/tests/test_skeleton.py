"""Staircase path: construction, envelope, jump law, cost heuristic."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from persistlab.errors import ConfigError
from persistlab.skeleton import (
    build_skeleton,
    cost_heuristic,
    height_at,
    skeleton_as_measure,
)


class TestConstruction:
    def test_reference_staircase(self):
        sk = build_skeleton(1.0, 2.0, 4, 100)
        assert sk.initial_height == 8
        assert sk.jump_times == (9, 19, 39, 79)
        assert sk.k_n == 4
        assert [height_at(sk, k) for k in (4, 8, 9, 19, 38, 100)] == [8, 8, 18, 38, 38, 158]
        assert skeleton_as_measure(sk) == ((9, 10), (19, 20), (39, 40), (79, 80))

    def test_mass_telescoping(self):
        sk = build_skeleton(1.0, 2.0, 4, 100)
        total = sk.initial_height + sum(j for _, j in skeleton_as_measure(sk))
        assert total == height_at(sk, 100)

    def test_no_jump_before_horizon(self):
        # First jump for c1=5 lands at 11; a horizon of 10 sees none.
        sk = build_skeleton(1.0, 2.0, 5, 10)
        assert sk.k_n == 0
        assert skeleton_as_measure(sk) == ()
        assert height_at(sk, 10) == 10

    def test_integer_heights_stay_integer(self):
        # Integer envelope parameters keep the recursion in exact integers.
        sk = build_skeleton(1, 2, 1, 10**6)
        assert isinstance(height_at(sk, 999_983), int)

    @settings(max_examples=40, deadline=None)
    @given(
        st.integers(1, 4),
        st.integers(2, 7),
        st.integers(1, 12),
        st.integers(20, 4000),
    )
    def test_envelope_property(self, a, gap, c1, n):
        b = a + gap
        sk = build_skeleton(a, b, c1, n)
        ks = range(c1, n + 1)
        assert all(a * k <= height_at(sk, k) <= b * k for k in ks)
        assert sk.k_n == len(sk.jump_times)


class TestEnvelope:
    def test_exact_small_horizons(self):
        sk = build_skeleton(1, 2, 1, 10**6)
        bad = [k for k in range(1, 10_001) if not (k <= height_at(sk, k) <= 2 * k)]
        assert bad == []

    def test_log_grid_to_1e9(self):
        sk = build_skeleton(1, 2, 1, 10**9)
        grid = sorted({int(v) for v in np.geomspace(1, 10**9, 400)})
        assert all(k <= height_at(sk, k) <= 2 * k for k in grid)


class TestJumpLaw:
    def test_geometric_growth(self):
        sk = build_skeleton(1, 2, 1, 10**9)
        t = sk.jump_times
        j = [m for _, m in skeleton_as_measure(sk)]
        rt = [t[i + 1] / t[i] for i in range(19, len(t) - 1)]
        rj = [j[i + 1] / j[i] for i in range(19, len(j) - 1)]
        assert max(abs(r - 2.0) for r in rt) < 0.01
        assert max(abs(r - 2.0) for r in rj) < 0.01

    def test_jump_count_law(self):
        sk6 = build_skeleton(1.0, 2.0, 1, 10**6)
        ratio6 = sk6.k_n * math.log(2) / math.log(10**6)
        assert 0.9 <= ratio6 <= 1.1
        assert ratio6 == pytest.approx(0.9030899869919436, rel=1e-12)
        sk9 = build_skeleton(1.0, 2.0, 1, 10**9)
        ratio9 = sk9.k_n * math.log(2) / math.log(10**9)
        # The offset term shrinks like 1/log n; the gap closes monotonically.
        assert abs(ratio9 - 1.0) < abs(ratio6 - 1.0)
        assert abs(ratio9 - 1.0) < 0.1


class TestCost:
    def test_arithmetic_series_identity(self):
        sk = build_skeleton(1.0, 2.0, 4, 100)
        assert cost_heuristic(sk, 2.0) == pytest.approx(
            -math.log(2) * sk.k_n * (sk.k_n + 1) / 2, rel=1e-12
        )

    def test_alpha_boundary(self):
        sk = build_skeleton(1.0, 2.0, 4, 100)
        assert cost_heuristic(sk, 1.0 + 1e-12) == pytest.approx(0.0, abs=1e-9)

    def test_ratio_near_theory(self):
        sk = build_skeleton(1.0, 2.0, 1, 10**6)
        ratio = cost_heuristic(sk, 1.5) / math.log(10**6) ** 2
        target = -0.5 / (2 * math.log(2))
        assert abs(ratio - target) / abs(target) < 0.25

    def test_doubling_approaches_theory(self):
        target = -0.5 / (2 * math.log(2))
        gaps = []
        for j in range(8):
            n = 10_000 * 2**j
            sk = build_skeleton(1.0, 2.0, 1, n)
            gaps.append(abs(cost_heuristic(sk, 1.5) / math.log(n) ** 2 - target))
        assert all(b < a for a, b in zip(gaps, gaps[1:]))


class TestValidation:
    def test_envelope_parameters(self):
        with pytest.raises(ConfigError, match="0 < a < b"):
            build_skeleton(2.0, 2.0, 1, 10)
        with pytest.raises(ConfigError, match="0 < a < b"):
            build_skeleton(2.0, 1.0, 1, 10)

    def test_start_level(self):
        with pytest.raises(ConfigError, match="c1 must be an integer >= 1"):
            build_skeleton(1.0, 2.0, 0, 10)

    def test_domain_errors(self):
        sk = build_skeleton(1.0, 2.0, 4, 100)
        with pytest.raises(ConfigError, match="outside the skeleton domain"):
            height_at(sk, 3)
        with pytest.raises(ConfigError, match="outside the skeleton domain"):
            height_at(sk, 101)

    def test_horizon_cap(self):
        with pytest.raises(ConfigError, match="horizon too large"):
            build_skeleton(1.0, 2.0, 1, 2**63)
