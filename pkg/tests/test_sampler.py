"""Step laws: closed-form moments, centering, reproducible batches, Hill."""

import math

import numpy as np
import pytest

from persistlab.errors import ConfigError
from persistlab.rng import derive_rng
from persistlab.sampler import (
    VonMisesFisher,
    calibrate_centering,
    directed_tail_constant,
    hill_tail_index,
    multivariate_model,
    one_dim_model,
    one_dim_survival,
    one_dim_variance,
    product_model,
    radial_survival,
    sample,
    sample_batch,
    sample_nonstandard,
    sample_step_1d,
    truncated_second_moment,
)


class TestClosedForms:
    def test_one_sided_truncated_second_moment(self):
        # One-sided Pareto(3), x_m=1: E[X^2 1(X<x)] = 3(1 - 1/x).
        m = one_dim_model(3.0, p_minus=0.0)
        assert truncated_second_moment(m, 5.0) == pytest.approx(3 * (1 - 1 / 5), rel=1e-12)

    def test_truncated_second_moment_against_mc(self):
        m = one_dim_model(1.5, bulk_fraction=0.3)
        analytic = truncated_second_moment(m, 7.3)
        batch = sample_batch(m, 400_000, 31, stream="trunc").steps.ravel()
        raw = batch + calibrate_centering(m)[0]
        kept = raw**2 * (np.abs(raw) < 7.3)
        z = (float(np.mean(kept)) - analytic) / (float(np.std(kept, ddof=1)) / math.sqrt(raw.size))
        assert abs(z) < 3.0

    def test_variance(self):
        assert one_dim_variance(one_dim_model(3.0)) == pytest.approx(3.0, rel=1e-12)
        with pytest.raises(ConfigError, match="tail indices above 2"):
            one_dim_variance(one_dim_model(2.0))

    def test_survival_formulas(self):
        m = one_dim_model(2.0, p_minus=0.25, bulk_fraction=0.2)
        assert one_dim_survival(m, 4.0) == pytest.approx(0.8 * 0.75 * 4.0**-2, rel=1e-12)
        with pytest.raises(ConfigError, match="x >= x_m"):
            one_dim_survival(m, 0.5)
        mv = multivariate_model(3, 2.5, bulk_fraction=0.1)
        assert radial_survival(mv, 2.0) == pytest.approx(0.9 * 2.0**-2.5, rel=1e-12)
        with pytest.raises(ConfigError, match="t >= x_m"):
            radial_survival(mv, 0.5)

    def test_directed_tail_constant_uniform(self, mv2):
        # E[(<e1, Theta>)_+^2] over the uniform circle = 1/4.
        assert directed_tail_constant(mv2, (1.0, 0.0)) == pytest.approx(0.25, abs=1e-9)
        assert directed_tail_constant(mv2, (0.0, -1.0)) == pytest.approx(0.25, abs=1e-9)


class TestCentering:
    def test_uniform_angular_centers_at_zero(self):
        c = calibrate_centering(multivariate_model(2, 2.5))
        assert np.allclose(c, 0.0, atol=1e-12)

    def test_one_sided_pareto_mean(self):
        # alpha x_m / (alpha - 1) = 2 for alpha = 2, x_m = 1.
        c = calibrate_centering(one_dim_model(2.0, p_minus=0.0))
        assert c == pytest.approx([2.0], rel=1e-12)

    def test_vmf_small_kappa_near_uniform(self):
        c = calibrate_centering(
            multivariate_model(2, 2.0, angular=VonMisesFisher((1.0, 0.0), 1e-8))
        )
        assert np.linalg.norm(c) < 1e-6

    def test_samples_are_centered(self):
        m = one_dim_model(3.0, p_minus=0.3)
        steps = sample_batch(m, 200_000, 77).steps.ravel()
        z = float(np.mean(steps)) / (float(np.std(steps, ddof=1)) / math.sqrt(steps.size))
        assert abs(z) < 4.0


class TestSampling:
    def test_batch_reproducibility(self, model15):
        a = sample_batch(model15, 500, 123)
        b = sample_batch(model15, 500, 123)
        assert np.array_equal(a.steps, b.steps)
        assert a.model_digest == b.model_digest
        c = sample_batch(model15, 500, 123, stream="other")
        assert not np.array_equal(a.steps, c.steps)
        assert not np.array_equal(a.steps, sample_batch(model15, 500, 124).steps)

    def test_batch_count_validation(self, model15):
        with pytest.raises(ConfigError, match="count must be positive"):
            sample_batch(model15, 0, 1)

    def test_shapes(self, model15, mv2):
        rng = derive_rng(1, "shape")
        assert sample(model15, rng, 7).shape == (7, 1)
        assert sample(mv2, rng, 7).shape == (7, 2)
        prod = product_model([one_dim_model(1.5), one_dim_model(3.0)])
        assert prod.dimension == 2
        assert prod.alpha == 1.5  # the heaviest component rules the tail
        assert sample(prod, rng, 5).shape == (5, 2)

    def test_single_component_product_matches_scalar_path(self):
        c = one_dim_model(1.7, p_minus=0.3)
        a = sample_step_1d(c, derive_rng(5, "x"), 6)
        b = sample_nonstandard([c], derive_rng(5, "x"), 6)
        assert np.array_equal(a, b[:, 0])


class TestHill:
    def test_quantile_grid(self):
        # Deterministic Pareto(2) quantile grid; Hill should sit near 2.
        n = 10**5
        xs = (np.arange(1, n + 1) / n) ** (-0.5)
        est = hill_tail_index(xs, 1000)
        assert est.alpha == pytest.approx(2.006769635027088, rel=1e-12)
        assert est.k == 1000 and est.n == n
        assert not est.unreliable
        assert hill_tail_index(xs, 10).unreliable

    def test_validation(self):
        xs = np.ones(50)
        with pytest.raises(ConfigError, match="0 < k < n"):
            hill_tail_index(xs, 50)
        with pytest.raises(ConfigError, match="zero log-spacings"):
            hill_tail_index(np.ones(100), 20)


class TestModelValidation:
    def test_alpha_and_scale(self):
        with pytest.raises(ConfigError, match="alpha must exceed 1"):
            one_dim_model(0.5)
        with pytest.raises(ConfigError, match="radial_scale"):
            one_dim_model(1.5, x_m=0.0)

    def test_mixture_weights(self):
        with pytest.raises(ConfigError, match="bulk_fraction"):
            one_dim_model(1.5, bulk_fraction=1.5)
        with pytest.raises(ConfigError, match="p_minus"):
            one_dim_model(1.5, p_minus=1.5)

    def test_dimension(self):
        with pytest.raises(ConfigError, match="dimension"):
            multivariate_model(0, 1.5)
