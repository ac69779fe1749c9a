"""Limit-field samplers: kernel matrices, nugget ladder, moment checks.

Monte Carlo assertions use 3 standard errors of the relevant moment
estimator throughout; the SE formulas (2 sigma^4 / n for a variance,
sigma_x^2 sigma_y^2 + c^2 for a product) are the exact Gaussian ones.
"""

import math

import numpy as np
import pytest

from proclab.errors import FactorizationError
from proclab.limitfield import (
    MAX_FIELD_POINTS,
    FieldSpec,
    _factor_with_nugget,
    build_cov_matrix,
    read_samples_csv,
    sample_field,
    sample_swanson,
    write_samples_csv,
)
from proclab.marginals import limit_cov_kernel, swanson_kernel


class TestFieldSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            FieldSpec(hurst=0.0, points=((1.0, 0.0),))
        with pytest.raises(ValueError):
            FieldSpec(hurst=0.5, points=())
        with pytest.raises(ValueError):
            FieldSpec(hurst=0.5, points=((1.0, 0.0), (1.0, 0.0)))
        with pytest.raises(ValueError):
            FieldSpec(hurst=0.5, points=((-1.0, 0.0),))
        with pytest.raises(ValueError):
            FieldSpec(hurst=0.5, points=((1.0, math.nan),))
        with pytest.raises(ValueError):
            FieldSpec(hurst=0.5, points=((1.0, 0.0),), kappa=-0.1)
        with pytest.raises(ValueError):
            FieldSpec(hurst=0.5, points=((1.0, 0.0),), nugget=-1e-9)

    def test_zero_time_needs_weight(self):
        with pytest.raises(ValueError):
            FieldSpec(hurst=0.5, points=((0.0, 0.3), (1.0, 0.0)))
        spec = FieldSpec(hurst=0.5, points=((0.0, 0.3), (1.0, 0.0)), kappa=0.5)
        assert spec.n_points == 2

    def test_points_coerced_to_floats(self):
        spec = FieldSpec(hurst=0.5, points=((1, 0), (2, -1)))
        assert spec.points == ((1.0, 0.0), (2.0, -1.0))


class TestCovMatrix:
    def test_single_median_point(self):
        # variance of 1{B(t) <= median} indicators: Phi(0)(1 - Phi(0)) = 1/4
        m = build_cov_matrix(FieldSpec(hurst=0.5, points=((2.0, 0.0),)))
        assert m.shape == (1, 1)
        assert m[0, 0] == 0.25

    def test_orthant_off_diagonal(self):
        # points (1,0),(4,0) at h=1/2: correlation 1/2, so the covariance
        # is arcsin(1/2)/(2 pi) = 1/12
        m = build_cov_matrix(FieldSpec(hurst=0.5, points=((1.0, 0.0), (4.0, 0.0))))
        assert abs(m[0, 1] - 1.0 / 12.0) < 1e-14
        assert m[0, 1] == m[1, 0]
        assert m[0, 0] == 0.25 and m[1, 1] == 0.25

    def test_infinite_x_gives_zero_row(self):
        m = build_cov_matrix(
            FieldSpec(hurst=0.5, points=((1.0, math.inf), (2.0, 0.0), (3.0, -math.inf)))
        )
        assert np.all(m[0] == 0.0) and np.all(m[:, 0] == 0.0)
        assert np.all(m[2] == 0.0) and np.all(m[:, 2] == 0.0)
        assert m[1, 1] == 0.25

    def test_zero_time_row_under_weight(self):
        spec = FieldSpec(hurst=0.5, points=((0.0, 0.3), (1.0, 0.0)), kappa=0.5)
        m = build_cov_matrix(spec)
        assert np.all(m[0] == 0.0) and np.all(m[:, 0] == 0.0)
        assert m[1, 1] == 0.25

    def test_symmetry_and_diag_bound(self):
        rng = np.random.default_rng(31)
        ts = rng.uniform(0.2, 3.0, size=12)
        xs = rng.standard_normal(12)
        for kappa in (0.0, 0.7):
            spec = FieldSpec(hurst=0.3, points=tuple(zip(ts, xs)), kappa=kappa)
            m = build_cov_matrix(spec)
            assert np.array_equal(m, m.T)
            cap = float(np.max(ts) ** (2.0 * kappa)) / 4.0
            assert np.all(np.diag(m) >= 0.0)
            assert np.all(np.diag(m) <= cap + 1e-15)

    def test_psd_up_to_roundoff(self):
        rng = np.random.default_rng(32)
        for h in (0.3, 0.5, 0.7):
            pts = tuple(zip(rng.uniform(0.1, 2.0, 20), rng.standard_normal(20)))
            m = build_cov_matrix(FieldSpec(hurst=h, points=pts))
            assert float(np.linalg.eigvalsh(m).min()) > -1e-8

    def test_point_cap(self):
        pts = tuple((1.0 + i, 0.0) for i in range(MAX_FIELD_POINTS + 1))
        with pytest.raises(ValueError):
            build_cov_matrix(FieldSpec(hurst=0.5, points=pts))

    def test_swanson_kernel_identity(self):
        # 2 pi t * kernel((t,0),(t,0)) at h=1/2 equals the scaled-median
        # variance t pi / 2
        for t in (0.25, 1.0, 2.0, 3.5):
            lhs = 2.0 * math.pi * t * limit_cov_kernel(0.5, (t, 0.0), (t, 0.0))
            assert abs(lhs - swanson_kernel(t, t)) < 1e-7


class TestNuggetLadder:
    def test_first_rung_on_clean_matrix(self):
        lower, used = _factor_with_nugget(np.eye(3), 1e-10)
        assert used == 1e-10
        assert np.allclose(lower @ lower.T, np.eye(3) + 1e-10 * np.eye(3))

    def test_escalates_past_exact_singularity(self):
        ones = np.ones((2, 2))
        lower, used = _factor_with_nugget(ones, 1e-10)
        assert used >= 1e-10
        assert np.allclose(lower @ lower.T, ones + used * np.eye(2), atol=1e-15)

    def test_zero_start_falls_back_to_floor(self):
        _, used = _factor_with_nugget(np.ones((2, 2)), 0.0)
        assert used == 1e-10

    def test_indefinite_matrix_fails_with_ladder_report(self):
        bad = np.array([[1.0, 2.0], [2.0, 1.0]])  # eigenvalues 3 and -1
        with pytest.raises(FactorizationError) as err:
            _factor_with_nugget(bad, 1e-10)
        msg = str(err.value)
        assert "1.0e-10" in msg and "1.0e-06" in msg


class TestSampleField:
    def test_single_point_moments(self):
        spec = FieldSpec(hurst=0.5, points=((1.0, 0.0),))
        s = sample_field(spec, 20000, seed=414)[:, 0]
        n = s.size
        var = float(np.mean(s * s))
        # SE of a Gaussian variance estimate: sigma^2 sqrt(2/n)
        assert abs(var - 0.25) < 3.0 * 0.25 * math.sqrt(2.0 / n)
        assert abs(float(np.mean(s))) < 3.0 * 0.5 / math.sqrt(n)
        # 4th moment 3 sigma^4, SE sigma^4 sqrt(96/n)
        m4 = float(np.mean(s**4))
        assert abs(m4 - 3.0 * 0.0625) < 3.0 * 0.0625 * math.sqrt(96.0 / n)

    def test_cross_covariance(self):
        spec = FieldSpec(hurst=0.5, points=((1.0, 0.0), (4.0, 0.0)))
        s = sample_field(spec, 20000, seed=415)
        n = s.shape[0]
        est = float(np.mean(s[:, 0] * s[:, 1]))
        target = 1.0 / 12.0
        se = math.sqrt((0.25 * 0.25 + target**2) / n)
        assert abs(est - target) < 3.0 * se

    def test_degenerate_columns_are_exact_zero(self):
        spec = FieldSpec(hurst=0.5, points=((0.0, 0.3), (1.0, 0.0), (2.0, math.inf)), kappa=0.5)
        s = sample_field(spec, 500, seed=8)
        assert np.all(s[:, 0] == 0.0)
        assert np.all(s[:, 2] == 0.0)
        assert np.any(s[:, 1] != 0.0)

    def test_all_degenerate_spec(self):
        spec = FieldSpec(hurst=0.5, points=((0.0, 0.3),), kappa=1.0)
        assert np.all(sample_field(spec, 50, seed=9) == 0.0)

    def test_seed_determinism_and_workers(self):
        spec = FieldSpec(hurst=0.3, points=((0.5, -0.2), (1.0, 0.1), (2.0, 0.4)))
        a = sample_field(spec, 800, seed=77)
        b = sample_field(spec, 800, seed=77)
        c = sample_field(spec, 800, seed=77, workers=3)
        assert np.array_equal(a, b)
        assert np.array_equal(a, c)
        assert not np.array_equal(a, sample_field(spec, 800, seed=78))

    def test_sample_prefix_stability(self):
        # per-sample substreams: the first k rows do not depend on n_samples
        spec = FieldSpec(hurst=0.5, points=((1.0, 0.0), (2.0, 0.5)))
        a = sample_field(spec, 100, seed=5)
        b = sample_field(spec, 40, seed=5)
        assert np.array_equal(a[:40], b)

    def test_n_samples_domain(self):
        spec = FieldSpec(hurst=0.5, points=((1.0, 0.0),))
        with pytest.raises(ValueError):
            sample_field(spec, 0, seed=1)


class TestSampleSwanson:
    def test_variance_and_covariance(self):
        s = sample_swanson([1.0, 4.0, 2.0], 20000, seed=551)
        n = s.shape[0]
        targets = {0: math.pi / 2.0, 1: 2.0 * math.pi, 2: math.pi}
        for col, target in targets.items():
            est = float(np.mean(s[:, col] ** 2))
            assert abs(est - target) < 3.0 * target * math.sqrt(2.0 / n)
        est = float(np.mean(s[:, 0] * s[:, 1]))
        target = math.pi / 3.0  # sqrt(4) arcsin(1/2)
        se = math.sqrt(((math.pi / 2.0) * 2.0 * math.pi + target**2) / n)
        assert abs(est - target) < 3.0 * se
        assert abs(est - swanson_kernel(1.0, 4.0)) < 3.0 * se

    def test_zero_time_column(self):
        s = sample_swanson([0.0, 1.0], 300, seed=21)
        assert np.all(s[:, 0] == 0.0)
        assert np.any(s[:, 1] != 0.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            sample_swanson([], 10, seed=1)
        with pytest.raises(ValueError):
            sample_swanson([1.0, 1.0], 10, seed=1)
        with pytest.raises(ValueError):
            sample_swanson([-1.0], 10, seed=1)

    def test_determinism(self):
        a = sample_swanson([0.5, 1.5], 200, seed=99)
        b = sample_swanson([0.5, 1.5], 200, seed=99)
        assert np.array_equal(a, b)


class TestSamplesCsv:
    def test_round_trip(self, tmp_path):
        spec = FieldSpec(hurst=0.5, points=((1.0, 0.0), (2.0, -0.75)))
        s = sample_field(spec, 25, seed=303)
        out = tmp_path / "field.csv"
        write_samples_csv(s, spec.points, out)
        header = out.read_text().split("\n", 1)[0]
        assert header == "sample,1.0@0.0,2.0@-0.75"
        back, points = read_samples_csv(out)
        assert points == spec.points
        assert np.array_equal(back, s)  # 17 digits round-trips doubles exactly

    def test_infinite_label(self, tmp_path):
        out = tmp_path / "field.csv"
        write_samples_csv(np.zeros((2, 1)), ((1.0, math.inf),), out)
        _, points = read_samples_csv(out)
        assert points == ((1.0, math.inf),)

    def test_shape_guard(self, tmp_path):
        with pytest.raises(ValueError):
            write_samples_csv(np.zeros((2, 3)), ((1.0, 0.0),), tmp_path / "x.csv")

    def test_bad_header_rejected(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("t,path_0\n0.0,1.0\n")
        with pytest.raises(ValueError):
            read_samples_csv(p)
