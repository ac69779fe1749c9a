"""Tests for the scalar and bivariate Gaussian kernels."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from proclab.gaussian import (
    bvn_cdf,
    normal_upper_tail_bound,
    orthant_negative,
    std_normal_cdf,
    std_normal_pdf,
    std_normal_quantile,
)


# Frozen oracle values, mpmath erfc/findroot at 40 digits.
PHI_ORACLE = [
    (1.0, 0.84134474606854294859),
    (-1.0, 0.15865525393145705141),
    (2.5, 0.99379033467422386483),
    (0.0, 0.5),
]
QUANTILE_ORACLE = [
    (0.025, -1.9599639845400542355),
    (0.975, 1.9599639845400542355),
    (0.0001, -3.7190164854556805644),
    (0.5, 0.0),
]
# Frozen oracle values, scipy dblquad of the bivariate density (epsabs 1e-12).
BVN_ORACLE = [
    (0.5, -0.3, 0.7, 0.356783634796855),
    (1.2, 0.4, -0.85, 0.540456493140716),
    (-1.0, 2.0, 0.99, 0.158655253931459),
    (0.3, 0.3, 0.925, 0.558642941022859),
    (-0.5, -0.5, -0.99, 0.0),
    (2.0, 2.0, 0.95, 0.970524219807908),
    (0.0, 1.0, 0.3, 0.449619266992320),
    (1.0, 1.0, 0.5, 0.745203586846750),
]


class TestScalarCdf:
    def test_oracle_values(self):
        for z, want in PHI_ORACLE:
            assert std_normal_cdf(z) == pytest.approx(want, abs=1e-15)

    def test_far_tail_saturation(self):
        assert std_normal_cdf(40.0) == pytest.approx(1.0, abs=1e-15)
        assert std_normal_cdf(-40.0) == pytest.approx(0.0, abs=1e-15)

    def test_array_input(self):
        z = np.array([-1.0, 0.0, 1.0])
        out = std_normal_cdf(z)
        assert out.shape == (3,)
        assert out[1] == 0.5

    def test_nonfinite_rejected(self):
        for bad in (math.nan, math.inf, -math.inf):
            with pytest.raises(ValueError):
                std_normal_cdf(bad)

    @given(st.floats(-8, 8), st.floats(-8, 8))
    def test_monotone(self, a, b):
        lo, hi = min(a, b), max(a, b)
        assert std_normal_cdf(lo) <= std_normal_cdf(hi)

    @given(st.floats(-10, 10))
    def test_symmetry(self, z):
        assert std_normal_cdf(z) + std_normal_cdf(-z) == pytest.approx(1.0, abs=1e-14)


class TestPdf:
    def test_values(self):
        assert std_normal_pdf(0.0) == pytest.approx(0.39894228040143267794, abs=1e-16)
        assert std_normal_pdf(1.0) == pytest.approx(0.2419707245191433498, abs=1e-16)

    def test_far_tail_underflow_silent(self):
        assert std_normal_pdf(60.0) == 0.0


class TestQuantile:
    def test_oracle_values(self):
        for p, want in QUANTILE_ORACLE:
            got = std_normal_quantile(p)
            if want == 0.0:
                assert got == 0.0
            else:
                assert got == pytest.approx(want, rel=1e-9)

    def test_round_trip_tight(self):
        # acceptance-grade grid: 1e3 levels spanning both tails
        alphas = np.linspace(1e-4, 1 - 1e-4, 1000)
        worst = max(abs(std_normal_cdf(std_normal_quantile(a)) - a) for a in alphas)
        assert worst <= 1e-11

    def test_against_library_inverse(self):
        # scipy's ndtri used as an independent cross-check oracle
        for p in np.linspace(1e-6, 1 - 1e-6, 211):
            assert std_normal_quantile(p) == pytest.approx(float(special.ndtri(p)), rel=1e-12, abs=1e-13)

    def test_domain(self):
        for bad in (0.0, 1.0, -0.1, 1.1, math.nan):
            with pytest.raises(ValueError):
                std_normal_quantile(bad)

    @given(st.floats(1e-6, 1 - 1e-6))
    @settings(max_examples=200)
    def test_round_trip_property(self, p):
        assert std_normal_cdf(std_normal_quantile(p)) == pytest.approx(p, abs=1e-12)


class TestOrthant:
    def test_closed_forms(self):
        assert orthant_negative(0.0) == pytest.approx(0.25, abs=1e-16)
        assert orthant_negative(1.0) == pytest.approx(0.5, abs=1e-15)
        assert orthant_negative(-1.0) == pytest.approx(0.0, abs=1e-15)
        assert orthant_negative(0.5) == pytest.approx(1.0 / 3.0, abs=1e-15)

    def test_domain(self):
        with pytest.raises(ValueError):
            orthant_negative(1.5)


class TestBvn:
    def test_oracle_values(self):
        for x, y, r, want in BVN_ORACLE:
            assert bvn_cdf(x, y, r) == pytest.approx(want, abs=1e-7)

    def test_orthant_identity_sweep(self):
        # acceptance-grade sweep across both quadrature branches
        for rho in np.arange(-0.99, 0.995, 0.01):
            got = bvn_cdf(0.0, 0.0, rho)
            assert abs(got - orthant_negative(rho)) <= 1e-7

    def test_zero_correlation_factorizes(self):
        for x, y in [(-1.3, 0.4), (0.0, 2.0), (1.1, 1.1)]:
            want = std_normal_cdf(x) * std_normal_cdf(y)
            assert bvn_cdf(x, y, 0.0) == pytest.approx(want, abs=1e-14)

    def test_infinite_arguments(self):
        assert bvn_cdf(math.inf, 0.3, 0.5) == pytest.approx(std_normal_cdf(0.3), abs=1e-15)
        assert bvn_cdf(0.3, math.inf, -0.5) == pytest.approx(std_normal_cdf(0.3), abs=1e-15)
        assert bvn_cdf(-math.inf, 0.3, 0.5) == 0.0
        assert bvn_cdf(math.inf, math.inf, 0.5) == 1.0

    def test_degenerate_correlations(self):
        assert bvn_cdf(0.7, 1.2, 1.0) == pytest.approx(std_normal_cdf(0.7), abs=1e-15)
        assert bvn_cdf(0.7, 1.2, 1.0 - 1e-13) == pytest.approx(std_normal_cdf(0.7), abs=1e-15)
        want = max(0.0, std_normal_cdf(0.7) + std_normal_cdf(-0.2) - 1.0)
        assert bvn_cdf(0.7, -0.2, -1.0) == pytest.approx(want, abs=1e-15)

    def test_symmetry_in_arguments(self):
        for x, y, r in [(0.3, -1.2, 0.6), (2.0, 0.1, -0.95)]:
            assert bvn_cdf(x, y, r) == pytest.approx(bvn_cdf(y, x, r), abs=1e-14)

    def test_live_quadrature_oracle(self):
        # small fresh sample of points, checked against dblquad on the spot
        rng = np.random.default_rng(7)
        for _ in range(6):
            x, y = rng.uniform(-2, 2, size=2)
            r = rng.uniform(-0.98, 0.98)

            def dens(v, u, r=r):
                det = 1.0 - r * r
                return math.exp(-(u * u - 2 * r * u * v + v * v) / (2 * det)) / (2 * math.pi * math.sqrt(det))

            want, err = integrate.dblquad(dens, -9, x, lambda _: -9, lambda _: y,
                                          epsabs=1e-10, epsrel=1e-10)
            assert bvn_cdf(x, y, r) == pytest.approx(want, abs=1e-7)

    @given(st.floats(-4, 4), st.floats(-4, 4), st.floats(-0.999, 0.999))
    @settings(max_examples=300, deadline=None)
    def test_frechet_bounds(self, x, y, r):
        p = bvn_cdf(x, y, r)
        lo = max(0.0, std_normal_cdf(x) + std_normal_cdf(y) - 1.0)
        hi = min(std_normal_cdf(x), std_normal_cdf(y))
        assert lo - 1e-7 <= p <= hi + 1e-7

    @given(st.floats(-3, 3), st.floats(-3, 3))
    @settings(max_examples=100, deadline=None)
    def test_monotone_in_rho(self, x, y):
        vals = [bvn_cdf(x, y, r) for r in (-0.9, -0.5, 0.0, 0.5, 0.9)]
        assert all(b >= a - 1e-9 for a, b in zip(vals, vals[1:]))


class TestTailBound:
    def test_dominates_tail(self):
        for z in (0.5, 1.0, 2.0, 4.0):
            assert 1.0 - std_normal_cdf(z) <= normal_upper_tail_bound(z)

    def test_domain(self):
        with pytest.raises(ValueError):
            normal_upper_tail_bound(0.0)
