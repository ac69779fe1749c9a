"""Tests for the fBM ensemble samplers and persistence."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from proclab.errors import FactorizationError
from proclab.fbm import (
    FbmEnsemble,
    _cholesky_factor,
    empirical_cov,
    fbm_cov,
    read_csv,
    sample_cholesky,
    sample_circulant,
    self_similarity_check,
    validate_grid,
    write_csv,
)


class TestCov:
    def test_examples(self):
        assert fbm_cov(0.5, 1.0, 2.0) == 1.0  # reduces to min(s, t)
        assert fbm_cov(0.75, 1.0, 1.0) == 1.0
        # oracle: mpmath power arithmetic at 40 digits
        assert fbm_cov(0.3, 1.0, 2.0) == pytest.approx(0.75785828325519904117, abs=1e-15)
        assert fbm_cov(0.7, 1.0, 3.0) == pytest.approx(1.508260450100145252, abs=1e-14)

    def test_zero_time(self):
        assert fbm_cov(0.3, 0.0, 5.0) == 0.0
        assert fbm_cov(0.9, 0.0, 0.0) == 0.0

    def test_domain(self):
        with pytest.raises(ValueError):
            fbm_cov(0.5, -1.0, 1.0)
        for h in (0.0, 1.0, -0.2):
            with pytest.raises(ValueError):
                fbm_cov(h, 1.0, 1.0)

    @given(st.floats(0.05, 0.95), st.floats(0.01, 50), st.floats(0.01, 50))
    @settings(max_examples=200)
    def test_symmetry(self, h, s, t):
        assert fbm_cov(h, s, t) == pytest.approx(fbm_cov(h, t, s), rel=1e-12, abs=1e-12)

    @given(st.floats(0.05, 0.95), st.floats(0.01, 10), st.floats(0.01, 10), st.floats(0.1, 10))
    @settings(max_examples=200)
    def test_self_similar_scaling(self, h, s, t, a):
        lhs = fbm_cov(h, a * s, a * t)
        rhs = a ** (2 * h) * fbm_cov(h, s, t)
        assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-12)

    def test_cauchy_schwarz_on_grid(self):
        ts = np.linspace(0.1, 4.0, 25)
        for h in (0.3, 0.5, 0.7):
            c = fbm_cov(h, ts[:, None], ts[None, :])
            bound = (ts ** h)[:, None] * (ts ** h)[None, :]
            assert np.all(np.abs(c) <= bound + 1e-12)


class TestGrid:
    def test_rejects_bad_grids(self):
        for bad in ([1.0], [0.0, 0.0, 1.0], [1.0, 0.5], [-1.0, 1.0], [0.0, math.inf]):
            with pytest.raises(ValueError):
                validate_grid(bad)

    def test_accepts(self):
        g = validate_grid([0.0, 0.5, 1.0])
        assert g.shape == (3,)


class TestCholesky:
    def test_zero_column_and_shape(self):
        ens = sample_cholesky(0.5, [0.0, 0.5, 1.0], 7, seed=42)
        assert ens.paths.shape == (7, 3)
        assert np.all(ens.paths[:, 0] == 0.0)
        assert ens.method == "cholesky"

    def test_determinism(self):
        a = sample_cholesky(0.5, [0.0, 0.5, 1.0], 2, seed=42)
        b = sample_cholesky(0.5, [0.0, 0.5, 1.0], 2, seed=42)
        assert np.array_equal(a.paths, b.paths)

    def test_row_reproducibility(self):
        # row i depends only on (master_seed, i): a larger ensemble extends a smaller one
        small = sample_cholesky(0.7, [0.0, 1.0, 2.0], 3, seed=9)
        large = sample_cholesky(0.7, [0.0, 1.0, 2.0], 10, seed=9)
        assert np.array_equal(large.paths[:3], small.paths)

    def test_serial_parallel_identical(self):
        serial = sample_cholesky(0.3, [0.0, 0.5, 1.0, 2.0], 40, seed=5)
        parallel = sample_cholesky(0.3, [0.0, 0.5, 1.0, 2.0], 40, seed=5, workers=3)
        assert np.array_equal(serial.paths, parallel.paths)

    def test_marginal_law_single_point(self):
        ens = sample_cholesky(0.5, [0.0, 1.0], 4000, seed=11)
        vals = ens.paths[:, 1]
        stat = stats.kstest(vals, "norm").pvalue
        assert stat > 1e-3

    def test_no_zero_in_grid(self):
        ens = sample_cholesky(0.5, [0.5, 1.0], 5, seed=1)
        assert ens.paths.shape == (5, 2)

    def test_grid_cap(self):
        with pytest.raises(ValueError):
            sample_cholesky(0.5, np.linspace(0, 1, 2050), 1, seed=1)

    def test_jitter_rescue(self):
        # duplicated time produces a singular covariance; one jitter must rescue it
        lower = _cholesky_factor(0.5, np.array([1.0, 1.0]))
        assert lower.shape == (2, 2)

    def test_brownian_increment_independence_small(self):
        ens = sample_cholesky(0.5, np.linspace(0.0, 2.0, 9), 20000, seed=13)
        inc = np.diff(ens.paths, axis=1)
        corr = np.corrcoef(inc.T)
        off = corr[~np.eye(corr.shape[0], dtype=bool)]
        assert np.max(np.abs(off)) < 4.0 / math.sqrt(20000)


class TestCirculant:
    def test_preconditions(self):
        with pytest.raises(ValueError):
            sample_circulant(0.5, [0.5, 1.0, 1.5], 1, seed=1)  # no 0
        with pytest.raises(ValueError):
            sample_circulant(0.5, [0.0, 0.5, 2.0], 1, seed=1)  # non-uniform

    def test_determinism_and_zero_start(self):
        a = sample_circulant(0.7, np.linspace(0, 1, 17), 5, seed=3)
        b = sample_circulant(0.7, np.linspace(0, 1, 17), 5, seed=3)
        assert np.array_equal(a.paths, b.paths)
        assert np.all(a.paths[:, 0] == 0.0)
        assert a.method == "circulant"

    def test_serial_parallel_identical(self):
        serial = sample_circulant(0.5, np.linspace(0, 1, 9), 30, seed=8)
        parallel = sample_circulant(0.5, np.linspace(0, 1, 9), 30, seed=8, workers=2)
        assert np.array_equal(serial.paths, parallel.paths)

    def test_brownian_increment_variance(self):
        grid = np.linspace(0.0, 1.0, 9)
        d = grid[1] - grid[0]
        ens = sample_circulant(0.5, grid, 20000, seed=21)
        inc = np.diff(ens.paths, axis=1)
        var = inc.var(axis=0)
        se = inc.var(axis=0) * math.sqrt(2.0 / (20000 - 1))
        assert np.all(np.abs(var - d) < 3.5 * se)

    def test_covariance_matches_cholesky_target(self):
        grid = np.linspace(0.0, 2.0, 9)
        for h in (0.3, 0.7):
            ens = sample_circulant(h, grid, 30000, seed=17)
            times, est, se = empirical_cov(ens)
            target = fbm_cov(h, times[:, None], times[None, :])
            assert np.max(np.abs(est - target) / np.maximum(se, 1e-300)) < 4.5


class TestEmpiricalCov:
    def test_close_to_target(self):
        grid = np.array([0.0, 0.5, 1.0, 2.0])
        ens = sample_cholesky(0.5, grid, 20000, seed=2)
        times, est, se = empirical_cov(ens)
        target = fbm_cov(0.5, times[:, None], times[None, :])
        assert np.max(np.abs(est - target) / se) < 4.0

    def test_mean_square_increments(self):
        grid = np.linspace(0.0, 1.0, 6)
        h = 0.7
        ens = sample_cholesky(h, grid, 20000, seed=4)
        inc = np.diff(ens.paths, axis=1)
        msq = (inc ** 2).mean(axis=0)
        target = np.diff(grid) ** (2 * h)
        se = (inc ** 2).std(axis=0) / math.sqrt(ens.n_paths)
        assert np.all(np.abs(msq - target) < 3.5 * se)


class TestEnsembleType:
    def test_invariant_zero_at_origin(self):
        with pytest.raises(ValueError):
            FbmEnsemble(hurst=0.5, grid=np.array([0.0, 1.0]),
                        paths=np.array([[1.0, 2.0]]), master_seed=1, method="cholesky")

    def test_time_lookup(self):
        ens = sample_cholesky(0.5, [0.0, 0.25, 1.0], 2, seed=1)
        assert ens.time_index(0.25) == 1
        with pytest.raises(ValueError):
            ens.time_index(0.3)


class TestCsv:
    def test_round_trip(self, tmp_path):
        ens = sample_cholesky(0.3, [0.0, 0.5, 1.0], 4, seed=10)
        out = tmp_path / "ens.csv"
        write_csv(ens, out)
        first = out.read_text().splitlines()[0]
        assert first == "t,path_0,path_1,path_2,path_3"
        back = read_csv(out, hurst=0.3)
        assert np.array_equal(back.grid, ens.grid)
        assert np.array_equal(back.paths, ens.paths)
        assert back.master_seed is None
        assert back.method == "file"

    def test_bad_header(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("x,y\n1,2\n")
        with pytest.raises(ValueError):
            read_csv(p, hurst=0.5)


class TestSelfSimilarity:
    def test_identity_scale(self):
        ens = sample_cholesky(0.5, [0.0, 1.0], 200, seed=6)
        rows = self_similarity_check(ens, 1.0)
        assert rows == [(1.0, 0.0, 1.0)]

    def test_needs_paths(self):
        ens = sample_cholesky(0.5, [0.0, 1.0], 50, seed=6)
        with pytest.raises(ValueError):
            self_similarity_check(ens, 2.0)

    def test_brownian_quarter_scale(self):
        ens = sample_cholesky(0.5, [0.0, 1.0], 10000, seed=14)
        rows = self_similarity_check(ens, 4.0)
        (t, stat, p), = rows
        assert t == 1.0
        assert p > 1e-3

    def test_h07_half_scale(self):
        ens = sample_cholesky(0.7, [0.0, 0.5], 10000, seed=15)
        rows = self_similarity_check(ens, 2.0)
        (_, _, p), = rows
        assert p > 1e-3
