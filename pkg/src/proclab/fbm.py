"""Exact fractional Brownian motion ensembles on a time grid.

Two samplers with identical distributional contracts: a Cholesky
factorization of the grid covariance (any grid, cubic cost, capped at
2048 points) and a circulant embedding of fractional Gaussian noise
(uniform grids from 0, N log N cost).  Both honor the per-path seeding
contract from ``_streams``: row i of an ensemble depends only on
(master_seed, i), so serial and parallel generation are byte-identical.
"""

from __future__ import annotations

import dataclasses
import math
import re
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from scipy import linalg as _linalg
from scipy import stats as _stats

from ._streams import substream_rng
from .errors import FactorizationError

__all__ = [
    "FbmEnsemble",
    "fbm_cov",
    "validate_grid",
    "sample_cholesky",
    "sample_circulant",
    "empirical_cov",
    "self_similarity_check",
    "write_csv",
    "read_csv",
]

MAX_CHOLESKY_GRID = 2048
_EIG_CLIP_TOL = 1e-9
# substream namespace for the comparison ensemble of self_similarity_check
_SELF_SIM_TAG = 0x5353494D


def fbm_cov(h: float, s, t):
    """Covariance (|s|^{2H} + |t|^{2H} - |s-t|^{2H}) / 2 of fBM with index h.

    Accepts scalars or arrays in (s, t); negative times are a domain error.
    """
    _check_hurst(h)
    s_arr = np.asarray(s, dtype=float)
    t_arr = np.asarray(t, dtype=float)
    if np.any(s_arr < 0.0) or np.any(t_arr < 0.0):
        raise ValueError("fbm_cov: times must be nonnegative")
    two_h = 2.0 * h
    out = 0.5 * (s_arr ** two_h + t_arr ** two_h - np.abs(s_arr - t_arr) ** two_h)
    if out.ndim == 0:
        return float(out)
    return out


def _check_hurst(h: float) -> None:
    if not (isinstance(h, (int, float)) and 0.0 < h < 1.0):
        raise ValueError(f"hurst index must lie in (0, 1), got {h!r}")


def validate_grid(grid) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError("time grid must be a 1-d array with at least 2 points")
    if not np.all(np.isfinite(grid)) or grid[0] < 0.0:
        raise ValueError("time grid must be finite and nonnegative")
    if not np.all(np.diff(grid) > 0.0):
        raise ValueError("time grid must be strictly increasing")
    return grid


@dataclasses.dataclass(frozen=True)
class FbmEnsemble:
    """n i.i.d. fBM paths evaluated on a common grid.

    ``paths`` has shape (n, len(grid)).  ``master_seed`` is None for
    ensembles restored from CSV (seeds are not persisted).
    """

    hurst: float
    grid: np.ndarray
    paths: np.ndarray
    master_seed: int | None
    method: str

    def __post_init__(self):
        validate_grid(self.grid)
        if self.paths.ndim != 2 or self.paths.shape[1] != self.grid.size:
            raise ValueError("paths must have shape (n, len(grid))")
        if self.paths.shape[0] < 1:
            raise ValueError("ensemble needs at least one path")
        if self.grid[0] == 0.0 and np.any(self.paths[:, 0] != 0.0):
            raise ValueError("paths must start at 0 when the grid contains t=0")

    @property
    def n_paths(self) -> int:
        return self.paths.shape[0]

    def time_index(self, t: float) -> int:
        """Index of grid time t; off-grid times are a precondition error."""
        idx = int(np.searchsorted(self.grid, t))
        for j in (idx - 1, idx, idx + 1):
            if 0 <= j < self.grid.size and math.isclose(self.grid[j], t, rel_tol=1e-12, abs_tol=1e-12):
                return j
        raise ValueError(f"time {t!r} is not on the ensemble grid")

    def values_at(self, t: float) -> np.ndarray:
        return self.paths[:, self.time_index(t)]


def _cholesky_factor(h: float, pos_times: np.ndarray, jitter: float = 1e-12) -> np.ndarray:
    cov = fbm_cov(h, pos_times[:, None], pos_times[None, :])
    cov = 0.5 * (cov + cov.T)
    try:
        return _linalg.cholesky(cov, lower=True)
    except _linalg.LinAlgError:
        bumped = cov + jitter * float(np.max(np.diag(cov))) * np.eye(cov.shape[0])
        try:
            return _linalg.cholesky(bumped, lower=True)
        except _linalg.LinAlgError as exc:
            pivot = _pivot_from_message(str(exc))
            raise FactorizationError(
                f"fBM covariance not positive definite after jitter retry "
                f"(failing pivot {pivot}, {len(pos_times)} grid points)"
            ) from exc


def _pivot_from_message(msg: str) -> str:
    m = re.search(r"(\d+)-th leading minor", msg)
    return m.group(1) if m else "unknown"


def _rows_cholesky(h, grid, lower, indices, master_seed):
    m = lower.shape[0]
    block = np.empty((len(indices), m))
    z = np.empty(m)
    for out_row, i in enumerate(indices):
        rng = substream_rng(master_seed, i)
        z[:] = rng.standard_normal(m)
        block[out_row] = lower @ z
    return block


def sample_cholesky(h: float, grid, n_paths: int, seed: int, *, workers: int = 1) -> FbmEnsemble:
    """Exact fBM sample via Cholesky factorization of the grid covariance.

    t=0 (if present) is excluded from the factorization and emitted as an
    exact zero column.  Grids larger than 2048 points are refused.
    """
    grid = validate_grid(grid)
    _check_hurst(h)
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    if grid.size > MAX_CHOLESKY_GRID:
        raise ValueError(f"cholesky sampler refuses grids beyond {MAX_CHOLESKY_GRID} points")
    has_zero = grid[0] == 0.0
    pos = grid[1:] if has_zero else grid
    lower = _cholesky_factor(h, pos)
    body = _run_rows(_rows_cholesky, (h, grid, lower), n_paths, seed, workers)
    paths = np.hstack([np.zeros((n_paths, 1)), body]) if has_zero else body
    return FbmEnsemble(hurst=h, grid=grid, paths=paths, master_seed=int(seed), method="cholesky")


def _circulant_eigs(h: float, n_steps: int, step: float) -> np.ndarray:
    j = np.arange(n_steps + 1, dtype=float)
    two_h = 2.0 * h
    acov = 0.5 * step ** two_h * ((j + 1.0) ** two_h + np.abs(j - 1.0) ** two_h - 2.0 * j ** two_h)
    embed = np.concatenate([acov, acov[-2:0:-1]])
    return np.fft.fft(embed).real


def _rows_circulant(h, grid, eigs, indices, master_seed):
    n_steps = grid.size - 1
    m = 2 * n_steps
    scale_half = np.sqrt(eigs / m)
    scale_pair = np.sqrt(eigs / (2.0 * m))
    block = np.empty((len(indices), grid.size))
    for out_row, i in enumerate(indices):
        rng = substream_rng(master_seed, i)
        z = rng.standard_normal(m)
        a = np.empty(m, dtype=complex)
        # draw order: z[0] -> frequency 0, z[1] -> Nyquist, then (re, im) pairs
        a[0] = scale_half[0] * z[0]
        a[n_steps] = scale_half[n_steps] * z[1]
        re = z[2::2]
        im = z[3::2]
        a[1:n_steps] = scale_pair[1:n_steps] * (re + 1j * im)
        a[n_steps + 1:] = np.conj(a[1:n_steps][::-1])
        fgn = np.fft.fft(a).real[:n_steps]
        block[out_row, 0] = 0.0
        np.cumsum(fgn, out=block[out_row, 1:])
    return block


def sample_circulant(h: float, grid, n_paths: int, seed: int, *, workers: int = 1) -> FbmEnsemble:
    """Exact fBM sample via circulant embedding of fractional Gaussian noise.

    Requires a uniform grid starting at 0.  Embedding eigenvalues in
    [-1e-9, 0) are clipped to 0; anything below that triggers the
    Cholesky fallback (same distributional contract, different cost).
    """
    grid = validate_grid(grid)
    _check_hurst(h)
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    if grid[0] != 0.0:
        raise ValueError("circulant sampler requires a grid starting at 0")
    steps = np.diff(grid)
    step = float(steps[0])
    if not np.allclose(steps, step, rtol=1e-9, atol=0.0):
        raise ValueError("circulant sampler requires a uniform grid")
    eigs = _circulant_eigs(h, grid.size - 1, step)
    if float(eigs.min()) < -_EIG_CLIP_TOL:
        return sample_cholesky(h, grid, n_paths, seed, workers=workers)
    eigs = np.where((eigs < 0.0) & (eigs >= -_EIG_CLIP_TOL), 0.0, eigs)
    paths = _run_rows(_rows_circulant, (h, grid, eigs), n_paths, seed, workers)
    return FbmEnsemble(hurst=h, grid=grid, paths=paths, master_seed=int(seed), method="circulant")


def _run_rows(row_fn, fixed_args, n_paths, seed, workers):
    indices = np.arange(n_paths)
    if workers <= 1:
        return row_fn(*fixed_args, indices, seed)
    chunks = np.array_split(indices, workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(row_fn, *fixed_args, chunk, seed) for chunk in chunks if chunk.size]
        blocks = [f.result() for f in futures]
    return np.vstack(blocks)


def empirical_cov(ens: FbmEnsemble) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Uncentered empirical covariance over positive grid times.

    Returns (times, estimate, standard_error); the mean is known to be 0,
    so no centering is applied and the SE comes from the second moment of
    the per-path products.
    """
    mask = ens.grid > 0.0
    x = ens.paths[:, mask]
    n = x.shape[0]
    est = x.T @ x / n
    sq = x * x
    second = sq.T @ sq / n
    var = np.maximum(second - est * est, 0.0)
    se = np.sqrt(var / n)
    return ens.grid[mask], est, se


def self_similarity_check(ens: FbmEnsemble, a: float):
    """Two-sample KS comparison of B(a t)/a^H against B(t) at matched times.

    For a == 1 the ensemble is compared with itself (statistic exactly 0).
    Otherwise an independent comparison ensemble is drawn on the scaled
    grid with a seed derived from the ensemble's master seed.
    """
    if not (isinstance(a, (int, float)) and a > 0.0):
        raise ValueError("scale a must be positive")
    if ens.n_paths < 100:
        raise ValueError("self_similarity_check needs at least 100 paths")
    times = ens.grid[ens.grid > 0.0]
    if times.size == 0:
        raise ValueError("ensemble grid has no positive times")
    if a == 1.0:
        scaled = ens
    else:
        if ens.master_seed is None:
            raise ValueError("ensemble has no master seed to derive the comparison sample")
        from ._streams import substream_seed

        comp_seed = substream_seed(ens.master_seed, _SELF_SIM_TAG)
        comp_grid = np.concatenate(([0.0], a * times))
        scaled = sample_cholesky(ens.hurst, comp_grid, ens.n_paths, comp_seed)
    rows = []
    for t in times:
        base = ens.values_at(t)
        other = scaled.values_at(a * t) / a ** ens.hurst
        if scaled is ens:
            stat, pvalue = 0.0, 1.0
        else:
            res = _stats.ks_2samp(other, base, method="asymp")
            stat, pvalue = float(res.statistic), float(res.pvalue)
        rows.append((float(t), stat, pvalue))
    return rows


def write_csv(ens: FbmEnsemble, path) -> None:
    """Persist an ensemble as `t,path_0,...,path_{n-1}` rows.

    Values carry 17 significant digits; seeds are not persisted.
    """
    n = ens.n_paths
    header = "t," + ",".join(f"path_{i}" for i in range(n))
    with open(path, "w", encoding="ascii") as fh:
        fh.write(header + "\n")
        for row_idx in range(ens.grid.size):
            vals = ens.paths[:, row_idx]
            fh.write("%.17g," % ens.grid[row_idx] + ",".join("%.17g" % v for v in vals) + "\n")


def read_csv(path, hurst: float) -> FbmEnsemble:
    """Restore an ensemble written by write_csv; the caller supplies h."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip().split(",")
        if not header or header[0] != "t" or any(not c.startswith("path_") for c in header[1:]):
            raise ValueError("not an ensemble CSV: bad header")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    grid = data[:, 0]
    paths = data[:, 1:].T.copy()
    return FbmEnsemble(hurst=hurst, grid=grid, paths=paths, master_seed=None, method="file")
