"""Samplers for the limiting Gaussian fields on finite point sets.

The limit of the time-dependent empirical process is a centered Gaussian
field G(t, x); this module draws exact joint samples of t^kappa G(t, x)
at a handful of space-time points by factoring the kernel matrix from
``marginals``, plus the scaled-median limit X(t) = sqrt(2 pi t) G(t, 0)
at h = 1/2. Kernel matrices on clustered point sets are numerically
rank-deficient, hence the escalating-nugget factorization policy.

Degenerate coordinates (t = 0 under a positive weight, or x at +-inf)
have variance exactly zero; they are emitted as exact-zero sample columns
and never enter the factorization, which would otherwise be singular by
construction.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from scipy import linalg as _linalg

from ._streams import substream_rng
from .errors import FactorizationError
from .marginals import swanson_kernel, weighted_cov_kernel

__all__ = [
    "FieldSpec",
    "MAX_FIELD_POINTS",
    "build_cov_matrix",
    "sample_field",
    "sample_swanson",
    "write_samples_csv",
    "read_samples_csv",
]

MAX_FIELD_POINTS = 4096

# nugget escalation: spec.nugget, then x10 per retry, never past this
_NUGGET_CEILING = 1e-6
_NUGGET_FLOOR = 1e-10


@dataclasses.dataclass(frozen=True)
class FieldSpec:
    """A finite set of space-time points plus the field parameters.

    points are (t, x) pairs; x may be +-inf (a constant indicator, hence
    a zero-variance coordinate). t = 0 is allowed only under kappa > 0,
    where the weight collapses the coordinate to the constant 0.
    """

    hurst: float
    points: tuple
    kappa: float = 0.0
    nugget: float = 1e-10

    def __post_init__(self):
        if not 0.0 < self.hurst < 1.0:
            raise ValueError(f"hurst index must lie in (0, 1), got {self.hurst!r}")
        if self.kappa < 0.0:
            raise ValueError("kappa must be nonnegative")
        if self.nugget < 0.0:
            raise ValueError("nugget must be nonnegative")
        pts = tuple((float(t), float(x)) for t, x in self.points)
        if not pts:
            raise ValueError("need at least one space-time point")
        if len(set(pts)) != len(pts):
            raise ValueError("space-time points must be distinct")
        for t, x in pts:
            if not math.isfinite(t) or t < 0.0:
                raise ValueError(f"times must be finite and nonnegative, got {t!r}")
            if math.isnan(x):
                raise ValueError("x coordinates must be non-NaN")
            if t == 0.0 and self.kappa == 0.0:
                raise ValueError("t = 0 needs kappa > 0 (unweighted field degenerates there)")
        object.__setattr__(self, "points", pts)

    @property
    def n_points(self) -> int:
        return len(self.points)


def build_cov_matrix(spec: FieldSpec) -> np.ndarray:
    """Kernel matrix M[a, b] = weighted_cov_kernel(points[a], points[b]).

    Upper triangle is computed and mirrored, so the result is exactly
    symmetric. Diagonal entries lie in [0, max_t t^{2 kappa} / 4];
    degenerate points contribute exact-zero rows and columns.
    """
    if spec.n_points > MAX_FIELD_POINTS:
        raise ValueError(f"field point sets are capped at {MAX_FIELD_POINTS} points")
    n = spec.n_points
    m = np.empty((n, n))
    for a in range(n):
        for b in range(a, n):
            m[a, b] = weighted_cov_kernel(spec.hurst, spec.kappa, spec.points[a], spec.points[b])
            m[b, a] = m[a, b]
    return m


def _factor_with_nugget(active: np.ndarray, nugget: float):
    """Cholesky of active + nugget*I, escalating the nugget tenfold.

    Returns (lower, nugget_used). Kernel matrices here are PSD up to
    roundoff, so the first rung almost always succeeds; the ladder exists
    for clustered points whose kernel rows are nearly parallel.
    """
    tried = []
    level = nugget
    while True:
        tried.append(level)
        bumped = active + level * np.eye(active.shape[0]) if level > 0.0 else active
        try:
            return _linalg.cholesky(bumped, lower=True), level
        except _linalg.LinAlgError:
            if level >= _NUGGET_CEILING:
                raise FactorizationError(
                    "field covariance not positive definite; nuggets tried: "
                    + ", ".join(f"{v:.1e}" for v in tried)
                ) from None
            level = _NUGGET_FLOOR if level == 0.0 else level * 10.0


def _rows_field(lower, indices, master_seed):
    k = lower.shape[0]
    block = np.empty((len(indices), k))
    for out_row, i in enumerate(indices):
        rng = substream_rng(master_seed, i)
        block[out_row] = lower @ rng.standard_normal(k)
    return block


def sample_field(spec: FieldSpec, n_samples: int, seed: int, *, workers: int = 1) -> np.ndarray:
    """Draw n_samples i.i.d. mean-zero Gaussian vectors with the kernel covariance.

    Row i depends only on (seed, i), so serial and parallel runs agree
    byte for byte. Degenerate coordinates come back as exact zeros.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    m = build_cov_matrix(spec)
    diag = np.diag(m)
    live = diag > 0.0
    out = np.zeros((n_samples, spec.n_points))
    if not np.any(live):
        return out
    active = m[np.ix_(live, live)]
    lower, _ = _factor_with_nugget(active, spec.nugget)
    indices = np.arange(n_samples)
    if workers <= 1:
        body = _rows_field(lower, indices, int(seed))
    else:
        chunks = np.array_split(indices, workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_rows_field, lower, chunk, int(seed)) for chunk in chunks if chunk.size
            ]
            body = np.vstack([f.result() for f in futures])
    out[:, live] = body
    return out


def sample_swanson(t_points, n_samples: int, seed: int, *, workers: int = 1) -> np.ndarray:
    """Samples of the scaled-median limit X(t) = sqrt(2 pi t) G(t, 0) at h = 1/2.

    Columns follow t_points; t = 0 gives the exact-zero coordinate. The
    column covariance targets swanson_kernel, e.g. Var X(1) = pi/2.
    """
    ts = [float(t) for t in t_points]
    if not ts:
        raise ValueError("need at least one time")
    if len(set(ts)) != len(ts):
        raise ValueError("times must be distinct")
    for t in ts:
        if not math.isfinite(t) or t < 0.0:
            raise ValueError(f"times must be finite and nonnegative, got {t!r}")
    live = [t for t in ts if t > 0.0]
    out = np.zeros((int(n_samples), len(ts)))
    if live:
        spec = FieldSpec(hurst=0.5, points=tuple((t, 0.0) for t in live))
        body = sample_field(spec, n_samples, seed, workers=workers)
        scale = np.sqrt(2.0 * math.pi * np.asarray(live))
        cols = [i for i, t in enumerate(ts) if t > 0.0]
        out[:, cols] = body * scale
    return out


def _point_label(t: float, x: float) -> str:
    return f"{t!r}@{x!r}"


def write_samples_csv(samples: np.ndarray, points, path) -> None:
    """Persist field samples as `sample,t@x,...` rows, 17 significant digits.

    Same layout as the ensemble CSV, with point labels in place of path
    numbers and the sample index in place of the time column.
    """
    samples = np.asarray(samples)
    if samples.ndim != 2 or samples.shape[1] != len(points):
        raise ValueError("samples must have one column per point")
    header = "sample," + ",".join(_point_label(t, x) for t, x in points)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(header + "\n")
        for i in range(samples.shape[0]):
            fh.write("%d," % i + ",".join("%.17g" % v for v in samples[i]) + "\n")


def read_samples_csv(path):
    """Restore (samples, points) written by write_samples_csv."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip().split(",")
        if not header or header[0] != "sample" or any("@" not in c for c in header[1:]):
            raise ValueError("not a field-sample CSV: bad header")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    points = tuple(
        (float(c.split("@", 1)[0]), float(c.split("@", 1)[1])) for c in header[1:]
    )
    return data[:, 1:].copy(), points
