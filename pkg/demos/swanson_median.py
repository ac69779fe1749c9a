"""Scaled sample medians of Brownian ensembles and their Gaussian limit.

The median of n independent Brownian motions at time t, scaled by sqrt(n),
converges to a centered Gaussian process X with

    Cov(X(t1), X(t2)) = sqrt(t1 t2) * arcsin(min(t1,t2) / sqrt(t1 t2)),

so Var X(1) = pi/2 and Cov(X(1), X(4)) = pi/3.  This script watches the
empirical covariance walk toward those values as the replicate count grows.
"""

import math

import numpy as np

from proclab._streams import substream_seed
from proclab.empirical import median_process
from proclab.fbm import sample_circulant
from proclab.marginals import swanson_kernel

GRID = np.linspace(0.0, 4.0, 129)
N_PATHS = 201  # odd, so the median is a single order statistic
SEED = 42

print(f"{'R':>6} {'cov(1,1)':>10} {'cov(1,4)':>10} {'cov(2,2)':>10}")
print(f"{'limit':>6} {swanson_kernel(1,1):>10.4f} {swanson_kernel(1,4):>10.4f} {swanson_kernel(2,2):>10.4f}")

draws = []
for r in range(800):
    ens = sample_circulant(0.5, GRID, N_PATHS, substream_seed(SEED, r))
    sqn = math.sqrt(N_PATHS)
    draws.append([sqn * median_process(ens, t) for t in (1.0, 2.0, 4.0)])
    if (r + 1) in (50, 200, 800):
        m = np.array(draws)
        print(
            f"{r + 1:>6}"
            f" {np.mean(m[:, 0] * m[:, 0]):>10.4f}"
            f" {np.mean(m[:, 0] * m[:, 2]):>10.4f}"
            f" {np.mean(m[:, 1] * m[:, 1]):>10.4f}"
        )

# the same protocol, at reporting scale, is one command:
#   proclab swanson --out swanson_report.csv
