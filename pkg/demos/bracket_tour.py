"""A walk through one bracket family and its entropy bookkeeping.

Indicator functions x -> 1{g(t) <= x}, restricted to paths g in a Holder
modulus class C(K), admit finite families of sandwich pairs [l, v] with
L2 width at most u.  The construction tiles (time cells) x (level cells);
this script builds one family, compares its size against the closed-form
entropy bounds, and checks the sandwich property on sampled paths.
"""

import math

import numpy as np

from proclab.brackets import (
    ModulusParams,
    bracket_counts,
    build_brackets,
    entropy_bound_1,
    entropy_bound_2,
    family_from_grid,
    verify_covering,
    verify_widths,
)
from proclab.fbm import sample_circulant

P = ModulusParams(h=0.5, gamma=0.05, u=0.05, k_const=math.e, t_max=2.0)

k, m = bracket_counts(P)
fam = build_brackets(P)
print(f"time cells k = {k}, one-sided levels m = {m}")
print(f"total cells  = {fam.total_cells}  (log = {math.log(fam.total_cells):.2f})")
print(f"entropy bound I  (log count): {math.log(entropy_bound_1(P)):.2f}")
print(f"entropy bound II (log count): {math.log(entropy_bound_2(P)):.2f}")

# widths are analytic: every cell's L2 diameter must clear u^2
wr = verify_widths(fam, P)
print(f"\nmax cell width^2 = {wr.max_width_sq:.6f}  vs u^2 = {P.u**2:.6f}  ok={wr.ok}")

# covering is statistical: probe member paths at random (t, x)
grid = np.linspace(0.0, 2.0, 513)
ens = sample_circulant(0.5, grid, 800, 99)
gfam = family_from_grid(P, grid, stride=2)
cov = verify_covering(gfam, P, ens, probes=5000)
print(f"member paths {cov.n_members}/{ens.n_paths}, violations {cov.n_violations}")

# halving the bracket shifts breaks the sandwich, as it should
broken = verify_covering(gfam.mutated(0.5), P, ens, probes=20000)
print(f"halved shifts: violations {broken.n_violations} (construction is not slack)")
