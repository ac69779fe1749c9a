"""proclab: a numerical laboratory for time-dependent empirical and
quantile processes built over fractional Brownian motion ensembles.

Layout:

* ``gaussian``    scalar/bivariate normal numerics
* ``fbm``         exact fBM ensemble samplers and persistence
* ``marginals``   time-indexed marginal laws F(t, x) and quantiles
* ``empirical``   empirical process, quantile process, sup statistics
* ``brackets``    modulus classes and bracketing-number machinery
* ``rates``       closed-form rate and exponent ledger
* ``limitfield``  Gaussian limit field samplers
* ``experiments`` reproducible experiment runners and reports
* ``cli``         the ``proclab`` command line front end
"""

__version__ = "0.1.0"

__all__ = [
    "gaussian",
    "fbm",
    "marginals",
    "empirical",
    "brackets",
    "rates",
    "limitfield",
    "experiments",
    "cli",
]
