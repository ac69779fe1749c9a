"""Scalar and bivariate Gaussian numerics.

Everything downstream (marginal laws, limit covariances, bracket widths)
reduces to the four callables in this module, so their accuracy budgets
are deliberately tight:

* ``std_normal_cdf``      absolute error ~1e-15 (complementary error function),
* ``std_normal_quantile`` relative error <=1e-9, cdf round-trip <=1e-12
  (rational initial guess plus one Newton step),
* ``bvn_cdf``             absolute error <=1e-7 (Drezner-Wesolowsky /
  Genz quadrature, two-branch),
* ``orthant_negative``    closed arcsine form, exact up to rounding.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as _special

__all__ = [
    "std_normal_cdf",
    "std_normal_pdf",
    "std_normal_quantile",
    "bvn_cdf",
    "orthant_negative",
    "normal_upper_tail_bound",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def std_normal_cdf(z):
    """Standard normal CDF. Scalars in, scalar out; arrays in, array out.

    Non-finite input is a domain error: callers that want the +/-inf
    saturation semantics get them from the marginal-law layer, not here.
    """
    arr = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("std_normal_cdf: argument must be finite")
    out = _special.ndtr(arr)
    if arr.ndim == 0:
        return float(out)
    return out


def std_normal_pdf(z):
    """Standard normal density; underflows to 0.0 silently in far tails."""
    arr = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("std_normal_pdf: argument must be finite")
    out = np.exp(-0.5 * arr * arr) / _SQRT_2PI
    if arr.ndim == 0:
        return float(out)
    return out


# Rational approximation coefficients (central region + tails) for the
# inverse normal CDF.  Raw accuracy is ~1.2e-9 relative; the Newton step
# below pushes the round-trip error to ~1e-15.
_QA = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
       1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_QB = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
       6.680131188771972e+01, -1.328068155288572e+01)
_QC = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
       -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_QD = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
       3.754408661907416e+00)
_Q_LOW = 0.02425


def _quantile_raw(p: float) -> float:
    if p < _Q_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        return ((((((_QC[0] * q + _QC[1]) * q + _QC[2]) * q + _QC[3]) * q + _QC[4]) * q + _QC[5])
                / ((((_QD[0] * q + _QD[1]) * q + _QD[2]) * q + _QD[3]) * q + 1.0))
    q = p - 0.5
    r = q * q
    return ((((((_QA[0] * r + _QA[1]) * r + _QA[2]) * r + _QA[3]) * r + _QA[4]) * r + _QA[5]) * q
            / (((((_QB[0] * r + _QB[1]) * r + _QB[2]) * r + _QB[3]) * r + _QB[4]) * r + 1.0))


def std_normal_quantile(p: float) -> float:
    """Inverse standard normal CDF on (0, 1).

    Upper-tail arguments are routed through symmetry so that relative
    accuracy is preserved on both sides.
    """
    p = float(p)
    if math.isnan(p) or p <= 0.0 or p >= 1.0:
        raise ValueError("std_normal_quantile: argument must lie in (0, 1)")
    if p == 0.5:
        return 0.0
    if p > 0.5:
        return -std_normal_quantile(1.0 - p)
    x = _quantile_raw(p)
    # One Newton step against the high-accuracy cdf/pdf pair.
    err = std_normal_cdf(x) - p
    x -= err / std_normal_pdf(x)
    return x


def normal_upper_tail_bound(z: float) -> float:
    """Mills-ratio style tail bound: P{Z >= z} <= phi(z)/z for z > 0."""
    z = float(z)
    if not z > 0.0:
        raise ValueError("normal_upper_tail_bound: argument must be positive")
    return std_normal_pdf(z) / z


def orthant_negative(rho: float) -> float:
    """P{Z1 <= 0, Z2 <= 0} for standard normals with correlation rho."""
    rho = float(rho)
    if math.isnan(rho) or abs(rho) > 1.0:
        raise ValueError("orthant_negative: correlation must lie in [-1, 1]")
    return 0.25 + math.asin(rho) / (2.0 * math.pi)


# Gauss-Legendre half-nodes and weights used by the bivariate quadrature;
# the rule order grows with |rho|.
_GL_W = (
    (0.1713244923791704, 0.3607615730481386, 0.4679139345726910),
    (0.04717533638651183, 0.1069393259953184, 0.1600783285433462,
     0.2031674267230659, 0.2334925365383548, 0.2491470458134028),
    (0.01761400713915212, 0.04060142980038694, 0.06267204833410907,
     0.08327674157670475, 0.1019301198172404, 0.1181945319615184,
     0.1316886384491766, 0.1420961093183820, 0.1491729864726037,
     0.1527533871307258),
)
_GL_X = (
    (0.9324695142031521, 0.6612093864662645, 0.2386191860831969),
    (0.9815606342467192, 0.9041172563704749, 0.7699026741943047,
     0.5873179542866175, 0.3678314989981802, 0.1252334085114689),
    (0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
     0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
     0.5108670019508271, 0.3737060887154195, 0.2277858511416451,
     0.07652652113349734),
)


def _bvn_upper(dh: float, dk: float, r: float) -> float:
    """P{X > dh, Y > dk} for standard bivariate normal with correlation r.

    Two-branch quadrature: a transformed Gauss-Legendre rule on asin(r)
    for |r| <= 0.925, and the high-correlation expansion otherwise.
    """
    if abs(r) < 0.3:
        ng = 0
    elif abs(r) < 0.75:
        ng = 1
    else:
        ng = 2
    w = _GL_W[ng]
    x = _GL_X[ng]

    h = dh
    k = dk
    hk = h * k
    bvn = 0.0
    if abs(r) < 0.925:
        hs = (h * h + k * k) / 2.0
        asr = math.asin(r)
        for wi, xi in zip(w, x):
            for sgn in (-1.0, 1.0):
                sn = math.sin(asr * (1.0 + sgn * xi) / 2.0)
                bvn += wi * math.exp((sn * hk - hs) / (1.0 - sn * sn))
        bvn = bvn * asr / (4.0 * math.pi)
        bvn += std_normal_cdf(-h) * std_normal_cdf(-k)
        return max(0.0, min(1.0, bvn))

    if r < 0.0:
        k = -k
        hk = -hk
    if abs(r) < 1.0:
        ass = (1.0 - r) * (1.0 + r)
        a = math.sqrt(ass)
        bs = (h - k) ** 2
        c = (4.0 - hk) / 8.0
        d = (12.0 - hk) / 16.0
        asr = -(bs / ass + hk) / 2.0
        if asr > -100.0:
            bvn = a * math.exp(asr) * (1.0 - c * (bs - ass) * (1.0 - d * bs / 5.0) / 3.0
                                       + c * d * ass * ass / 5.0)
        if -hk < 100.0:
            b = math.sqrt(bs)
            bvn -= (math.exp(-hk / 2.0) * _SQRT_2PI * std_normal_cdf(-b / a) * b
                    * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0))
        a /= 2.0
        for wi, xi in zip(w, x):
            for sgn in (-1.0, 1.0):
                xs = (a * (1.0 + sgn * xi)) ** 2
                rs = math.sqrt(1.0 - xs)
                asr1 = -(bs / xs + hk) / 2.0
                if asr1 > -100.0:
                    sp = 1.0 + c * xs * (1.0 + d * xs)
                    ep = math.exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs
                    bvn += a * wi * math.exp(asr1) * (ep - sp)
        bvn = -bvn / (2.0 * math.pi)
    if r > 0.0:
        bvn += std_normal_cdf(-max(h, k))
    else:
        bvn = -bvn
        if k > h:
            bvn += std_normal_cdf(k) - std_normal_cdf(h)
    return max(0.0, min(1.0, bvn))


def bvn_cdf(x: float, y: float, rho: float) -> float:
    """P{X <= x, Y <= y} for standard bivariate normal with correlation rho.

    +/-inf arguments are accepted and reduce to marginals; |rho| within
    1e-12 of 1 is routed to the degenerate closed forms.
    """
    rho = float(rho)
    x = float(x)
    y = float(y)
    if math.isnan(x) or math.isnan(y) or math.isnan(rho) or abs(rho) > 1.0:
        raise ValueError("bvn_cdf: arguments must be non-NaN with |rho| <= 1")
    if x == -math.inf or y == -math.inf:
        return 0.0
    if x == math.inf and y == math.inf:
        return 1.0
    if x == math.inf:
        return std_normal_cdf(y)
    if y == math.inf:
        return std_normal_cdf(x)
    if rho >= 1.0 - 1e-12:
        return std_normal_cdf(min(x, y))
    if rho <= -1.0 + 1e-12:
        return max(0.0, std_normal_cdf(x) + std_normal_cdf(y) - 1.0)
    return _bvn_upper(-x, -y, rho)
