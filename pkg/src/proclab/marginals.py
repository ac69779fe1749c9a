"""Time-indexed marginal laws and limit covariance kernels.

For an fBM with Hurst index h, the value at time t is N(0, t^{2H}), so
F(t, x) = Phi(x / t^H) and the alpha-quantile is tau_alpha(t) = t^H z_alpha.
The limit field G of the time-dependent empirical process has covariance

    E G(s,x) G(t,y) = P{B(s)<=x, B(t)<=y} - F(s,x) F(t,y),

which reduces to the standardized bivariate normal; every kernel here is
built from that reduction so all Monte Carlo tests downstream have
analytic targets.
"""

from __future__ import annotations

import math

import numpy as np

from .fbm import fbm_cov
from .gaussian import bvn_cdf, orthant_negative, std_normal_cdf, std_normal_pdf, std_normal_quantile

__all__ = [
    "marginal_cdf",
    "marginal_pdf",
    "true_quantile",
    "density_quantile",
    "pair_correlation",
    "limit_cov_kernel",
    "weighted_cov_kernel",
    "swanson_kernel",
    "indicator_dp",
    "f_h",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _check_hurst(h: float) -> None:
    if not (isinstance(h, (int, float)) and 0.0 < h < 1.0):
        raise ValueError(f"hurst index must lie in (0, 1), got {h!r}")


def _check_level(alpha: float) -> None:
    if not (isinstance(alpha, (int, float)) and 0.0 < alpha < 1.0):
        raise ValueError(f"quantile level must lie in (0, 1), got {alpha!r}")


def marginal_cdf(h: float, t: float, x):
    """F(t, x) = Phi(x / t^H); total in x, including +-inf.

    At t=0 the law is a point mass at 0 and the cdf is the step 1{x >= 0}.
    """
    _check_hurst(h)
    if t < 0.0:
        raise ValueError("marginal_cdf: time must be nonnegative")
    x_arr = np.asarray(x, dtype=float)
    scalar = x_arr.ndim == 0
    flat = np.atleast_1d(x_arr).astype(float)
    if np.any(np.isnan(flat)):
        raise ValueError("marginal_cdf: NaN argument")
    if t == 0.0:
        out = (flat >= 0.0).astype(float)
    else:
        scale = t ** h
        out = np.empty_like(flat)
        finite = np.isfinite(flat)
        if np.any(finite):
            out[finite] = std_normal_cdf(flat[finite] / scale)
        out[flat == np.inf] = 1.0
        out[flat == -np.inf] = 0.0
    return float(out[0]) if scalar else out.reshape(x_arr.shape)


def marginal_pdf(h: float, t: float, x):
    """Density of B(t): exp(-x^2 / (2 t^{2H})) / (t^H sqrt(2 pi)); t > 0."""
    _check_hurst(h)
    if not t > 0.0:
        raise ValueError("marginal_pdf: time must be positive")
    scale = t ** h
    x_arr = np.asarray(x, dtype=float)
    out = np.exp(-0.5 * (x_arr / scale) ** 2) / (scale * _SQRT_2PI)
    return float(out) if x_arr.ndim == 0 else out


def true_quantile(h: float, t: float, alpha: float) -> float:
    """tau_alpha(t) = t^H z_alpha; exactly 0 at the median or at t=0."""
    _check_hurst(h)
    _check_level(alpha)
    if t < 0.0:
        raise ValueError("true_quantile: time must be nonnegative")
    if t == 0.0 or alpha == 0.5:
        return 0.0
    return t ** h * std_normal_quantile(alpha)


def density_quantile(h: float, t: float, alpha: float) -> float:
    """f(t, tau_alpha(t)) = exp(-z_alpha^2 / 2) / (t^H sqrt(2 pi)); t > 0."""
    _check_hurst(h)
    _check_level(alpha)
    if not t > 0.0:
        raise ValueError("density_quantile: time must be positive")
    z = std_normal_quantile(alpha)
    return math.exp(-0.5 * z * z) / (t ** h * _SQRT_2PI)


def pair_correlation(h: float, s: float, t: float) -> float:
    """Correlation of (B(s), B(t)), clamped to [-1, 1] with 1e-12 slack."""
    if not (s > 0.0 and t > 0.0):
        raise ValueError("pair_correlation: times must be positive")
    rho = fbm_cov(h, s, t) / (s ** h * t ** h)
    if abs(rho) > 1.0 + 1e-12:
        raise ValueError(f"pair_correlation out of range: {rho!r}")
    return min(1.0, max(-1.0, rho))


def limit_cov_kernel(h: float, p: tuple[float, float], q: tuple[float, float]) -> float:
    """Covariance of the limit field G at space-time points p=(s,x), q=(t,y)."""
    s, x = p
    t, y = q
    if not (s > 0.0 and t > 0.0):
        raise ValueError("limit_cov_kernel: times must be positive")
    _check_hurst(h)
    rho = pair_correlation(h, s, t)
    xs = x / s ** h if math.isfinite(x) else x
    yt = y / t ** h if math.isfinite(y) else y
    joint = bvn_cdf(xs, yt, rho)
    return joint - marginal_cdf(h, s, x) * marginal_cdf(h, t, y)


def weighted_cov_kernel(h: float, kappa: float, p: tuple[float, float], q: tuple[float, float]) -> float:
    """s^kappa t^kappa times limit_cov_kernel; 0 when either time is 0."""
    if kappa < 0.0:
        raise ValueError("weighted_cov_kernel: kappa must be nonnegative")
    s, _ = p
    t, _ = q
    if s < 0.0 or t < 0.0:
        raise ValueError("weighted_cov_kernel: times must be nonnegative")
    if s == 0.0 or t == 0.0:
        return 0.0
    return s ** kappa * t ** kappa * limit_cov_kernel(h, p, q)


def swanson_kernel(t1: float, t2: float) -> float:
    """sqrt(t1 t2) arcsin((t1 ^ t2)/sqrt(t1 t2)): scaled-median limit covariance."""
    if t1 < 0.0 or t2 < 0.0:
        raise ValueError("swanson_kernel: times must be nonnegative")
    if t1 == 0.0 or t2 == 0.0:
        return 0.0
    root = math.sqrt(t1 * t2)
    return root * math.asin(min(t1, t2) / root)


def indicator_dp(h: float, p: tuple[float, float], q: tuple[float, float]) -> float:
    """L2 distance between the indicators 1{B(s)<=x} and 1{B(t)<=y}."""
    s, x = p
    t, y = q
    if not (s > 0.0 and t > 0.0):
        raise ValueError("indicator_dp: times must be positive")
    _check_hurst(h)
    rho = pair_correlation(h, s, t)
    xs = x / s ** h if math.isfinite(x) else x
    yt = y / t ** h if math.isfinite(y) else y
    joint = bvn_cdf(xs, yt, rho)
    gap = marginal_cdf(h, s, x) + marginal_cdf(h, t, y) - 2.0 * joint
    return math.sqrt(max(0.0, gap))


def f_h(h: float, t) -> float:
    """Modulus scale f_H(t) = t^H sqrt(1 v log(1/t)); t > 0."""
    _check_hurst(h)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0.0):
        raise ValueError("f_h: argument must be positive")
    out = t_arr ** h * np.sqrt(np.maximum(1.0, np.log(1.0 / t_arr)))
    return float(out) if t_arr.ndim == 0 else out


def f_h_sup(h: float, d: float) -> float:
    """sup of f_H over (0, d]; equals f_H(d) when f_H is monotone there.

    For H < 1/2 the modulus has a local maximum at exp(-1/(2H)); cell
    shifts built from a gap beyond that point must use the interior value.
    """
    _check_hurst(h)
    if not d > 0.0:
        raise ValueError("f_h_sup: argument must be positive")
    best = f_h(h, d)
    if h < 0.5:
        bump = math.exp(-1.0 / (2.0 * h))
        if d > bump:
            best = max(best, f_h(h, bump))
    return best


def _swanson_orthant_form(t1: float, t2: float) -> float:
    # cross-check helper: 2 pi sqrt(t1 t2) (orthant(rho) - 1/4) at H = 1/2
    rho = pair_correlation(0.5, t1, t2)
    return 2.0 * math.pi * math.sqrt(t1 * t2) * (orthant_negative(rho) - 0.25)
