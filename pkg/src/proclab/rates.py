"""Closed-form exponents, rates and thresholds for the process bounds.

Everything in this module is elementary arithmetic in the Hurst index h;
it exists so each exponent has exactly one definition shared by tests,
experiment runners and the CSV report. The two base quantities

    nu0 = 2 + 2/h,      h0 = 1 + h

drive all the others. There is no symbolic layer: plain double precision,
with the algebraic identities (tau1(0) * (2 + 4 nu0) = 1, tau1(eta*) =
kappa * eta*, ...) asserted numerically at 1e-12 by the test suite.

Multiplicative constants that only set scale, never an exponent (the C in
a_n, c7 in eps_n), are explicit arguments defaulting to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

__all__ = [
    "RateTable",
    "base_exponents",
    "tau1",
    "tau1_prime",
    "eta_star",
    "theorem_rates",
    "corollary_rates",
    "sequence_scales",
    "crossover_index",
    "rate_table",
    "rates_table_text",
    "write_rates_csv",
]


def _check_hurst(h: float) -> None:
    if not (isinstance(h, (int, float)) and 0.0 < h < 1.0):
        raise ValueError(f"hurst index must lie in (0, 1), got {h!r}")


def base_exponents(h: float):
    """Return (nu0, h0, tau2) for Hurst index h.

    tau2 = 3(2 + h)/(10h + 8) + 1/2 is the exponent of the strong
    approximation over the full observation window; it stays above 1/2 and
    decreases toward 1 as h -> 1.
    """
    _check_hurst(h)
    nu0 = 2.0 + 2.0 / h
    h0 = 1.0 + h
    tau2 = 3.0 * (2.0 + h) / (10.0 * h + 8.0) + 0.5
    return nu0, h0, tau2


def tau1(h: float, eta: float = 0.0) -> float:
    """Single-time approximation exponent (1 - 4 h0 eta) / (2 + 4 nu0).

    eta is the polynomial shrink rate of the lower time cutoff gamma_n =
    n^-eta. eta = 0 (fixed cutoff) is allowed; the exponent degenerates to
    zero at eta = 1/(4 h0), so that value and anything above it are
    rejected.
    """
    nu0, h0, _ = base_exponents(h)
    if not 0.0 <= eta < 1.0 / (4.0 * h0):
        raise ValueError(f"eta must lie in [0, 1/(4 h0)) = [0, {1.0 / (4.0 * h0)!r}), got {eta!r}")
    return (1.0 - 4.0 * h0 * eta) / (2.0 + 4.0 * nu0)


def tau1_prime(h: float, kappa: float) -> float:
    """Weighted-window analogue kappa / (4 h0 + kappa (2 + 4 nu0)).

    Increasing in the weight exponent kappa, with horizontal asymptote
    1/(2 + 4 nu0) = tau1(h, 0.0); the weight can never beat the unweighted
    exponent, only approach it.
    """
    nu0, h0, _ = base_exponents(h)
    if not kappa > 0.0:
        raise ValueError(f"kappa must be positive, got {kappa!r}")
    return kappa / (4.0 * h0 + kappa * (2.0 + 4.0 * nu0))


def eta_star(h: float, kappa: float) -> float:
    """The cutoff rate 1 / (4 h0 + kappa (2 + 4 nu0)) balancing tau1 and kappa.

    Unique solution of tau1(h, eta) = kappa * eta; always below 1/(4 h0).
    """
    nu0, h0, _ = base_exponents(h)
    if not kappa > 0.0:
        raise ValueError(f"kappa must be positive, got {kappa!r}")
    return 1.0 / (4.0 * h0 + kappa * (2.0 + 4.0 * nu0))


def _window_rate(t1: float, alpha: float) -> Optional[float]:
    # (alpha t1 - 1/2)/(1 + alpha) on the open window (1/(2 t1), 1/t1);
    # endpoints excluded (the rate is 0 at the left one, negative below).
    if not 1.0 / (2.0 * t1) < alpha < 1.0 / t1:
        return None
    return (alpha * t1 - 0.5) / (1.0 + alpha)


def theorem_rates(h: float, alpha: float, kappa: Optional[float] = None):
    """Polynomial convergence rates (tau_alpha, tau_prime_alpha) at moment order alpha.

    Each rate lives on its own open window of alpha values, (1/(2 tau1(0)),
    1/tau1(0)) for the plain one and the analogue with tau1_prime(kappa)
    for the weighted one; outside its window an entry is reported as None.
    The weighted entry needs kappa and is None when kappa is omitted.
    Raises when alpha falls in no requested window at all.
    """
    if not alpha > 0.0:
        raise ValueError(f"moment order alpha must be positive, got {alpha!r}")
    t_plain = _window_rate(tau1(h, 0.0), alpha)
    t_weighted = None if kappa is None else _window_rate(tau1_prime(h, kappa), alpha)
    if t_plain is None and t_weighted is None:
        raise ValueError(
            f"alpha={alpha!r} lies outside the admissible window(s) at h={h!r}"
            + ("" if kappa is None else f", kappa={kappa!r}")
        )
    return t_plain, t_weighted


def corollary_rates(h: float, delta: float, rho_level: float = 0.05):
    """Return (mu, m_ties) for the quantile band [rho_level, 1 - rho_level].

    mu = h/(4 h0) - delta is the loglog-normalization exponent; it must be
    positive, which caps delta at h/(4 h0). m_ties = 2(ceil(2/h) + 1)
    bounds how far the empirical cdf at its own quantile can sit above the
    level, in units of 1/n.
    """
    _, h0, _ = base_exponents(h)
    if not 0.0 < rho_level < 0.5:
        raise ValueError(f"rho_level must lie in (0, 1/2), got {rho_level!r}")
    cap = h / (4.0 * h0)
    if not 0.0 < delta < cap:
        raise ValueError(f"delta must lie in (0, h/(4 h0)) = (0, {cap!r}), got {delta!r}")
    mu = cap - delta
    m_ties = 2 * (math.ceil(2.0 / h) + 1)
    return mu, m_ties


def _loglog(n: int) -> float:
    return math.log(math.log(n))


def sequence_scales(
    h: float,
    delta: float,
    n: int,
    c_const: float = 1.0,
    gamma_n: float = 1.0,
    c7: float = 1.0,
):
    """Return (a_n, eps_n, bk_rate) at sample size n and cutoff gamma_n.

        a_n     = c_const * (loglog n / n)^(1/(2 delta))
        eps_n   = c7 * gamma_n^(-h/2 - delta) * (loglog n / n)^(1/4)
        bk_rate = n^(-1/4) * gamma_n^(-h/2 - delta) * (loglog n)^(1/4) * (log n)^(1/2)

    a_n is the negligible-scale sequence, eps_n the oscillation envelope,
    bk_rate the error rate of the quantile-process representation. At
    gamma_n = 1 the latter reduces to the classical fixed-time rate
    n^(-1/4) (loglog n)^(1/4) (log n)^(1/2). Requires n >= 16 so that
    loglog n is safely positive.
    """
    _check_hurst(h)
    if not delta > 0.0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    if not (isinstance(n, int) and n >= 16):
        raise ValueError(f"sample size must be an int >= 16, got {n!r}")
    if not 0.0 < gamma_n <= 1.0:
        raise ValueError(f"gamma_n must lie in (0, 1], got {gamma_n!r}")
    lln = _loglog(n)
    a_n = c_const * (lln / n) ** (1.0 / (2.0 * delta))
    g_pow = gamma_n ** (-h / 2.0 - delta)
    eps_n = c7 * g_pow * (lln / n) ** 0.25
    bk = n ** -0.25 * g_pow * lln**0.25 * math.log(n) ** 0.5
    return a_n, eps_n, bk


def crossover_index(h: float, delta: float, eta: float, c_const: float = 1.0) -> int:
    """Smallest n >= 16 with a_n(delta) < n^-eta, for the cutoff gamma_n = n^-eta.

    Past this index the negligible scale really is negligible relative to
    the shrinking cutoff. For delta < h/(4 h0) and eta < 1/(4 h0) the
    ratio a_n / n^-eta is decreasing on n >= 16 (the power gap beats the
    loglog factor), so the first crossing is found by doubling plus
    bisection.
    """
    _, h0, _ = base_exponents(h)
    cap = 1.0 / (4.0 * h0)
    if not 0.0 < delta < h / (4.0 * h0):
        raise ValueError(f"delta must lie in (0, h/(4 h0)), got {delta!r}")
    if not 0.0 < eta < cap:
        raise ValueError(f"eta must lie in (0, 1/(4 h0)) = (0, {cap!r}), got {eta!r}")

    def crossed(n: int) -> bool:
        return sequence_scales(h, delta, n, c_const=c_const)[0] < float(n) ** -eta

    lo = 16
    if crossed(lo):
        return lo
    hi = 32
    while not crossed(hi):
        lo, hi = hi, hi * 2
        if hi > 2**62:  # pragma: no cover - c_const would have to be astronomical
            raise ValueError("no crossover found below 2**62; check the constants")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if crossed(mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class RateTable:
    """Every exponent for one Hurst index, scalars plus parameterized entries.

    The callable fields close over h, so ``table.tau1_of_eta(0.0)`` and
    ``tau1(h, 0.0)`` are the same number.
    """

    h: float
    nu0: float
    h0: float
    tau2: float
    m_ties: int
    tau1_of_eta: Callable[[float], float]
    tau1_prime_of_kappa: Callable[[float], float]
    eta_star_of_kappa: Callable[[float], float]
    tau_of_alpha: Callable[[float], Optional[float]]
    tau_prime_of_alpha: Callable[[float, float], Optional[float]]
    mu_of_delta: Callable[[float], float]


def rate_table(h: float) -> RateTable:
    """Bundle all rate entries for one Hurst index."""
    nu0, h0, tau2 = base_exponents(h)
    _, m_ties = corollary_rates(h, h / (8.0 * h0))
    return RateTable(
        h=h,
        nu0=nu0,
        h0=h0,
        tau2=tau2,
        m_ties=m_ties,
        tau1_of_eta=lambda eta: tau1(h, eta),
        tau1_prime_of_kappa=lambda kappa: tau1_prime(h, kappa),
        eta_star_of_kappa=lambda kappa: eta_star(h, kappa),
        tau_of_alpha=lambda alpha: theorem_rates(h, alpha)[0],
        tau_prime_of_alpha=lambda alpha, kappa: theorem_rates(h, alpha, kappa)[1],
        mu_of_delta=lambda delta: corollary_rates(h, delta)[0],
    )


def rates_table_text(h_values, kappa: float = 0.5, delta: Optional[float] = None) -> str:
    """CSV sweep table, one row per Hurst index.

    Parameterized entries are evaluated at the given kappa and delta;
    delta defaults per h to half its cap, h/(8 h0). Values are formatted
    with repr, the shortest digit string that round-trips exactly.
    """
    lines = ["h,nu0,h0,tau2,tau1_at_0,tau1p(kappa),eta_star,mu(delta),m"]
    for h in h_values:
        nu0, h0, tau2 = base_exponents(h)
        d = h / (8.0 * h0) if delta is None else delta
        mu, m_ties = corollary_rates(h, d)
        row = (
            float(h),
            nu0,
            h0,
            tau2,
            tau1(h, 0.0),
            tau1_prime(h, kappa),
            eta_star(h, kappa),
            mu,
            m_ties,
        )
        lines.append(",".join(repr(v) if isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


def write_rates_csv(path, h_values, kappa: float = 0.5, delta: Optional[float] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(rates_table_text(h_values, kappa=kappa, delta=delta))
