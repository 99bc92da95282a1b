"""Implied volatility inversion.

Normal vols come from a closed-form rational approximation in the straddle
moneyness; lognormal and displaced vols from a safeguarded Newton solve.
"""
import math

import numpy as np

from .errors import ConvergenceError, DomainError, NoImpliedVolError
from .market import theta_of
from .numerics import norm_cdf, norm_pdf, norm_quantile

# Rational Chebyshev coefficients of h(eta), kept as the printed strings.
_A_STR = (
    "3.99496 16873 45134 e-1",
    "2.10096 07950 68497 e+1",
    "4.98034 02178 55084 e+1",
    "5.98876 11026 90991 e+2",
    "1.84848 96954 37094 e+3",
    "6.10632 24078 67059 e+3",
    "2.49341 52853 49361 e+4",
    "1.26645 80513 48246 e+4",
)
_B_STR = (
    "4.99053 41535 89422 e+1",
    "3.09357 39367 43112 e+1",
    "1.49510 50083 10999 e+3",
    "1.32361 45378 99738 e+3",
    "1.59891 96976 79745 e+4",
    "2.39200 88917 20782 e+4",
    "3.60881 71083 75034 e+3",
    "-2.06771 94864 00926 e+2",
    "1.17424 05993 06013 e+1",
)


def _parse(s):
    return float(s.replace(" ", ""))


H_NUM = tuple(_parse(s) for s in _A_STR)  # a_0 .. a_7
H_DEN = (1.0,) + tuple(_parse(s) for s in _B_STR)  # 1, b_1 .. b_9

ETA_SERIES_CUTOFF = 1e-3
# beyond this |d_N| the rational form is polished by one Newton step
D_POLISH = 7.7
BLACK_MAX_ITER = 100
POLISH_MAX_STEPS = 4


def h_eta(eta):
    """Rational approximation ``sqrt(eta) * P7(eta) / (1 + Q9(eta))``."""
    eta = np.asarray(eta, dtype=float)
    num = np.polynomial.polynomial.polyval(eta, H_NUM)
    den = np.polynomial.polynomial.polyval(eta, H_DEN)
    out = np.sqrt(eta) * num / den
    return out[()] if out.ndim == 0 else out


def eta_of_v(v):
    """``v / atanh(v)``; the reciprocal Taylor series is used for small v."""
    v = np.asarray(v, dtype=float)
    if np.any(~((v >= 0) & (v < 1))):
        raise DomainError("v must lie in [0, 1)")
    v2 = v * v
    series = 1.0 / (1.0 + v2 * (1 / 3 + v2 * (1 / 5 + v2 * (1 / 7 + v2 / 9))))
    small = v <= ETA_SERIES_CUTOFF
    v_safe = np.where(small, 0.5, v)
    out = np.where(small, series, v_safe / np.arctanh(v_safe))
    return out[()] if out.ndim == 0 else out


def _eta_from_values(intrinsic, time_value):
    """eta in terms of |F0 - K| and the straddle time value, stable as v -> 1."""
    straddle = intrinsic + 2 * time_value
    v = intrinsic / straddle
    small = v <= ETA_SERIES_CUTOFF
    # atanh(v) = 0.5 log((1+v)/(1-v)) = 0.5 log1p(|F0-K| / time value)
    tv_safe = np.where(small, 1.0, time_value)
    at = 0.5 * np.log1p(intrinsic / tv_safe)
    direct = np.where(small, 1.0, v) / np.where(small, 1.0, at)
    return np.where(small, eta_of_v(np.where(small, v, 0.0)), direct), straddle


def _bachelier_from_straddle(intrinsic, time_value, texp):
    eta, straddle = _eta_from_values(intrinsic, time_value)
    return np.sqrt(np.pi / (2 * texp)) * straddle * h_eta(eta)


def _polish(sigma, texp, target_tv, intrinsic, polish):
    """Newton refinement on the log of the OTM time value.

    ``polish="wing"`` applies it only beyond |d_N| = 7.7, ``"always"`` at
    every non-ATM strike and ``"none"`` returns the rational form as is.
    Working in log price keeps the wing iteration close to linear; a few
    steps at most are taken.
    """
    if polish not in ("wing", "always", "none"):
        raise DomainError(f"unknown polish mode {polish!r}")
    if polish == "none":
        return sigma
    sq = np.sqrt(texp)
    cutoff = D_POLISH if polish == "wing" else 0.0
    active = intrinsic / (sigma * sq) > cutoff
    if not np.any(active):
        return sigma
    log_target = np.log(target_tv)
    for _ in range(POLISH_MAX_STEPS):
        d = intrinsic / (sigma * sq)
        # OTM price as a function of sigma; same for call and put at |d|
        tv = sigma * sq * (norm_pdf(d) - d * norm_cdf(-d))
        vega = sq * norm_pdf(d)
        step = np.where(active & (tv > 0), (np.log(np.where(tv > 0, tv, 1.0)) - log_target) * tv / vega, 0.0)
        sigma = sigma - step
        if np.all(np.abs(step) <= 1e-15 * sigma):
            break
    return sigma


def bachelier_ivol(price, kind, strike, forward, texp, polish="wing"):
    """Bachelier implied volatility in closed form.

    Args:
        price: undiscounted option price
        kind: call/put flag
        strike, forward: contract inputs
        texp: time to expiry, > 0
        polish: "wing" (default), "always" or "none"; see ``_polish``

    Returns:
        normal volatility sigma_N
    """
    texp = np.asarray(texp, dtype=float)
    if np.any(~(texp > 0)):
        raise DomainError("implied vol needs expiry > 0")
    theta = theta_of(kind)
    money = theta * (np.asarray(forward, dtype=float) - strike)
    time_value = np.asarray(price, dtype=float) - np.maximum(money, 0.0)
    if np.any(~(time_value > 0)):
        raise NoImpliedVolError("price must strictly exceed the intrinsic value")
    intrinsic = np.abs(money)
    sigma = _bachelier_from_straddle(intrinsic, time_value, texp)
    sigma = _polish(sigma, texp, time_value, intrinsic, polish)
    return sigma[()] if np.ndim(sigma) == 0 else sigma


def bachelier_ivol_straddle(straddle, strike, forward, texp, polish="wing"):
    """Normal vol from a directly quoted straddle price."""
    texp = np.asarray(texp, dtype=float)
    if np.any(~(texp > 0)):
        raise DomainError("implied vol needs expiry > 0")
    intrinsic = np.abs(np.asarray(forward, dtype=float) - strike)
    time_value = 0.5 * (np.asarray(straddle, dtype=float) - intrinsic)
    if np.any(~(time_value > 0)):
        raise NoImpliedVolError("straddle must exceed |F0 - K|")
    sigma = _bachelier_from_straddle(intrinsic, time_value, texp)
    sigma = _polish(sigma, texp, time_value, intrinsic, polish)
    return sigma[()] if np.ndim(sigma) == 0 else sigma


def _black_otm(strike, forward, sd):
    """Undiscounted out-of-the-money Black price with total vol ``sd``."""
    theta = 1.0 if strike >= forward else -1.0
    d1 = math.log(forward / strike) / sd + 0.5 * sd
    d2 = d1 - sd
    return theta * (forward * norm_cdf(theta * d1) - strike * norm_cdf(theta * d2)), forward * norm_pdf(d1)


def _black_total_vol(otm, strike, forward):
    """Total vol ``sigma sqrt(T)`` matching an OTM Black price (scalar)."""
    if strike == forward:
        return 2.0 * float(norm_quantile(0.5 * (otm / forward + 1.0)))
    target = math.log(otm)
    lo, hi = 0.0, math.sqrt(2.0 * abs(math.log(forward / strike)))
    sd = hi
    while _black_otm(strike, forward, hi)[0] < otm:
        lo, hi = hi, 2.0 * hi
        sd = hi
        if hi > 1e3:
            raise NoImpliedVolError("price at or above the no-arbitrage upper bound")
    for _ in range(BLACK_MAX_ITER):
        p, vega = _black_otm(strike, forward, sd)
        if p > 0:
            if p > otm:
                hi = sd
            else:
                lo = sd
            step = (math.log(p) - target) * p / vega if vega > 0 else math.inf
            new = sd - step
        else:
            lo = sd
            new = math.inf
        if not lo < new < hi:
            new = 0.5 * (lo + hi)
        if abs(new - sd) <= 1e-15 * sd or hi - lo <= 1e-15 * hi:
            return new
        sd = new
    raise ConvergenceError(f"Black implied vol did not converge in {BLACK_MAX_ITER} iterations")


def _black_ivol_scalar(price, theta, strike, forward, texp):
    if not (strike > 0 and forward > 0):
        raise DomainError("strike and forward must be > 0 under the lognormal model")
    if not texp > 0:
        raise DomainError("implied vol needs expiry > 0")
    upper = forward if theta > 0 else strike
    intrinsic = max(theta * (forward - strike), 0.0)
    if not (intrinsic < price < upper):
        raise NoImpliedVolError("price outside the Black no-arbitrage bounds")
    # move to the OTM side by parity, where the price carries the most information
    otm = price - intrinsic if (theta > 0) == (strike < forward) else price
    if strike == forward:
        otm = price
    if not otm > 0:
        raise NoImpliedVolError("option price indistinguishable from intrinsic")
    return _black_total_vol(otm, strike, forward) / math.sqrt(texp)


_black_ivol_vec = np.vectorize(_black_ivol_scalar, otypes=[float])


def black_ivol(price, kind, strike, forward, texp):
    """Black-76 implied volatility by safeguarded Newton in log price.

    Raises NoImpliedVolError outside ``intrinsic < price < upper bound``
    and ConvergenceError after 100 iterations.
    """
    out = _black_ivol_vec(price, theta_of(kind), strike, forward, texp)
    return out[()] if np.ndim(out) == 0 else out


def dbs_ivol(price, kind, strike, forward, beta, shift, texp):
    """Displaced BS implied sigma_D; beta = 0 inverts the Bachelier price."""
    if not 0.0 <= beta <= 1.0:
        raise DomainError("beta must lie in [0, 1]")
    if not shift > 0:
        raise DomainError("shift A must be > 0")
    if beta == 0.0:
        return bachelier_ivol(price, kind, strike, forward, texp) / shift
    d_fwd = beta * np.asarray(forward, dtype=float) + (1 - beta) * shift
    d_strike = beta * np.asarray(strike, dtype=float) + (1 - beta) * shift
    if np.any(~(d_fwd > 0)) or np.any(~(d_strike > 0)):
        raise DomainError("displaced forward and strike must be > 0")
    return black_ivol(np.asarray(price) * beta, kind, d_strike, d_fwd, texp) / beta
