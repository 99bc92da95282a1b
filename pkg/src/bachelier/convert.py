"""Volatility conversion between the Bachelier, Black and displaced BS models.

ATM conversions are exact. Smile conversions are closed-form approximations;
``exact_convert`` prices under one model and inverts under the other and is
the reference for all of them.
"""
import math
import warnings

import numpy as np
from scipy import special as spsp

from . import models
from .errors import DomainError, LeeBoundWarning
from .implied_vol import bachelier_ivol, black_ivol, dbs_ivol
from .numerics import log_sinhc_sq, norm_quantile
from .vanilla import price

# Lee-bound check is restricted to the low-strike wing where it is asymptotic
LEE_WING_K = math.exp(-1.0)


def _atm_half_price(x):
    """``2N(x) - 1`` written through erf to avoid cancellation at small x."""
    return spsp.erf(x / math.sqrt(2.0))


def dbs_to_bachelier_atm(sigma_d, beta, shift, forward, texp):
    """Normal vol giving the same ATM price as a DBS model."""
    dbs = models.Dbs(sigma_d, beta, shift)
    d_fwd = dbs.displace(forward)
    if not d_fwd > 0:
        raise DomainError("displaced forward must be > 0")
    if not texp > 0:
        raise DomainError("expiry must be > 0")
    if beta == 0.0:
        return shift * sigma_d
    x = 0.5 * beta * sigma_d * math.sqrt(texp)
    return float(d_fwd / beta * math.sqrt(2 * math.pi / texp) * _atm_half_price(x))


def dbs_to_bs_atm(sigma_d, beta, shift, forward, texp):
    """BS vol giving the same ATM price as a DBS model."""
    dbs = models.Dbs(sigma_d, beta, shift)
    d_fwd = dbs.displace(forward)
    if not (forward > 0 and d_fwd > 0):
        raise DomainError("forward and displaced forward must be > 0")
    if not texp > 0:
        raise DomainError("expiry must be > 0")
    sq = math.sqrt(texp)
    if beta == 0.0:
        half_price = 0.5 * shift * sigma_d * sq / math.sqrt(2 * math.pi)
    else:
        half_price = d_fwd / beta * 0.5 * _atm_half_price(0.5 * beta * sigma_d * sq)
    arg = 0.5 + half_price / forward
    if not 0 < arg < 1:
        raise DomainError("DBS ATM price is outside the range attainable by BS")
    return float(2.0 / sq * norm_quantile(arg))


def bs_to_bachelier_atm(sigma_bs, forward, texp):
    return dbs_to_bachelier_atm(sigma_bs, 1.0, 1.0, forward, texp)


def bachelier_to_bs_atm(sigma_n, forward, texp):
    if not forward > 0:
        raise DomainError("forward must be > 0")
    return dbs_to_bs_atm(sigma_n / forward, 0.0, forward, forward, texp)


def _log_moneyness(strike, forward):
    strike = np.asarray(strike, dtype=float)
    if np.any(~(strike > 0)) or not np.all(np.asarray(forward) > 0):
        raise DomainError("strike and forward must be > 0")
    return np.log(strike / forward)


def _expm1_ratio(u):
    """``(e^u - 1) / u`` with the u = 0 limit."""
    small = u == 0
    us = np.where(small, 1.0, u)
    return np.where(small, 1.0, np.expm1(us) / us)


def bs_to_bachelier_smile(strike, sigma_bs, forward, texp, variant="improved"):
    """Approximate equivalent normal vol of a flat BS vol at each strike.

    Args:
        strike: strike(s), > 0
        sigma_bs: BS volatility
        forward: forward price, > 0
        texp: time to expiry
        variant: "improved" (default) or "hkl", the SABR beta = 1, nu = 0 limit

    Returns:
        sigma_N(K)
    """
    u = _log_moneyness(strike, forward)
    var_t = sigma_bs**2 * texp
    if variant == "improved":
        out = sigma_bs * forward * np.exp(0.5 * u) * (1 + u * u / 24) / (1 + var_t / 24)
    elif variant == "hkl":
        out = sigma_bs * forward * _expm1_ratio(u) * (1 - log_sinhc_sq(u) * var_t)
    else:
        raise DomainError(f"unknown conversion variant {variant!r}")
    return out[()] if out.ndim == 0 else out


def lee_bound(strike, forward, texp):
    """Model-free upper bound ``sqrt(2 |log k| / T)`` on the BS wing vol."""
    return np.sqrt(2 * np.abs(_log_moneyness(strike, forward)) / texp)


def lee_violation(sigma_bs, strike, forward, texp):
    """True where a BS vol in the low-strike wing exceeds the Lee bound."""
    k = np.asarray(strike, dtype=float) / forward
    return (k < LEE_WING_K) & (np.asarray(sigma_bs) > lee_bound(strike, forward, texp))


def _flag_lee(sigma_bs, strike, forward, texp):
    flag = lee_violation(sigma_bs, strike, forward, texp)
    if np.any(flag):
        warnings.warn(
            "converted BS vol exceeds the Lee wing bound; an equivalent BS vol may not exist",
            LeeBoundWarning,
            stacklevel=3,
        )
    return flag


def bachelier_to_bs_smile(strike, sigma_n, forward, texp, return_flag=False):
    """Approximate BS vol equivalent to a normal vol at each strike.

    Low strikes that break the Lee bound raise a ``LeeBoundWarning``; with
    ``return_flag=True`` the boolean flag array is returned as well.
    """
    u = _log_moneyness(strike, forward)
    k = np.exp(u)
    out = sigma_n / (forward * np.sqrt(k)) * (1 + sigma_n**2 * texp / (24 * k * forward**2)) / (1 + u * u / 24)
    flag = _flag_lee(out, strike, forward, texp)
    out = out[()] if out.ndim == 0 else out
    return (out, flag[()] if np.ndim(flag) == 0 else flag) if return_flag else out


def _displaced_moneyness(strike, forward, beta, shift):
    d_fwd = beta * forward + (1 - beta) * shift
    d_strike = beta * np.asarray(strike, dtype=float) + (1 - beta) * shift
    if not d_fwd > 0 or np.any(~(d_strike > 0)):
        raise DomainError("displaced forward and strike must be > 0")
    return d_fwd, np.log(d_strike / d_fwd)


def dbs_to_bachelier_smile(strike, sigma_d, beta, shift, forward, texp):
    """Approximate normal vol equivalent to a DBS model at each strike."""
    models.Dbs(sigma_d, beta, shift)
    d_fwd, ud = _displaced_moneyness(strike, forward, beta, shift)
    out = sigma_d * d_fwd * np.exp(0.5 * ud) * (1 + ud * ud / 24) / (1 + (beta * sigma_d) ** 2 * texp / 24)
    return out[()] if out.ndim == 0 else out


def dbs_to_bs_smile(strike, sigma_d, beta, shift, forward, texp, return_flag=False):
    """Approximate BS vol equivalent to a DBS model at each strike."""
    models.Dbs(sigma_d, beta, shift)
    u = _log_moneyness(strike, forward)
    d_fwd, ud = _displaced_moneyness(strike, forward, beta, shift)
    ratio = np.exp(ud - u)  # k_D / k
    lever = d_fwd / forward
    out = (
        sigma_d * lever * np.sqrt(ratio)
        * (1 + ud * ud / 24) / (1 + u * u / 24)
        * (1 + sigma_d**2 * lever**2 * ratio * texp / 24) / (1 + (beta * sigma_d) ** 2 * texp / 24)
    )
    flag = _flag_lee(out, strike, forward, texp)
    out = out[()] if out.ndim == 0 else out
    return (out, flag[()] if np.ndim(flag) == 0 else flag) if return_flag else out


def _exact_scalar(source, target, strike, forward, texp, beta, shift):
    kind = 1 if strike >= forward else -1
    p = price(source, kind, strike, forward, texp)
    if target == "bachelier":
        return bachelier_ivol(p, kind, strike, forward, texp)
    if target == "black":
        return black_ivol(p, kind, strike, forward, texp)
    return dbs_ivol(p, kind, strike, forward, beta, shift, texp)


def exact_convert(source, target, strike, forward, texp, beta=None, shift=None):
    """Equivalent vol of ``source`` under ``target`` by price-then-invert.

    Args:
        source: model instance to price with
        target: "bachelier", "black" or "dbs"
        strike: strike(s)
        forward, texp: market inputs
        beta, shift: DBS parameters when target == "dbs"

    Returns:
        target-model volatility at each strike. The out-of-the-money side is
        priced so that no information is lost to intrinsic value.
    """
    if target not in ("bachelier", "black", "dbs"):
        raise DomainError(f"unknown target model {target!r}")
    if target == "dbs" and (beta is None or shift is None):
        raise DomainError("DBS target needs beta and shift")
    out = np.vectorize(
        lambda k: _exact_scalar(source, target, float(k), forward, texp, beta, shift), otypes=[float]
    )(strike)
    return out[()] if np.ndim(out) == 0 else out
