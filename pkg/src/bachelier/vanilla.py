"""Vanilla option prices on the forward (undiscounted).

Functions broadcast over numpy arrays. ``kind`` is "call"/"put", an
``OptionKind``, or +1/-1 (arrays of signs allowed).
"""
import numpy as np

from . import models
from .errors import DomainError
from .market import forward_from_spot, theta_of
from .numerics import chi2nc_cdf, chi2nc_sf, norm_cdf, norm_pdf

# below this beta the DBS price is evaluated in the rearranged form
DBS_SMALL_BETA = 1e-4
# below this |r - q| T the OU variance factor uses its Taylor series
OU_SERIES_CUTOFF = 1e-8


def _check_texp(texp):
    texp = np.asarray(texp, dtype=float)
    if np.any(~(texp >= 0)):
        raise DomainError("expiry must be >= 0")
    return texp


def _check_sigma(sigma):
    sigma = np.asarray(sigma, dtype=float)
    if np.any(~(sigma > 0)):
        raise DomainError("volatility must be > 0")
    return sigma


def _normal_price(theta, strike, mean, sd):
    """``E[(theta (X - K))^+]`` for ``X ~ N(mean, sd^2)``; sd = 0 gives intrinsic."""
    money = theta * (mean - strike)
    pos = sd > 0
    sd_safe = np.where(pos, sd, 1.0)
    d = money / sd_safe
    price = sd_safe * (d * norm_cdf(d) + norm_pdf(d))
    return np.where(pos, price, np.maximum(money, 0.0))


def price_bachelier(kind, strike, forward, sigma, texp):
    """Bachelier (normal model) price.

    Negative strikes and forwards are valid inputs.

    Args:
        kind: call/put flag
        strike: strike price
        forward: forward price
        sigma: normal volatility, price units per sqrt(year)
        texp: time to expiry; 0 gives the intrinsic value

    Returns:
        undiscounted option price
    """
    sigma = _check_sigma(sigma)
    texp = _check_texp(texp)
    out = _normal_price(theta_of(kind), strike, forward, sigma * np.sqrt(texp))
    return out[()] if out.ndim == 0 else out


def price_bachelier_general(kind, strike, mean, sd):
    """Option on a normally distributed terminal value with given mean and sd."""
    sd = np.asarray(sd, dtype=float)
    if np.any(~(sd >= 0)):
        raise DomainError("standard deviation must be >= 0")
    out = _normal_price(theta_of(kind), strike, mean, sd)
    return out[()] if out.ndim == 0 else out


def ou_spot_sd(sigma, rate, carry, texp):
    """Terminal sd of the forward when the *spot* follows an arithmetic OU process."""
    texp = _check_texp(texp)
    g = np.asarray(rate, dtype=float) - carry
    x = g * texp
    small = np.abs(x) < OU_SERIES_CUTOFF
    x_safe = np.where(small, 1.0, x)
    factor = np.where(small, 1.0 + x + 2.0 * x * x / 3.0, np.expm1(2 * x_safe) / (2 * x_safe))
    return sigma * np.sqrt(texp * factor)


def price_bachelier_ou_spot(kind, strike, spot, sigma, rate, carry, texp):
    """Bachelier price when ``dS = (r - q) S dt + sigma dW`` on the spot."""
    sigma = _check_sigma(sigma)
    mean = forward_from_spot(spot, rate, carry, texp)
    return price_bachelier_general(kind, strike, mean, ou_spot_sd(sigma, rate, carry, texp))


def _black_core(theta, strike, forward, sd, exercise=None):
    """Black price with total vol ``sd``; ``exercise`` moves the exercise threshold."""
    pos = sd > 0
    sd_safe = np.where(pos, sd, 1.0)
    anchor = strike if exercise is None else exercise
    d1 = np.log(forward / anchor) / sd_safe + 0.5 * sd_safe
    d2 = d1 - sd_safe
    price = theta * (forward * norm_cdf(theta * d1) - strike * norm_cdf(theta * d2))
    if exercise is None:
        limit = np.maximum(theta * (forward - strike), 0.0)
    else:
        limit = np.where(theta * (forward - anchor) > 0, theta * (forward - strike), 0.0)
    return np.where(pos, price, limit)


def _check_positive(name, x):
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError(f"{name} must be > 0 under the lognormal model")
    return x


def price_black(kind, strike, forward, sigma, texp):
    """Black-76 price on the forward."""
    strike = _check_positive("strike", strike)
    forward = _check_positive("forward", forward)
    sigma = _check_sigma(sigma)
    texp = _check_texp(texp)
    out = _black_core(theta_of(kind), strike, forward, sigma * np.sqrt(texp))
    return out[()] if out.ndim == 0 else out


def _dbs_inputs(strike, forward, dbs, texp):
    d_fwd = dbs.displace(np.asarray(forward, dtype=float))
    d_strike = dbs.displace(np.asarray(strike, dtype=float))
    if np.any(~(d_fwd > 0)):
        raise DomainError("displaced forward D(F0) must be > 0")
    if np.any(~(d_strike > 0)):
        raise DomainError("displaced strike D(K) must be > 0 for beta > 0")
    return d_fwd, d_strike, dbs.beta * dbs.sigma * np.sqrt(texp)


def price_dbs(kind, strike, forward, dbs: models.Dbs, texp):
    """Displaced BS price.

    beta = 0 is priced by the Bachelier formula with ``sigma_N = A sigma_D``.
    For small beta the Black formula is rearranged so that the O(1/beta)
    terms cancel analytically.
    """
    texp = _check_texp(texp)
    theta = theta_of(kind)
    if dbs.beta == 0.0:
        return price_bachelier(theta, strike, forward, dbs.shift * dbs.sigma, texp)
    d_fwd, d_strike, sd = _dbs_inputs(strike, forward, dbs, texp)
    if dbs.beta >= DBS_SMALL_BETA:
        out = _black_core(theta, d_strike, d_fwd, sd) / dbs.beta
    else:
        pos = sd > 0
        sd_safe = np.where(pos, sd, 1.0)
        d1 = np.log(d_fwd / d_strike) / sd_safe + 0.5 * sd_safe
        d2 = d1 - sd_safe
        money = theta * (np.asarray(forward) - strike)
        out = money * norm_cdf(theta * d2) + (d_fwd / dbs.beta) * theta * (
            norm_cdf(theta * d1) - norm_cdf(theta * d2)
        )
        out = np.where(pos, out, np.maximum(money, 0.0))
    return out[()] if np.ndim(out) == 0 else out


def price_cev(kind, strike, forward, cev: models.Cev, texp):
    """CEV price via the noncentral chi-squared distribution.

    The formula carries the absorbed mass at zero. beta = 1 is Black.
    """
    if cev.beta == 1.0:
        return price_black(kind, strike, forward, cev.sigma, texp)
    strike = np.asarray(strike, dtype=float)
    forward = _check_positive("forward", forward)
    if np.any(~(strike >= 0)):
        raise DomainError("CEV strike must be >= 0")
    texp = _check_texp(texp)
    theta = theta_of(kind)
    bstar = 1.0 - cev.beta
    pos = texp > 0
    scale = bstar**2 * cev.sigma**2 * np.where(pos, texp, 1.0)
    x_fwd = forward ** (2 * bstar) / scale
    x_strike = strike ** (2 * bstar) / scale
    dof = 1.0 / bstar
    call = forward * chi2nc_sf(x_strike, 2 + dof, x_fwd) - strike * chi2nc_cdf(x_fwd, dof, x_strike)
    put = strike * chi2nc_sf(x_fwd, dof, x_strike) - forward * chi2nc_cdf(x_strike, 2 + dof, x_fwd)
    out = np.where(np.asarray(theta) > 0, call, put)
    out = np.where(pos, out, np.maximum(theta * (forward - strike), 0.0))
    return out[()] if out.ndim == 0 else out


def price_bachelier_suboptimal(kind, strike, forward, sigma, texp, exercise):
    """Bachelier value when the holder exercises at ``exercise`` instead of ``strike``.

    Call is exercised when F_T > exercise, put when F_T < exercise.
    """
    sigma = _check_sigma(sigma)
    texp = _check_texp(texp)
    theta = theta_of(kind)
    sd = sigma * np.sqrt(texp)
    pos = sd > 0
    sd_safe = np.where(pos, sd, 1.0)
    d = theta * (np.asarray(forward) - exercise) / sd_safe
    money = theta * (np.asarray(forward) - strike)
    out = money * norm_cdf(d) + sd_safe * norm_pdf(d)
    out = np.where(pos, out, np.where(d > 0, money, 0.0))
    return out[()] if out.ndim == 0 else out


def price_black_suboptimal(kind, strike, forward, sigma, texp, exercise):
    strike = _check_positive("strike", strike)
    forward = _check_positive("forward", forward)
    exercise = _check_positive("exercise level", exercise)
    sigma = _check_sigma(sigma)
    texp = _check_texp(texp)
    out = _black_core(theta_of(kind), strike, forward, sigma * np.sqrt(texp), exercise)
    return out[()] if out.ndim == 0 else out


def price_dbs_suboptimal(kind, strike, forward, dbs: models.Dbs, texp, exercise):
    texp = _check_texp(texp)
    theta = theta_of(kind)
    if dbs.beta == 0.0:
        return price_bachelier_suboptimal(theta, strike, forward, dbs.shift * dbs.sigma, texp, exercise)
    d_fwd, d_strike, sd = _dbs_inputs(strike, forward, dbs, texp)
    d_ex = dbs.displace(np.asarray(exercise, dtype=float))
    if np.any(~(d_ex > 0)):
        raise DomainError("displaced exercise level must be > 0")
    out = _black_core(theta, d_strike, d_fwd, sd, d_ex) / dbs.beta
    return out[()] if np.ndim(out) == 0 else out


def price(model, kind, strike, forward, texp):
    """Dispatch a vanilla price on a model instance (SABR/NSVh via ``smile``)."""
    if isinstance(model, models.Bachelier):
        return price_bachelier(kind, strike, forward, model.sigma, texp)
    if isinstance(model, models.Black):
        return price_black(kind, strike, forward, model.sigma, texp)
    if isinstance(model, models.Dbs):
        return price_dbs(kind, strike, forward, model, texp)
    if isinstance(model, models.Cev):
        return price_cev(kind, strike, forward, model, texp)
    if isinstance(model, models.Sabr):
        from .smile import sabr_bachelier_vol

        vol = sabr_bachelier_vol(strike, forward, model, texp)
        return price_bachelier(kind, strike, forward, vol, texp)
    if isinstance(model, models.Nsvh):
        from .smile import nsvh_price

        return nsvh_price(kind, strike, forward, model, texp)
    raise TypeError(f"unsupported model {model!r}")


def price_suboptimal(model, kind, strike, forward, texp, exercise):
    """Suboptimal-exercise price for Bachelier, Black or DBS models."""
    if isinstance(model, models.Bachelier):
        return price_bachelier_suboptimal(kind, strike, forward, model.sigma, texp, exercise)
    if isinstance(model, models.Black):
        return price_black_suboptimal(kind, strike, forward, model.sigma, texp, exercise)
    if isinstance(model, models.Dbs):
        return price_dbs_suboptimal(kind, strike, forward, model, texp, exercise)
    raise TypeError(f"suboptimal exercise not available for {model!r}")
