"""Stochastic-volatility smiles in normal-vol quotation.

SABR enters through its equivalent Bachelier volatility, NSVh through its
closed-form price (Johnson S_U terminal law). Both support ATM anchoring and
least-squares calibration to a quoted normal-vol smile.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import models
from .errors import ConvergenceError, DomainError
from .implied_vol import bachelier_ivol
from .market import theta_of
from .numerics import log_sinhc_sq, norm_cdf
from .vanilla import price_bachelier

H_SERIES_CUTOFF = 1e-6


def sabr_h(z, rho):
    """``H(z) = z / chi(z)`` with ``chi(z) = log((sqrt(1 + 2 rho z + z^2) + z + rho) / (1 + rho))``.

    chi is evaluated through log1p on whichever side avoids cancellation;
    for |z| < 1e-6 the series ``1 + rho z / 2`` is used.
    """
    z = np.asarray(z, dtype=float)
    root = np.sqrt(1 + 2 * rho * z + z * z)
    w = (2 * rho * z + z * z) / (root + 1)  # root - 1
    chi_pos = np.log1p((w + z) / (1 + rho))
    # same quantity via (root + z + rho)(root - z - rho) = 1 - rho^2
    chi_neg = -np.log1p((w - z) / (1 - rho))
    chi = np.where(z >= 0, chi_pos, chi_neg)
    small = np.abs(z) < H_SERIES_CUTOFF
    out = np.where(small, 1 + 0.5 * rho * z, z / np.where(small, 1.0, chi))
    return out[()] if out.ndim == 0 else out


def _e1(x):
    """``expm1(x) / x`` with the x = 0 limit."""
    x = np.asarray(x, dtype=float)
    zero = x == 0
    xs = np.where(zero, 1.0, x)
    return np.where(zero, 1.0, np.expm1(xs) / xs)


def sabr_normal_case_vol(strike, forward, sigma0, rho, nu, texp):
    """Equivalent normal vol of SABR with beta = 0; any strike sign allowed."""
    if not sigma0 > 0:
        raise DomainError("sigma0 must be > 0")
    z = nu * (np.asarray(strike, dtype=float) - forward) / sigma0
    out = sigma0 * sabr_h(z, rho) * (1 + (2 - 3 * rho * rho) * nu * nu * texp / 24)
    return out[()] if np.ndim(out) == 0 else out


def sabr_bachelier_vol(strike, forward, sabr: models.Sabr, texp):
    """Equivalent Bachelier vol of the SABR model.

    beta = 0 goes to ``sabr_normal_case_vol``; beta > 0 needs positive strike
    and forward. All ratios are written in u = log k so that k = 1 is regular.
    """
    beta, rho, nu = sabr.beta, sabr.rho, sabr.nu
    if beta == 0.0:
        return sabr_normal_case_vol(strike, forward, sabr.sigma0, rho, nu, texp)
    strike = np.asarray(strike, dtype=float)
    if np.any(~(strike > 0)) or not forward > 0:
        raise DomainError("SABR with beta > 0 needs strike and forward > 0")
    b = 1.0 - beta
    u = np.log(strike / forward)
    alpha = sabr.sigma0 / forward**b
    e_bu, e_u = _e1(b * u), _e1(u)
    q = u * e_bu
    z = nu / alpha * q
    ratio_kq = e_u / e_bu  # (k - 1) / q
    ratio_beta = beta * _e1(beta * u) / e_u  # (k^beta - 1) / (k - 1)
    # log((k - 1) / (sqrt(k^beta) q)) / q^2 through L(x) = log(sinh(x/2) / (x/2)):
    # the O(u) parts cancel exactly, leaving (b^2 L(bu) / (bu)^2 - L(u) / u^2) / E(bu)^2
    log_term = (b * b * log_sinhc_sq(b * u) - log_sinhc_sq(u)) / (e_bu * e_bu)
    corr = 1 + (log_term * alpha**2 + 0.25 * rho * ratio_beta * alpha * nu
                + (2 - 3 * rho * rho) * nu * nu / 24) * texp
    out = sabr.sigma0 * forward**beta * sabr_h(z, rho) * ratio_kq * corr
    return out[()] if out.ndim == 0 else out


def sabr_sigma0_from_atm(sigma_atm, rho, nu, texp):
    """sigma0 that reproduces the ATM normal vol under the beta = 0 formula."""
    if not sigma_atm > 0:
        raise DomainError("ATM vol must be > 0")
    factor = 1 + (2 - 3 * rho * rho) * nu * nu * texp / 24
    if not factor > 0:
        raise DomainError("ATM correction factor is not positive; no sigma0 exists")
    return sigma_atm / factor


def sabr_vol_atm_anchored(strike, forward, sigma_atm, rho, nu, texp):
    """``sigma_atm * H(z)`` with sigma0 solved from the ATM vol."""
    sigma0 = sabr_sigma0_from_atm(sigma_atm, rho, nu, texp)
    z = nu * (np.asarray(strike, dtype=float) - forward) / sigma0
    out = sigma_atm * sabr_h(z, rho)
    return out[()] if np.ndim(out) == 0 else out


def _nsvh_bracket(d, nu_sqt, rho):
    return (1 + rho) * norm_cdf(d + nu_sqt) - (1 - rho) * norm_cdf(d - nu_sqt) - 2 * rho * norm_cdf(d)


def _nsvh_d(strike, forward, sigma0, rho, nu, texp):
    rho_star = math.sqrt(1 - rho * rho)
    growth = math.exp(0.5 * nu * nu * texp)
    x = nu * (forward - np.asarray(strike, dtype=float)) / (rho_star * sigma0) - rho / rho_star * growth
    return (math.atanh(rho) + np.arcsinh(x)) / (nu * math.sqrt(texp))


def nsvh_price(kind, strike, forward, nsvh: models.Nsvh, texp):
    """NSVh closed-form price, with the terminal mean set to F0.

    nu = 0 is the Bachelier price with sigma_N = sigma0.
    """
    texp = float(texp)
    if not texp > 0:
        raise DomainError("NSVh price needs expiry > 0")
    theta = np.asarray(theta_of(kind), dtype=float)
    if nsvh.nu == 0.0:
        return price_bachelier(theta, strike, forward, nsvh.sigma0, texp)
    nu, rho = nsvh.nu, nsvh.rho
    d = _nsvh_d(strike, forward, nsvh.sigma0, rho, nu, texp)
    nu_sqt = nu * math.sqrt(texp)
    tv = nsvh.sigma0 / (2 * nu) * math.exp(0.5 * nu * nu * texp) * _nsvh_bracket(d, nu_sqt, rho)
    money = theta * (forward - np.asarray(strike, dtype=float))
    out = money * norm_cdf(theta * d) + tv
    return out[()] if out.ndim == 0 else out


def nsvh_sigma0_from_atm(sigma_atm, rho, nu, texp):
    """sigma0 matching the ATM price ``sigma_atm sqrt(T / 2 pi)``; the price is linear in sigma0."""
    if not sigma_atm > 0:
        raise DomainError("ATM vol must be > 0")
    if nu == 0.0:
        return sigma_atm
    nu_sqt = nu * math.sqrt(texp)
    rho_star = math.sqrt(1 - rho * rho)
    d0 = (math.atanh(rho) - math.asinh(rho / rho_star * math.exp(0.5 * nu * nu * texp))) / nu_sqt
    b0 = float(_nsvh_bracket(d0, nu_sqt, rho))
    return sigma_atm * math.sqrt(texp / (2 * math.pi)) * 2 * nu * math.exp(-0.5 * nu * nu * texp) / b0


def nsvh_price_atm_anchored(kind, strike, forward, sigma_atm, rho, nu, texp):
    """NSVh price parameterized by the ATM normal vol instead of sigma0."""
    sigma0 = nsvh_sigma0_from_atm(sigma_atm, rho, nu, texp)
    return nsvh_price(kind, strike, forward, models.Nsvh(sigma0, rho, nu), texp)


def nsvh_bachelier_vol(strike, forward, nsvh: models.Nsvh, texp):
    """Normal implied vol of NSVh prices, from the out-of-the-money side."""
    strike = np.asarray(strike, dtype=float)
    kind = np.where(strike >= forward, 1, -1)
    p = nsvh_price(kind, strike, forward, nsvh, texp)
    return bachelier_ivol(p, kind, strike, forward, texp)


@dataclass(frozen=True)
class CalibrationResult:
    model: str
    sigma0: float
    rho: float
    nu: float
    residual_norm: float
    converged: bool
    rho_identified: bool
    message: str = ""

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


CALIB_STARTS = ((0.0, 0.2), (-0.5, 0.5), (0.5, 0.5), (0.0, 1.0), (-0.2, 2.0))
# nu below this leaves rho without influence on the smile
RHO_ID_NU = 1e-6


def _model_vols(model, strikes, forward, texp, sigma0, rho, nu):
    if model == "sabr_normal":
        return sabr_normal_case_vol(strikes, forward, sigma0, rho, nu, texp)
    return nsvh_bachelier_vol(strikes, forward, models.Nsvh(sigma0, rho, nu), texp)


def calibrate_smile(model, strikes, vols, forward, texp, anchor_atm=False, atm_vol=None):
    """Fit (sigma0, rho, nu) to a normal-vol smile by bounded least squares.

    Args:
        model: "sabr_normal" (SABR with beta = 0) or "nsvh"
        strikes, vols: quoted normal vols
        forward, texp: market inputs
        anchor_atm: solve sigma0 from ``atm_vol`` and fit (rho, nu) only
        atm_vol: ATM normal vol; taken from a K = F0 quote when omitted

    Returns:
        CalibrationResult with the best of several starts
    """
    if model not in ("sabr_normal", "nsvh"):
        raise DomainError(f"unknown smile model {model!r}")
    strikes = np.asarray(strikes, dtype=float)
    vols = np.asarray(vols, dtype=float)
    if strikes.shape != vols.shape or strikes.ndim != 1:
        raise DomainError("strikes and vols must be 1-d arrays of equal length")
    if anchor_atm and atm_vol is None:
        atm = np.isclose(strikes, forward, rtol=0, atol=1e-12 * max(abs(forward), 1.0))
        if not np.any(atm):
            raise DomainError("anchor_atm needs atm_vol or a quote at K = F0")
        atm_vol = float(vols[atm][0])
    need = 2 if anchor_atm else 3
    if strikes.size < need:
        raise DomainError(f"calibration needs at least {need} quotes")

    sigma0_of = sabr_sigma0_from_atm if model == "sabr_normal" else nsvh_sigma0_from_atm
    seed_sigma = float(vols[np.argmin(np.abs(strikes - forward))])

    def resid(x):
        if anchor_atm:
            rho, nu = x
            sigma0 = sigma0_of(atm_vol, rho, nu, texp)
        else:
            sigma0, rho, nu = x
        return _model_vols(model, strikes, forward, texp, sigma0, rho, nu) - vols

    if anchor_atm:
        lower, upper = [-0.99, 0.0], [0.99, 10.0]
    else:
        lower, upper = [1e-12 * seed_sigma, -0.99, 0.0], [np.inf, 0.99, 10.0]

    best = None
    for rho0, nu0 in CALIB_STARTS:
        x0 = [rho0, nu0] if anchor_atm else [seed_sigma, rho0, nu0]
        try:
            sol = optimize.least_squares(resid, x0, bounds=(lower, upper), method="trf",
                                         xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
        except (DomainError, FloatingPointError, ValueError):
            continue
        if best is None or sol.cost < best.cost:
            best = sol
    if best is None or best.status <= 0:
        raise ConvergenceError("smile calibration failed from every starting point")

    if anchor_atm:
        rho, nu = best.x
        sigma0 = sigma0_of(atm_vol, rho, nu, texp)
    else:
        sigma0, rho, nu = best.x
    return CalibrationResult(
        model=model,
        sigma0=float(sigma0),
        rho=float(rho),
        nu=float(nu),
        residual_norm=float(np.linalg.norm(best.fun)),
        converged=bool(best.status > 0),
        rho_identified=bool(nu > RHO_ID_NU),
        message=best.message,
    )
