"""Analytic and finite-difference Greeks.

Greeks are sensitivities of the undiscounted price: delta and gamma in the
forward, vega in the model's own volatility parameter, theta = -d/dT.
"""
from dataclasses import dataclass

import numpy as np

from . import models
from .errors import DomainError
from .market import theta_of
from .numerics import norm_cdf, norm_pdf

# finite-difference steps
FD_REL_STEP = 1e-5
FD_T_STEP = 1e-5
# second differences lose ~eps/h^2 to roundoff, so gamma uses a wider step
FD_GAMMA_REL_STEP = 1e-4


@dataclass(frozen=True)
class Greeks:
    delta: float
    gamma: float
    vega: float
    theta: float

    def as_dict(self):
        return {"delta": self.delta, "gamma": self.gamma, "vega": self.vega, "theta": self.theta}


def _bachelier_greeks(theta, strike, forward, sigma, texp):
    sq = np.sqrt(texp)
    d = (np.asarray(forward, dtype=float) - strike) / (sigma * sq)
    pdf = norm_pdf(d)
    delta = norm_cdf(d) - (theta < 0)
    return Greeks(delta, pdf / (sigma * sq), sq * pdf, -sigma * pdf / (2 * sq))


def _dbs_greeks(theta, strike, forward, dbs, texp):
    d_fwd = dbs.displace(np.asarray(forward, dtype=float))
    d_strike = dbs.displace(np.asarray(strike, dtype=float))
    if np.any(~(d_fwd > 0)) or np.any(~(d_strike > 0)):
        raise DomainError("displaced forward and strike must be > 0")
    sq = np.sqrt(texp)
    s = dbs.beta * dbs.sigma * sq
    # log(D(F0)/D(K)) written with log1p to keep the small-beta limit clean
    log_ratio = np.log1p(dbs.beta * (np.asarray(forward) - strike) / d_strike)
    d1 = log_ratio / s + 0.5 * s
    pdf = norm_pdf(d1)
    delta = norm_cdf(d1) - (theta < 0)
    return Greeks(
        delta,
        pdf / (d_fwd * dbs.sigma * sq),
        d_fwd * pdf * sq,
        -dbs.sigma * d_fwd * pdf / (2 * sq),
    )


def _squeeze(g):
    return Greeks(*(x[()] if np.ndim(x) == 0 else x for x in (g.delta, g.gamma, g.vega, g.theta)))


def greeks_analytic(model, kind, strike, forward, texp):
    """Closed-form Greeks for the Bachelier, Black and DBS models.

    Args:
        model: ``Bachelier``, ``Black`` or ``Dbs`` instance
        kind: call/put flag
        strike, forward: contract and market inputs
        texp: time to expiry, > 0

    Returns:
        Greeks; vega is with respect to the model's own sigma
    """
    texp = np.asarray(texp, dtype=float)
    if np.any(~(texp > 0)):
        raise DomainError("analytic Greeks need expiry > 0")
    theta = np.asarray(theta_of(kind))
    if isinstance(model, models.Bachelier):
        return _squeeze(_bachelier_greeks(theta, strike, forward, model.sigma, texp))
    if isinstance(model, models.Black):
        if np.any(np.asarray(strike) <= 0) or np.any(np.asarray(forward) <= 0):
            raise DomainError("strike and forward must be > 0 under the lognormal model")
        return _squeeze(_dbs_greeks(theta, strike, forward, models.Dbs(model.sigma, 1.0, 1.0), texp))
    if isinstance(model, models.Dbs):
        if model.beta == 0.0:
            # derivatives in sigma_D carry the chain factor A
            g = _bachelier_greeks(theta, strike, forward, model.shift * model.sigma, texp)
            return _squeeze(Greeks(g.delta, g.gamma, model.shift * g.vega, g.theta))
        return _squeeze(_dbs_greeks(theta, strike, forward, model, texp))
    raise TypeError(f"analytic Greeks not available for {model!r}")


def greeks_fd(pricer, forward, sigma, texp, rel_step=FD_REL_STEP, t_step=FD_T_STEP,
              gamma_rel_step=FD_GAMMA_REL_STEP):
    """Central-difference Greeks of ``pricer(forward, sigma, texp)``.

    Steps are relative to |forward| and sigma (absolute when the value is 0);
    the T step shrinks to T/2 for very short expiries.
    """
    f_scale = abs(forward) if forward != 0 else 1.0
    hf = rel_step * f_scale
    hg = gamma_rel_step * f_scale
    hs = rel_step * sigma
    ht = min(t_step, 0.5 * texp)
    p0 = pricer(forward, sigma, texp)
    delta = (pricer(forward + hf, sigma, texp) - pricer(forward - hf, sigma, texp)) / (2 * hf)
    gamma = (pricer(forward + hg, sigma, texp) - 2 * p0 + pricer(forward - hg, sigma, texp)) / hg**2
    vega = (pricer(forward, sigma + hs, texp) - pricer(forward, sigma - hs, texp)) / (2 * hs)
    theta = -(pricer(forward, sigma, texp + ht) - pricer(forward, sigma, texp - ht)) / (2 * ht)
    return Greeks(float(delta), float(gamma), float(vega), float(theta))


def delta_spot(delta_forward, rate, carry, texp):
    """Convert a forward delta to a spot delta, ``dF0/dS0 = exp((r - q) T)``."""
    return np.exp((np.asarray(rate) - carry) * texp) * delta_forward


def backbone_slope_normal(sigma_bs, forward):
    """Leading-order fixed-strike BS vol slope under a normal backbone."""
    return -sigma_bs / (2.0 * forward)


def delta_backbone_adjusted(delta_bs, vega_bs, sigma_bs, forward, backbone_slope=None):
    """Vega-rotated BS delta ``delta + (d sigma_BS / d F0) * vega``.

    With the default slope this approximates the Bachelier delta.
    """
    if not np.all(np.asarray(forward) > 0):
        raise DomainError("forward must be > 0")
    if backbone_slope is None:
        backbone_slope = backbone_slope_normal(sigma_bs, forward)
    return delta_bs + backbone_slope * vega_bs
