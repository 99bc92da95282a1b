"""Continuously monitored single-barrier options.

Knock-out prices are built from vanilla and suboptimal-exercise prices at
the actual and the reflected forward. Bachelier reflects to ``2b - F0``;
Black and DBS reflect ``D(F0)`` to ``D(b)^2 / D(F0)`` with weight
``D(F0) / D(b)``. Knock-in follows from in-out parity.
"""
import enum
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import models
from .errors import DomainError
from .market import OptionKind, theta_of
from .numerics import norm_pdf
from .vanilla import (
    price,
    price_bachelier_suboptimal,
    price_black_suboptimal,
)


class Direction(enum.Enum):
    DOWN = "down"
    UP = "up"


class Knock(enum.Enum):
    OUT = "out"
    IN = "in"


class BarrierStatus(enum.Enum):
    ACTIVE = "active"
    KNOCKED_OUT = "knocked_out"  # spot already beyond the barrier
    WORTHLESS = "worthless"  # payoff region sits behind the barrier


@dataclass(frozen=True)
class BarrierSpec:
    direction: Direction
    knock: Knock
    level: float

    def __post_init__(self):
        object.__setattr__(self, "direction", Direction(self.direction))
        object.__setattr__(self, "knock", Knock(self.knock))


def barrier_status(kind, spec: BarrierSpec, strike, forward):
    """Whether the knock-out leg is live, already out, or structurally zero."""
    theta = OptionKind.parse(kind).theta
    b = spec.level
    if spec.direction is Direction.DOWN:
        if not b < forward:
            return BarrierStatus.KNOCKED_OUT
        if theta < 0 and not b < strike:
            return BarrierStatus.WORTHLESS
    else:
        if not forward < b:
            return BarrierStatus.KNOCKED_OUT
        if theta > 0 and not strike < b:
            return BarrierStatus.WORTHLESS
    return BarrierStatus.ACTIVE


def _space(model, texp):
    """Map a model to (suboptimal pricer, reflection, weight, scale, coordinate map, lognormal flag)."""
    if isinstance(model, models.Bachelier):
        def sub(theta, k, f, ex):
            return price_bachelier_suboptimal(theta, k, f, model.sigma, texp, ex)
        return sub, (lambda f, b: 2 * b - f), (lambda f, b: 1.0), 1.0, (lambda x: x), False
    if isinstance(model, models.Black):
        dbs = models.Dbs(model.sigma, 1.0, 1.0)
    elif isinstance(model, models.Dbs):
        dbs = model
        if dbs.beta == 0.0:
            return _space(models.Bachelier(dbs.shift * dbs.sigma), texp)
    else:
        raise TypeError(f"barrier pricing not available for {model!r}")
    vol = dbs.beta * dbs.sigma

    def sub(theta, k, f, ex):
        return price_black_suboptimal(theta, k, f, vol, texp, ex)

    return sub, (lambda f, b: b * b / f), (lambda f, b: f / b), dbs.beta, dbs.displace, True


def _knock_out(model, theta, spec, strike, forward, texp):
    sub, reflect, weight, scale, dmap, lognormal = _space(model, texp)
    k, f, b = dmap(strike), dmap(forward), dmap(spec.level)
    if lognormal and not (f > 0 and b > 0 and k > 0):
        raise DomainError("displaced strike, forward and barrier must be > 0")
    r, c = reflect(f, b), weight(f, b)
    if spec.direction is Direction.DOWN:
        if theta > 0:
            ex = max(k, b)
            out = sub(1, k, f, ex) - c * sub(1, k, r, ex)
        else:
            out = sub(-1, k, f, k) - sub(-1, k, f, b) - c * (sub(-1, k, r, k) - sub(-1, k, r, b))
    else:
        if theta > 0:
            out = sub(1, k, f, k) - sub(1, k, f, b) - c * (sub(1, k, r, k) - sub(1, k, r, b))
        else:
            ex = min(k, b)
            out = sub(-1, k, f, ex) - c * sub(-1, k, r, ex)
    return max(float(out) / scale, 0.0)


def barrier_price(model, kind, spec: BarrierSpec, strike, forward, texp, with_status=False):
    """Knock-out or knock-in price under Bachelier, Black or DBS.

    Args:
        model: ``Bachelier``, ``Black`` or ``Dbs`` instance
        kind: call/put flag
        spec: barrier direction, knock type and level
        strike, forward, texp: contract and market inputs (scalars)
        with_status: also return the ``BarrierStatus`` of the knock-out leg

    Returns:
        undiscounted price; knocked-out or structurally worthless knock-outs
        are 0 and the matching knock-ins equal the vanilla
    """
    if not texp > 0:
        raise DomainError("barrier pricing needs expiry > 0")
    theta = theta_of(kind)
    status = barrier_status(theta, spec, strike, forward)
    ko = 0.0 if status is not BarrierStatus.ACTIVE else _knock_out(model, theta, spec, strike, forward, texp)
    if spec.knock is Knock.OUT:
        out = ko
    else:
        out = float(price(model, theta, strike, forward, texp)) - ko
    return (out, status) if with_status else out


def reflection_density(x, y, sigma, texp):
    """Joint density of ``F_T - F0 = x`` with the extremum not beyond ``F0 + y``."""
    s = sigma * np.sqrt(texp)
    return (norm_pdf(x / s) - norm_pdf((np.asarray(x) - 2 * y) / s)) / s


def barrier_integral_check(kind, spec: BarrierSpec, strike, forward, sigma, texp, tol=1e-13):
    """Bachelier knock-out price by quadrature of payoff times reflection density."""
    if spec.knock is not Knock.OUT:
        raise DomainError("quadrature check covers knock-out options")
    theta = theta_of(kind)
    if barrier_status(theta, spec, strike, forward) is not BarrierStatus.ACTIVE:
        return 0.0
    y = spec.level - forward
    span = 40 * sigma * np.sqrt(texp)
    if spec.direction is Direction.DOWN:
        lo, hi = spec.level, forward + span
    else:
        lo, hi = forward - span, spec.level
    if theta > 0:
        lo = max(lo, strike)
    else:
        hi = min(hi, strike)
    if not lo < hi:
        return 0.0

    def integrand(x):
        return max(theta * (x - strike), 0.0) * reflection_density(x - forward, y, sigma, texp)

    val, _ = integrate.quad(integrand, lo, hi, epsabs=tol, epsrel=tol, limit=500)
    return float(val)
