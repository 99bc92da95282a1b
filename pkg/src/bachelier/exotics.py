"""Basket, spread and Asian options under the Bachelier model.

Each payoff is on a linear combination of jointly normal prices, so the
price is the normal formula with the combination's mean and sd.
"""
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError
from .vanilla import price_bachelier_general

PSD_TOL = -1e-12


def psd_factor(corr):
    """Square-root factor ``L`` with ``L L^T = corr`` for a PSD correlation.

    Works for singular matrices (e.g. rho = 1), unlike a plain Cholesky.
    Rejects eigenvalues below -1e-12.
    """
    corr = np.asarray(corr, dtype=float)
    lam, vec = np.linalg.eigh(corr)
    if lam.min() < PSD_TOL:
        raise DomainError(f"correlation matrix is not positive semidefinite (min eigenvalue {lam.min():.3g})")
    return vec * np.sqrt(np.clip(lam, 0.0, None))


@dataclass(frozen=True)
class BasketSpec:
    """Basket ``B_T = sum w_k F_T,k`` of correlated Bachelier assets."""

    weights: Sequence[float]
    forwards: Sequence[float]
    vols: Sequence[float]
    corr: Sequence[Sequence[float]]
    texp: float

    def __post_init__(self):
        w, f, s = (np.atleast_1d(np.asarray(x, dtype=float)) for x in (self.weights, self.forwards, self.vols))
        c = np.atleast_2d(np.asarray(self.corr, dtype=float))
        n = w.size
        if f.size != n or s.size != n or c.shape != (n, n):
            raise DomainError("basket dimensions disagree")
        if np.any(~(s >= 0)):
            raise DomainError("vols must be >= 0")
        if not self.texp >= 0:
            raise DomainError("expiry must be >= 0")
        if not np.allclose(c, c.T, rtol=0, atol=1e-14) or not np.allclose(np.diag(c), 1.0, rtol=0, atol=1e-14):
            raise DomainError("correlation must be symmetric with unit diagonal")
        if np.any(np.abs(c) > 1 + 1e-14):
            raise DomainError("correlations must lie in [-1, 1]")
        psd_factor(c)
        for name, val in (("weights", w), ("forwards", f), ("vols", s), ("corr", c)):
            object.__setattr__(self, name, val)

    @property
    def cov(self):
        """Terminal covariance ``rho_ij sigma_i sigma_j T``."""
        return self.corr * np.outer(self.vols, self.vols) * self.texp

    @property
    def mean(self):
        return float(self.weights @ self.forwards)

    @property
    def sd(self):
        return float(np.sqrt(max(self.weights @ self.cov @ self.weights, 0.0)))


def basket_price(kind, strike, spec: BasketSpec):
    """Basket option price; s = 0 gives the intrinsic value."""
    return price_bachelier_general(kind, strike, spec.mean, spec.sd)


def spread_spec(f1, f2, sigma1, sigma2, rho, texp):
    return BasketSpec((1.0, -1.0), (f1, f2), (sigma1, sigma2), ((1.0, rho), (rho, 1.0)), texp)


def spread_price(kind, strike, f1, f2, sigma1, sigma2, rho, texp):
    """Option on ``F_T,1 - F_T,2``; sd is ``sqrt((s1^2 - 2 rho s1 s2 + s2^2) T)``."""
    return basket_price(kind, strike, spread_spec(f1, f2, sigma1, sigma2, rho, texp))


@dataclass(frozen=True)
class AsianSpec:
    """Averaging schedule: discrete ``times`` or a continuous window [start, end]."""

    times: Optional[Sequence[float]] = None
    start: Optional[float] = None
    end: Optional[float] = None

    def __post_init__(self):
        if (self.times is None) == (self.end is None):
            raise DomainError("give either discrete times or a continuous window")
        if self.times is not None:
            t = np.atleast_1d(np.asarray(self.times, dtype=float))
            if t.size == 0 or t[0] < 0 or np.any(np.diff(t) <= 0):
                raise DomainError("monitoring times must be >= 0 and strictly increasing")
            object.__setattr__(self, "times", t)
        else:
            start = 0.0 if self.start is None else float(self.start)
            if not 0 <= start < self.end:
                raise DomainError("continuous window needs 0 <= start < end")
            object.__setattr__(self, "start", start)

    @property
    def texp(self):
        return float(self.times[-1]) if self.times is not None else float(self.end)

    def unit_sd(self):
        """sd of the average for unit normal vol."""
        if self.times is not None:
            t = self.times
            return float(np.sqrt(np.minimum.outer(t, t).sum())) / t.size
        return float(np.sqrt((2 * self.start + self.end) / 3))


def uniform_grid(texp, n):
    """Equally spaced monitoring times ``T/n, 2T/n, ..., T``."""
    return AsianSpec(times=texp * np.arange(1, n + 1) / n)


def asian_price(kind, strike, forward, sigma, spec: AsianSpec):
    """Fixed-strike arithmetic Asian option price."""
    if not sigma > 0:
        raise DomainError("volatility must be > 0")
    return price_bachelier_general(kind, strike, forward, sigma * spec.unit_sd())
