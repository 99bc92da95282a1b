"""Model parameterizations.

Each class validates its own invariants; pricing functions that take a
model instance rely on that and only check contract-level inputs
(strike and forward domains).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


def _positive(name, x):
    if not (x > 0 and math.isfinite(x)):
        raise DomainError(f"{name} must be a positive finite number, got {x!r}")


@dataclass(frozen=True)
class Bachelier:
    """Arithmetic BM on the forward, ``dF = sigma dW``; sigma in price units."""

    sigma: float
    name = "bachelier"

    def __post_init__(self):
        _positive("sigma", self.sigma)


@dataclass(frozen=True)
class Black:
    """Geometric BM on the forward (Black-76)."""

    sigma: float
    name = "black"

    def __post_init__(self):
        _positive("sigma", self.sigma)


@dataclass(frozen=True)
class Dbs:
    """Displaced BS: ``dF / D(F) = sigma dW`` with ``D(F) = beta F + (1 - beta) A``.

    beta = 1 is Black; beta = 0 is Bachelier with normal vol ``A * sigma``.
    """

    sigma: float
    beta: float
    shift: float
    name = "dbs"

    def __post_init__(self):
        _positive("sigma", self.sigma)
        if not 0.0 <= self.beta <= 1.0:
            raise DomainError(f"beta must lie in [0, 1], got {self.beta!r}")
        _positive("shift A", self.shift)

    def displace(self, x):
        return self.beta * x + (1.0 - self.beta) * self.shift

    @property
    def lower_bound(self):
        """Infimum of attainable prices, ``-(1 - beta) A / beta``."""
        if self.beta == 0.0:
            return -math.inf
        return -(1.0 - self.beta) * self.shift / self.beta


@dataclass(frozen=True)
class Cev:
    """``dF / F^beta = sigma dW`` with absorption at zero."""

    sigma: float
    beta: float
    name = "cev"

    def __post_init__(self):
        _positive("sigma", self.sigma)
        if not 0.0 < self.beta <= 1.0:
            raise DomainError(f"CEV beta must lie in (0, 1], got {self.beta!r}")


@dataclass(frozen=True)
class Sabr:
    sigma0: float
    beta: float
    rho: float
    nu: float
    name = "sabr"

    def __post_init__(self):
        _positive("sigma0", self.sigma0)
        if not 0.0 <= self.beta <= 1.0:
            raise DomainError(f"beta must lie in [0, 1], got {self.beta!r}")
        if not abs(self.rho) <= 0.9999:
            raise DomainError("SABR requires |rho| <= 0.9999")
        if not self.nu >= 0:
            raise DomainError("nu must be >= 0")


@dataclass(frozen=True)
class Nsvh:
    """Hyperbolic normal stochastic volatility model (Johnson S_U terminal law)."""

    sigma0: float
    rho: float
    nu: float
    name = "nsvh"

    def __post_init__(self):
        _positive("sigma0", self.sigma0)
        if not abs(self.rho) <= 0.99:
            raise DomainError("NSVh requires |rho| <= 0.99")
        if not self.nu >= 0:
            raise DomainError("nu must be >= 0")

    @property
    def rho_star(self):
        return math.sqrt(1.0 - self.rho * self.rho)


ModelSpec = Bachelier | Black | Dbs | Cev | Sabr | Nsvh
