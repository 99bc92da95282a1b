"""Contract and market types shared by the pricing modules.

All formula modules price on the forward, undiscounted. The helpers here
are the only place where spot, carry and discounting enter.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError


class OptionKind(enum.Enum):
    CALL = 1
    PUT = -1

    @property
    def theta(self) -> int:
        return self.value

    @classmethod
    def parse(cls, kind) -> "OptionKind":
        if isinstance(kind, cls):
            return kind
        if isinstance(kind, str):
            try:
                return cls[kind.strip().upper()]
            except KeyError:
                raise DomainError(f"unknown option kind {kind!r}") from None
        if kind in (1, -1):
            return cls(int(kind))
        raise DomainError(f"unknown option kind {kind!r}")


def theta_of(kind):
    """+1/-1 sign for call/put. Accepts strings, OptionKind, or arrays of +-1."""
    if isinstance(kind, (str, OptionKind)):
        return OptionKind.parse(kind).theta
    arr = np.asarray(kind)
    if arr.ndim == 0:
        return OptionKind.parse(int(arr)).theta
    if not np.all(np.isin(arr, (1, -1))):
        raise DomainError("option kind array must contain only +1/-1")
    return arr.astype(float)


@dataclass(frozen=True)
class Instrument:
    strike: float
    expiry: float
    kind: OptionKind = OptionKind.CALL

    def __post_init__(self):
        object.__setattr__(self, "kind", OptionKind.parse(self.kind))
        if not self.expiry >= 0:
            raise DomainError("expiry must be >= 0")


@dataclass(frozen=True)
class MarketSnapshot:
    """Forward plus the rates needed to discount or to map from spot.

    Build with ``MarketSnapshot(forward=...)`` or ``MarketSnapshot.from_spot``.
    """

    forward: float
    rate: float = 0.0
    carry: float = 0.0
    spot: Optional[float] = None
    expiry: Optional[float] = None

    def __post_init__(self):
        if self.spot is not None:
            if self.expiry is None:
                raise DomainError("a spot-quoted snapshot needs the expiry")
            fwd = forward_from_spot(self.spot, self.rate, self.carry, self.expiry)
            if not math.isclose(fwd, self.forward, rel_tol=1e-12, abs_tol=1e-300):
                raise DomainError("forward inconsistent with spot and carry")

    @classmethod
    def from_spot(cls, spot, rate, carry, expiry):
        return cls(forward_from_spot(spot, rate, carry, expiry), rate, carry, spot, expiry)


@dataclass(frozen=True)
class PriceReport:
    undiscounted: float
    discounted: float
    greeks: Optional[object] = None
    stderr: Optional[float] = None

    @classmethod
    def build(cls, undiscounted, rate, expiry, greeks=None, stderr=None):
        return cls(undiscounted, discount(undiscounted, rate, expiry), greeks, stderr)


def forward_from_spot(spot, rate, carry, texp):
    """Forward price ``exp((r - q) T) * S0``."""
    if np.any(np.asarray(texp) < 0):
        raise DomainError("expiry must be >= 0")
    return np.exp((np.asarray(rate) - carry) * texp) * spot


def discount(value, rate, texp):
    if np.any(np.asarray(texp) < 0):
        raise DomainError("expiry must be >= 0")
    return np.exp(-np.asarray(rate) * texp) * value
