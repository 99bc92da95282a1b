"""Bachelier (normal) option model and its bridge to the Black-Scholes family."""
from .barrier import BarrierSpec, BarrierStatus, Direction, Knock, barrier_price
from .convert import (
    bachelier_to_bs_atm,
    bachelier_to_bs_smile,
    bs_to_bachelier_atm,
    bs_to_bachelier_smile,
    dbs_to_bachelier_atm,
    dbs_to_bachelier_smile,
    dbs_to_bs_atm,
    dbs_to_bs_smile,
    exact_convert,
)
from .errors import ConvergenceError, DomainError, LeeBoundWarning, NoImpliedVolError
from .exotics import AsianSpec, BasketSpec, asian_price, basket_price, spread_price, uniform_grid
from .greeks import Greeks, delta_backbone_adjusted, greeks_analytic, greeks_fd
from .implied_vol import bachelier_ivol, bachelier_ivol_straddle, black_ivol, dbs_ivol
from .market import Instrument, MarketSnapshot, OptionKind, PriceReport, discount, forward_from_spot
from .models import Bachelier, Black, Cev, Dbs, Nsvh, Sabr
from .smile import calibrate_smile, nsvh_price, sabr_bachelier_vol
from .vanilla import (
    price,
    price_bachelier,
    price_bachelier_general,
    price_bachelier_ou_spot,
    price_black,
    price_cev,
    price_dbs,
    price_suboptimal,
)
