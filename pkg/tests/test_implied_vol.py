import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from bachelier import errors, models
from bachelier.implied_vol import (
    D_POLISH,
    ETA_SERIES_CUTOFF,
    bachelier_ivol,
    bachelier_ivol_straddle,
    black_ivol,
    dbs_ivol,
    eta_of_v,
    h_eta,
)
from bachelier.vanilla import price_bachelier, price_black, price_dbs


def test_h_at_one_is_atm_identity():
    # [PAPER] h(1) = 1 - 7e-16 up to rounding
    assert abs(h_eta(1.0) - 1.0) <= 5e-15


def test_h_vanishes_at_zero_like_sqrt():
    assert h_eta(0.0) == 0.0
    assert h_eta(1e-12) / math.sqrt(1e-12) == pytest.approx(h_eta(1e-10) / math.sqrt(1e-10), rel=1e-3)


def test_eta_against_mpmath_and_series_seam():
    for v in (1e-5, 5e-4, ETA_SERIES_CUTOFF, 0.01, 0.5, 0.9, 0.999999):
        with mpmath.workdps(30):
            ref = float(mpmath.mpf(v) / mpmath.atanh(mpmath.mpf(v)))
        assert eta_of_v(v) == pytest.approx(ref, rel=1e-14)
    lo, hi = eta_of_v(ETA_SERIES_CUTOFF * (1 - 1e-12)), eta_of_v(ETA_SERIES_CUTOFF * (1 + 1e-12))
    assert abs(lo - hi) < 1e-15
    with pytest.raises(errors.DomainError):
        eta_of_v(1.0)


def test_atm_inversion_exact():
    for s, t in ((0.5, 1.0), (0.01, 0.01), (20.0, 5.0)):
        c = price_bachelier(1, 1.0, 1.0, s, t)
        assert bachelier_ivol(c, 1, 1.0, 1.0, t) == pytest.approx(c * math.sqrt(2 * math.pi / t), rel=1e-13)


@pytest.mark.parametrize("d", [0.1, 0.8, 1.46, 3.0, 6.0])
def test_inversion_against_mpmath_root(d):
    # the rational form is an approximation; compare to an exact mpmath root
    s, t, f = 0.3, 1.0, 1.0
    k = f - d * s * math.sqrt(t)
    p = oracles.normal_price_mp(-1, k, f, s, t)
    ref = oracles.normal_implied_vol_mp(p, -1, k, f, t)
    got = bachelier_ivol(p, -1, k, f, t)
    assert abs(got / ref - 1) < 5e-9
    assert abs(bachelier_ivol(p, -1, k, f, t, polish="always") / ref - 1) < 1e-13


def test_wing_polish_engages_beyond_cutoff():
    s, t, f = 0.3, 1.0, 1.0
    for d in (D_POLISH + 0.5, 12.0, 20.0, 35.0):
        k = f + d * s
        p = price_bachelier(1, k, f, s, t)
        assert bachelier_ivol(p, 1, k, f, t) == pytest.approx(s, rel=1e-10)


@settings(max_examples=150, deadline=None)
@given(s=st.floats(0.01, 2.0), t=st.floats(0.01, 5.0), d=st.floats(-30.0, 30.0))
def test_round_trip_polished_otm(s, t, d):
    # OTM quotes only: an ITM price carries the time value below its rounding error
    f = 1.0
    k = f - d * s * math.sqrt(t)
    theta = 1 if d <= 0 else -1
    p = price_bachelier(theta, k, f, s, t)
    assert bachelier_ivol(p, theta, k, f, t, polish="always") == pytest.approx(s, rel=1e-11)
    if abs(d) > D_POLISH:
        assert bachelier_ivol(p, theta, k, f, t) == pytest.approx(s, rel=1e-11)


def test_itm_quotes_lose_resolution():
    # price 5 + 5e-8: the recoverable vol is limited by eps * price / time value
    k, f, s = 6.0, 1.0, 1.0
    p = price_bachelier(-1, k, f, s, 1.0)
    assert bachelier_ivol(p, -1, k, f, 1.0) == pytest.approx(s, rel=1e-7)


def test_inversion_is_put_call_symmetric():
    k, f, s = 1.3, 1.0, 0.4
    c, p = price_bachelier(1, k, f, s, 1.0), price_bachelier(-1, k, f, s, 1.0)
    assert bachelier_ivol(c, 1, k, f, 1.0) == pytest.approx(bachelier_ivol(p, -1, k, f, 1.0), rel=1e-12)
    straddle = c + p
    assert bachelier_ivol_straddle(straddle, k, f, 1.0) == pytest.approx(s, rel=1e-8)


def test_no_implied_vol_cases():
    with pytest.raises(errors.NoImpliedVolError, match="no implied volatility exists"):
        bachelier_ivol(0.19, 1, 0.8, 1.0, 1.0)
    with pytest.raises(errors.NoImpliedVolError):
        bachelier_ivol_straddle(0.1, 1.2, 1.0, 1.0)
    with pytest.raises(errors.NoImpliedVolError):
        black_ivol(1.5, 1, 1.0, 1.0, 1.0)
    with pytest.raises(errors.DomainError):
        bachelier_ivol(0.1, 1, 1.0, 1.0, 1.0, polish="twice")


@pytest.mark.parametrize("sigma", [0.05, 0.3, 1.0, 2.5])
def test_black_round_trip_otm(sigma):
    k = np.array([0.3, 0.6, 0.9, 1.0, 1.1, 1.5, 3.0])
    kind = np.where(k >= 1.0, 1, -1)
    p = price_black(kind, k, 1.0, sigma, 1.0)
    ok = p > 1e-250
    np.testing.assert_allclose(black_ivol(p[ok], kind[ok], k[ok], 1.0, 1.0), sigma, rtol=1e-10)


def test_dbs_round_trip():
    for beta in (0.0, 0.2, 2 / 3, 1.0):
        m = models.Dbs(0.4, beta, 1.0)
        for k in (0.6, 1.0, 1.4):
            kind = 1 if k >= 1 else -1
            p = price_dbs(kind, k, 1.0, m, 1.0)
            assert dbs_ivol(p, kind, k, 1.0, beta, 1.0, 1.0) == pytest.approx(0.4, rel=1e-9)
