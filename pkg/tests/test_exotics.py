import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from bachelier import errors
from bachelier.exotics import (
    AsianSpec,
    BasketSpec,
    asian_price,
    basket_price,
    psd_factor,
    spread_price,
    spread_spec,
    uniform_grid,
)
from bachelier.vanilla import price_bachelier


def test_psd_factor_handles_singular_matrices():
    c = np.array([[1.0, 1.0], [1.0, 1.0]])
    lf = psd_factor(c)
    np.testing.assert_allclose(lf @ lf.T, c, atol=1e-15)
    with pytest.raises(errors.DomainError):
        psd_factor(np.array([[1.0, 0.9, -0.9], [0.9, 1.0, 0.9], [-0.9, 0.9, 1.0]]))


def test_basket_moments_and_price():
    spec = BasketSpec((0.5, 0.3, 0.2), (1.0, 1.2, 0.8), (0.3, 0.4, 0.2),
                      ((1.0, 0.5, 0.2), (0.5, 1.0, -0.3), (0.2, -0.3, 1.0)), 2.0)
    w, s, c = np.array(spec.weights), np.array(spec.vols), np.array(spec.corr)
    var = sum(w[i] * w[j] * c[i, j] * s[i] * s[j] for i in range(3) for j in range(3)) * 2.0
    assert spec.sd == pytest.approx(math.sqrt(var), rel=1e-14)
    assert spec.mean == pytest.approx(0.5 + 0.36 + 0.16)
    assert basket_price(1, 1.0, spec) == pytest.approx(price_bachelier(1, 1.0, spec.mean, spec.sd / math.sqrt(2.0), 2.0))


def test_single_asset_basket_is_vanilla():
    spec = BasketSpec((1.0,), (1.0,), (0.3,), ((1.0,),), 1.0)
    assert basket_price(-1, 1.1, spec) == pytest.approx(price_bachelier(-1, 1.1, 1.0, 0.3, 1.0), rel=1e-15)


def test_spread_sd_has_cross_term():
    spec = spread_spec(1.2, 1.0, 0.3, 0.25, 0.4, 1.5)
    assert spec.sd == pytest.approx(math.sqrt((0.09 - 2 * 0.4 * 0.3 * 0.25 + 0.0625) * 1.5), rel=1e-14)


def test_spread_perfect_correlation_is_intrinsic():
    assert spread_price(1, 0.1, 1.3, 1.0, 0.3, 0.3, 1.0, 1.0) == (1.3 - 1.0) - 0.1
    assert spread_price(-1, 0.1, 1.3, 1.0, 0.3, 0.3, 1.0, 1.0) == 0.0


@settings(max_examples=60, deadline=None)
@given(rho=st.floats(-1, 1), k=st.floats(-1, 1))
def test_spread_parity(rho, k):
    c = spread_price(1, k, 1.2, 1.0, 0.3, 0.25, rho, 1.0)
    p = spread_price(-1, k, 1.2, 1.0, 0.3, 0.25, rho, 1.0)
    assert c - p == pytest.approx(0.2 - k, abs=1e-14)


def test_basket_validation():
    with pytest.raises(errors.DomainError):
        BasketSpec((1.0, 1.0), (1.0,), (0.1, 0.1), np.eye(2), 1.0)
    with pytest.raises(errors.DomainError):
        BasketSpec((1.0, 1.0), (1.0, 1.0), (0.1, 0.1), [[1.0, 0.2], [0.3, 1.0]], 1.0)
    with pytest.raises(errors.DomainError):
        BasketSpec((1.0, 1.0), (1.0, 1.0), (0.1, -0.1), np.eye(2), 1.0)


def test_asian_variance_against_integral():
    # Var of (1/(T-t0)) int_t0^T W_s ds: double quadrature of min(s, u), split on the diagonal
    t0, t = 0.25, 1.0
    half, _ = integrate.dblquad(lambda u, s: u, t0, t, t0, lambda s: s, epsabs=1e-14, epsrel=1e-13)
    var = 2 * half
    assert AsianSpec(start=t0, end=t).unit_sd() == pytest.approx(math.sqrt(var) / (t - t0), rel=1e-10)
    assert AsianSpec(end=1.0).unit_sd() == pytest.approx(1 / math.sqrt(3), rel=1e-15)


def test_discrete_asian_converges_to_continuous():
    cont = asian_price(1, 1.0, 1.0, 0.5, AsianSpec(end=1.0))
    errs = [abs(asian_price(1, 1.0, 1.0, 0.5, uniform_grid(1.0, n)) / cont - 1) for n in (10, 100, 1000)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 2e-3
    one = asian_price(1, 1.0, 1.0, 0.5, AsianSpec(times=[1.0]))
    assert one == pytest.approx(price_bachelier(1, 1.0, 1.0, 0.5, 1.0), rel=1e-15)


def test_asian_validation():
    with pytest.raises(errors.DomainError):
        AsianSpec(times=[0.5, 0.4])
    with pytest.raises(errors.DomainError):
        AsianSpec(times=[0.5], end=1.0)
    with pytest.raises(errors.DomainError):
        AsianSpec(start=1.0, end=1.0)
    with pytest.raises(errors.DomainError):
        asian_price(1, 1.0, 1.0, 0.0, AsianSpec(end=1.0))
