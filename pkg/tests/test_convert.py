import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bachelier import errors, models
from bachelier.convert import (
    bachelier_to_bs_atm,
    bachelier_to_bs_smile,
    bs_to_bachelier_atm,
    bs_to_bachelier_smile,
    dbs_to_bachelier_atm,
    dbs_to_bachelier_smile,
    dbs_to_bs_atm,
    dbs_to_bs_smile,
    exact_convert,
    lee_bound,
    lee_violation,
)
from bachelier.numerics import log_sinhc_sq
from bachelier.vanilla import price_bachelier, price_black, price_dbs


@settings(max_examples=80, deadline=None)
@given(s=st.floats(0.01, 3.0), t=st.floats(0.05, 5.0), f=st.floats(0.1, 10.0))
def test_atm_conversions_are_price_exact(s, t, f):
    sn = bs_to_bachelier_atm(s, f, t)
    assert price_bachelier(1, f, f, sn, t) == pytest.approx(price_black(1, f, f, s, t), rel=1e-13)
    assert bachelier_to_bs_atm(sn, f, t) == pytest.approx(s, rel=1e-10)


@pytest.mark.parametrize("beta", [0.0, 0.25, 2 / 3, 1.0])
def test_dbs_atm_conversions(beta):
    m = models.Dbs(0.5, beta, 1.0)
    target = price_dbs(1, 1.0, 1.0, m, 1.0)
    assert price_bachelier(1, 1.0, 1.0, dbs_to_bachelier_atm(0.5, beta, 1.0, 1.0, 1.0), 1.0) == pytest.approx(target, rel=1e-13)
    assert price_black(1, 1.0, 1.0, dbs_to_bs_atm(0.5, beta, 1.0, 1.0, 1.0), 1.0) == pytest.approx(target, rel=1e-12)


def test_atm_tiny_vol_no_cancellation():
    # 2N(x) - 1 through erf keeps full precision at x = 1e-10
    sn = bs_to_bachelier_atm(1e-10, 1.0, 1.0)
    assert sn == pytest.approx(1e-10, rel=1e-12)


def test_bs_to_bachelier_smile_accuracy_fig1_range():
    k = np.arange(0.4, 2.0001, 0.05)
    exact = exact_convert(models.Black(0.5), "bachelier", k, 1.0, 1.0)
    for variant in ("improved", "hkl"):
        approx = bs_to_bachelier_smile(k, 0.5, 1.0, 1.0, variant=variant)
        assert np.max(np.abs(approx / exact - 1)) < 2e-3


def testlog_sinhc_sq_against_mpmath():
    import mpmath
    for u in (-0.3, -0.0500001, -0.0499999, -1e-4, 1e-4, 0.03, 0.0499999, 0.0500001, 0.2, 1.5):
        with mpmath.workdps(40):
            h = mpmath.mpf(u) / 2
            ref = float(mpmath.log(mpmath.sinh(h) / h) / mpmath.mpf(u) ** 2)
        assert log_sinhc_sq(np.array(u)) == pytest.approx(ref, rel=5e-12)
    assert log_sinhc_sq(np.array(0.0)) == pytest.approx(1 / 24)
    # ATM both variants reduce to sigma F (1 - sigma^2 T / 24) to second order
    a = bs_to_bachelier_smile(1.0, 0.2, 1.0, 1.0, "improved")
    b = bs_to_bachelier_smile(1.0, 0.2, 1.0, 1.0, "hkl")
    assert a == pytest.approx(b, rel=1e-5)


def test_bachelier_to_bs_smile_and_lee_flag():
    k = np.arange(0.5, 2.0001, 0.1)
    exact = exact_convert(models.Bachelier(0.3), "black", k, 1.0, 1.0)
    approx = bachelier_to_bs_smile(k, 0.3, 1.0, 1.0)
    assert np.max(np.abs(approx / exact - 1)) < 5e-3
    # a large normal vol pushes the low-strike wing over the Lee bound
    low = np.array([0.01, 0.05, 0.2])
    with pytest.warns(errors.LeeBoundWarning):
        _, flag = bachelier_to_bs_smile(low, 1.0, 1.0, 1.0, return_flag=True)
    assert flag[0]
    # the flag only fires inside the k < 1/e wing
    assert not lee_violation(10.0, 0.5, 1.0, 1.0)
    assert lee_bound(math.exp(-2), 1.0, 2.0) == pytest.approx(math.sqrt(2.0))


def test_no_warning_inside_range():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        bachelier_to_bs_smile(np.linspace(0.5, 2, 10), 0.3, 1.0, 1.0)


def test_dbs_smile_conversions():
    k = np.arange(0.5, 2.0001, 0.1)
    for beta in (1 / 3, 2 / 3):
        m = models.Dbs(0.5, beta, 1.0)
        ex_n = exact_convert(m, "bachelier", k, 1.0, 1.0)
        ex_b = exact_convert(m, "black", k, 1.0, 1.0)
        assert np.max(np.abs(dbs_to_bachelier_smile(k, 0.5, beta, 1.0, 1.0, 1.0) / ex_n - 1)) < 2e-3
        assert np.max(np.abs(dbs_to_bs_smile(k, 0.5, beta, 1.0, 1.0, 1.0) / ex_b - 1)) < 2e-3
    # beta = 1 is the identity on BS vols, beta = 0 the Bachelier to BS map
    np.testing.assert_allclose(dbs_to_bs_smile(k, 0.4, 1.0, 1.0, 1.0, 1.0), 0.4, rtol=1e-15)
    np.testing.assert_allclose(dbs_to_bs_smile(k, 0.4, 0.0, 1.0, 1.0, 1.0), bachelier_to_bs_smile(k, 0.4, 1.0, 1.0),
                               rtol=1e-14)


def test_exact_convert_round_trip():
    k = np.array([0.7, 1.0, 1.3])
    sn = exact_convert(models.Black(0.4), "bachelier", k, 1.0, 1.0)
    back = np.array([exact_convert(models.Bachelier(s), "black", x, 1.0, 1.0) for s, x in zip(sn, k)])
    np.testing.assert_allclose(back, 0.4, rtol=1e-9)
    sd = exact_convert(models.Black(0.4), "dbs", 1.2, 1.0, 1.0, beta=1.0, shift=1.0)
    assert sd == pytest.approx(0.4, rel=1e-9)


def test_conversion_domain_errors():
    with pytest.raises(errors.DomainError):
        bachelier_to_bs_smile(0.0, 0.3, 1.0, 1.0)
    with pytest.raises(errors.DomainError):
        bs_to_bachelier_smile(1.0, 0.3, 1.0, 1.0, variant="other")
    with pytest.raises(errors.DomainError):
        exact_convert(models.Black(0.3), "sabr", 1.0, 1.0, 1.0)
    with pytest.raises(errors.DomainError):
        exact_convert(models.Black(0.3), "dbs", 1.0, 1.0, 1.0)
    with pytest.raises(errors.DomainError):
        bachelier_to_bs_atm(0.3, -1.0, 1.0)
    with pytest.raises(errors.DomainError):
        dbs_to_bs_atm(5.0, 0.0, 1.0, 1.0, 1.0)  # ATM price above the BS ceiling F0 / 2
