"""Independent reference values for the tests.

Nothing here calls the package's pricing code: prices come from adaptive
quadrature against the terminal law, scipy's noncentral chi-square, or
high-precision root finding in mpmath.
"""
import math

import mpmath
import numpy as np
from scipy import integrate, optimize, stats

Z_SPAN = 40.0


def expect_normal(payoff_of_z, kinks=()):
    """E[payoff(Z)] for Z ~ N(0, 1), splitting the range at payoff kinks."""
    edges = [-Z_SPAN] + sorted(k for k in kinks if -Z_SPAN < k < Z_SPAN) + [Z_SPAN]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        val, _ = integrate.quad(
            lambda z: payoff_of_z(z) * math.exp(-0.5 * z * z) / math.sqrt(2 * math.pi),
            a, b, epsabs=1e-15, epsrel=1e-13, limit=400,
        )
        total += val
    return total


def _vanilla(theta, strike, terminal, kink):
    return expect_normal(lambda z: max(theta * (terminal(z) - strike), 0.0), [kink])


def normal_price(theta, strike, forward, sigma, texp):
    s = sigma * math.sqrt(texp)
    return _vanilla(theta, strike, lambda z: forward + s * z, (strike - forward) / s)


def black_price(theta, strike, forward, sigma, texp):
    s = sigma * math.sqrt(texp)
    kink = (math.log(strike / forward) + 0.5 * s * s) / s
    return _vanilla(theta, strike, lambda z: forward * math.exp(s * z - 0.5 * s * s), kink)


def dbs_price(theta, strike, forward, sigma, beta, shift, texp):
    s = beta * sigma * math.sqrt(texp)
    d_f = beta * forward + (1 - beta) * shift
    d_k = beta * strike + (1 - beta) * shift
    kink = (math.log(d_k / d_f) + 0.5 * s * s) / s

    def terminal(z):
        return (d_f * math.exp(s * z - 0.5 * s * s) - (1 - beta) * shift) / beta

    return _vanilla(theta, strike, terminal, kink)


def nsvh_terminal(forward, sigma0, rho, nu, texp):
    """Johnson S_U terminal forward as a monotone function of a standard normal."""
    sq = math.sqrt(texp)
    growth = math.exp(0.5 * nu * nu * texp)
    return lambda z: forward + sigma0 / nu * (math.sinh(nu * sq * z) + rho * (math.cosh(nu * sq * z) - growth))


def nsvh_price(theta, strike, forward, sigma0, rho, nu, texp):
    term = nsvh_terminal(forward, sigma0, rho, nu, texp)
    kink = optimize.brentq(lambda z: term(z) - strike, -Z_SPAN, Z_SPAN, xtol=1e-15)
    return _vanilla(theta, strike, term, kink)


def cev_call(strike, forward, sigma, beta, texp):
    """Absorbed CEV call through scipy's noncentral chi-square."""
    a = 1.0 / (1.0 - beta)
    scale = (1 - beta) ** 2 * sigma * sigma * texp
    x = strike ** (2 * (1 - beta)) / scale
    y = forward ** (2 * (1 - beta)) / scale
    return forward * stats.ncx2.sf(x, 2 + a, y) - strike * stats.ncx2.cdf(y, a, x)


def normal_implied_vol_mp(price, theta, strike, forward, texp, dps=40):
    """Bachelier implied vol by mpmath root finding on the exact price."""
    with mpmath.workdps(dps):
        p, k, f, t = (mpmath.mpf(x) for x in (price, strike, forward, texp))

        def g(sig):
            sd = sig * mpmath.sqrt(t)
            d = theta * (f - k) / sd
            return sd * (d * mpmath.ncdf(d) + mpmath.npdf(d)) - p

        # price is increasing in sigma: plain bisection, slow but unconditional
        lo, hi = mpmath.mpf("1e-8"), mpmath.mpf(1)
        while g(hi) < 0:
            hi *= 2
        for _ in range(200):
            mid = (lo + hi) / 2
            if g(mid) < 0:
                lo = mid
            else:
                hi = mid
        return float((lo + hi) / 2)


def normal_price_mp(theta, strike, forward, sigma, texp, dps=40):
    with mpmath.workdps(dps):
        sd = mpmath.mpf(sigma) * mpmath.sqrt(mpmath.mpf(texp))
        d = theta * (mpmath.mpf(forward) - mpmath.mpf(strike)) / sd
        return float(sd * (d * mpmath.ncdf(d) + mpmath.npdf(d)))


def fd_second_difference(values):
    v = np.asarray(values, dtype=float)
    return v[2:] - 2 * v[1:-1] + v[:-2]


def sabr_h_mp(z, rho, dps=40):
    with mpmath.workdps(dps):
        z, rho = mpmath.mpf(z), mpmath.mpf(rho)
        if z == 0:
            return 1.0
        chi = mpmath.log((mpmath.sqrt(1 + 2 * rho * z + z * z) + z + rho) / (1 + rho))
        return float(z / chi)


def sabr_normal_vol_mp(strike, forward, sigma0, beta, rho, nu, texp, dps=40):
    """Equivalent normal vol of SABR from a literal high-precision transcription."""
    with mpmath.workdps(dps):
        k, f, s0, b_, r, n, t = (mpmath.mpf(x) for x in (strike, forward, sigma0, beta, rho, nu, texp))
        b = 1 - b_
        kk = k / f
        alpha = s0 / f**b
        q = (kk**b - 1) / b if b != 0 else mpmath.log(kk)
        z = n / alpha * q
        chi = mpmath.log((mpmath.sqrt(1 + 2 * r * z + z * z) + z + r) / (1 + r))
        h = z / chi if z != 0 else mpmath.mpf(1)
        log_term = mpmath.log(q * kk ** (b_ / 2) / (kk - 1)) / q**2
        corr = 1 + (log_term * alpha**2 + r / 4 * (kk**b_ - 1) / (kk - 1) * alpha * n
                    + (2 - 3 * r * r) * n * n / 24) * t
        return float(s0 * f**b_ * h * (kk - 1) / q * corr)
