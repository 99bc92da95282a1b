"""Figure parameter presets and their data tables.

Each ``figN()`` returns ``(header, rows)``: a list of column names and a 2-D
float array. Everything here is deterministic; no random numbers are drawn.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import models
from .barrier import BarrierSpec, barrier_price
from .convert import bs_to_bachelier_smile, exact_convert
from .greeks import greeks_analytic
from .implied_vol import bachelier_ivol, dbs_ivol
from .numerics import norm_quantile
from .smile import nsvh_bachelier_vol, nsvh_sigma0_from_atm, sabr_vol_atm_anchored
from .vanilla import price_black

BETAS = (0.0, 1 / 3, 2 / 3, 1.0)
BETA_LABELS = ("0", "1_3", "2_3", "1")


@dataclass(frozen=True)
class FigurePreset:
    id: str
    forward: float
    texp: float
    params: dict = field(default_factory=dict)


PRESETS = {
    "fig1": FigurePreset("fig1", 1.0, 1.0, {"sigma": 0.5, "betas": BETAS}),
    "fig2": FigurePreset("fig2", 1.0, 1.0, {"sigma_bs": 2.0}),
    "fig3": FigurePreset("fig3", 1.0, 1.0, {"sigma_bs": 0.5, "betas": BETAS}),
    "fig4": FigurePreset("fig4", 1.0, 1.0, {"strike": 1.0, "atm_price": 0.2, "betas": BETAS}),
    "fig5": FigurePreset("fig5", 100.0, 1.0, {"sigma_atm": 20.0, "nu": 0.2, "rho": 0.1}),
}


def _grid(lo, hi, step):
    n = int(round((hi - lo) / step)) + 1
    return lo + step * np.arange(n)


FIG1_STRIKES = _grid(0.2, 2.0, 0.05)
FIG2_STRIKES = np.linspace(0.05, 4.0, 200)
FIG3_STRIKES = _grid(0.2, 2.5, 0.05)
FIG4_LOWER = _grid(0.3, 0.9, 0.05)
FIG4_UPPER = _grid(1.1, 2.5, 0.05)
FIG5_STRIKES = _grid(50.0, 150.0, 2.5)
FIG5_NU = (0.1, 0.2, 0.3)
FIG5_RHO = (-0.3, 0.1, 0.5)


def _model(beta, sigma, shift):
    """Bachelier for beta = 0 (normal vol ``shift * sigma``), Black for 1, DBS otherwise."""
    if beta == 0.0:
        return models.Bachelier(shift * sigma)
    if beta == 1.0:
        return models.Black(sigma)
    return models.Dbs(sigma, beta, shift)


def fig1():
    """BS implied vol of the Bachelier, DBS and BS models, exact and approximate."""
    p = PRESETS["fig1"]
    f, t, s = p.forward, p.texp, p.params["sigma"]
    k = FIG1_STRIKES
    cols, names = [k], ["strike"]
    for beta, lab in zip(BETAS, BETA_LABELS):
        cols.append(exact_convert(_model(beta, s, f), "black", k, f, t))
        names.append(f"bs_vol_beta_{lab}")
    return names, np.column_stack(cols)


def fig2():
    """Equivalent normal vol of a flat BS vol: exact, improved and HKL formulas."""
    p = PRESETS["fig2"]
    f, t, s = p.forward, p.texp, p.params["sigma_bs"]
    k = FIG2_STRIKES
    exact = exact_convert(models.Black(s), "bachelier", k, f, t)
    improved = bs_to_bachelier_smile(k, s, f, t, variant="improved")
    hkl = bs_to_bachelier_smile(k, s, f, t, variant="hkl")
    return ["strike", "exact", "improved", "hkl"], np.column_stack([k, exact, improved, hkl])


def fig3():
    """Call delta per model, each model's vol matched to the BS price at every strike."""
    p = PRESETS["fig3"]
    f, t, s = p.forward, p.texp, p.params["sigma_bs"]
    k = FIG3_STRIKES
    kinds = np.where(k >= f, 1, -1)
    target = price_black(kinds, k, f, s, t)
    cols, names = [k], ["strike"]
    for beta, lab in zip(BETAS, BETA_LABELS):
        if beta == 0.0:
            vols = bachelier_ivol(target, kinds, k, f, t) / f
        elif beta == 1.0:
            vols = np.full_like(k, s)
        else:
            vols = np.array([dbs_ivol(c, w, x, f, beta, f, t) for c, w, x in zip(target, kinds, k)])
        delta = [greeks_analytic(_model(beta, v, f), 1, x, f, t).delta for v, x in zip(vols, k)]
        cols.append(np.asarray(delta))
        names.append(f"delta_beta_{lab}")
    return names, np.column_stack(cols)


def fig4_vol(beta, atm_price=0.2, texp=1.0):
    """Vol giving the ATM price at F0 = K = A = 1 (DBS vol for 0 < beta < 1)."""
    if beta == 0.0:
        return atm_price * math.sqrt(2 * math.pi / texp)
    return 2 * float(norm_quantile(0.5 + 0.5 * beta * atm_price)) / (beta * math.sqrt(texp))


def fig4_models():
    p = PRESETS["fig4"]
    return [_model(b, fig4_vol(b, p.params["atm_price"], p.texp), p.forward) for b in BETAS]


def fig4():
    """Down-and-out put for L < 1 and up-and-out call for H > 1, per model."""
    p = PRESETS["fig4"]
    f, t, k = p.forward, p.texp, p.params["strike"]
    mods = fig4_models()
    rows = []
    for level in FIG4_LOWER:
        spec = BarrierSpec("down", "out", float(level))
        rows.append([level, -1] + [barrier_price(m, -1, spec, k, f, t) for m in mods])
    for level in FIG4_UPPER:
        spec = BarrierSpec("up", "out", float(level))
        rows.append([level, 1] + [barrier_price(m, 1, spec, k, f, t) for m in mods])
    names = ["barrier", "kind"] + [f"price_beta_{lab}" for lab in BETA_LABELS]
    return names, np.array(rows, dtype=float)


def fig5_scenarios():
    """(nu, rho) pairs: nu varied at base rho, then rho varied at base nu."""
    base = PRESETS["fig5"].params
    out = [(nu, base["rho"]) for nu in FIG5_NU]
    out += [(base["nu"], rho) for rho in FIG5_RHO if (base["nu"], rho) not in out]
    return out


def fig5():
    """ATM-anchored normal-vol smiles of NSVh and SABR (beta = 0)."""
    p = PRESETS["fig5"]
    f, t, atm = p.forward, p.texp, p.params["sigma_atm"]
    k = FIG5_STRIKES
    cols, names = [k], ["strike"]
    for nu, rho in fig5_scenarios():
        nsvh = models.Nsvh(nsvh_sigma0_from_atm(atm, rho, nu, t), rho, nu)
        cols.append(nsvh_bachelier_vol(k, f, nsvh, t))
        names.append(f"nsvh_nu{nu:g}_rho{rho:g}")
    for nu, rho in fig5_scenarios():
        cols.append(sabr_vol_atm_anchored(k, f, atm, rho, nu, t))
        names.append(f"sabr_nu{nu:g}_rho{rho:g}")
    return names, np.column_stack(cols)


FIGURES = {"fig1": fig1, "fig2": fig2, "fig3": fig3, "fig4": fig4, "fig5": fig5}
