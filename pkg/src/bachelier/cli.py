"""Command-line front end.

Subcommands: price, greeks, ivol, convert, smile, barrier, exotic, figure,
mc-check. Output is JSON on stdout by default, CSV with ``--csv``, or either
written to ``--out``. Numbers carry 12 significant digits.

Exit codes: 0 ok, 2 usage, 3 domain error, 4 I/O error, 5 Monte-Carlo
verification failure.
"""
import argparse
import csv
import dataclasses
import io
import json
import math
import sys
import warnings

import numpy as np

from . import figures, models
from .barrier import BarrierSpec, barrier_price
from .convert import (
    bachelier_to_bs_smile,
    bs_to_bachelier_smile,
    dbs_to_bachelier_smile,
    dbs_to_bs_smile,
    exact_convert,
)
from .errors import ConvergenceError, DomainError
from .exotics import AsianSpec, BasketSpec, asian_price, basket_price, spread_price, uniform_grid
from .greeks import greeks_analytic, greeks_fd
from .implied_vol import bachelier_ivol, black_ivol, dbs_ivol
from .market import discount, forward_from_spot
from .mc_oracle import McConfig, mc_asian, mc_barrier, mc_basket, mc_spread, mc_vanilla
from .smile import nsvh_sigma0_from_atm, sabr_bachelier_vol
from .vanilla import price

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_IO, EXIT_VERIFY = 0, 2, 3, 4, 5
DIGITS = 12
MODELS = ("bachelier", "bs", "black", "dbs", "cev", "sabr", "nsvh")
MC_SCENARIOS = ("vanilla", "barrier", "barrier-fig4", "asian", "basket", "spread", "nsvh", "cev", "sabr")
Z_LIMIT = 3.0
# SABR's closed form is an expansion; its error allowance in vol units
SABR_VOL_BUDGET = 0.005


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _num(x):
    """Round to 12 significant digits; NaN/inf become None."""
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.{DIGITS}g}")


def _fmt(x):
    if isinstance(x, str):
        return x
    v = _num(x)
    return "" if v is None else f"{v:.{DIGITS}g}"


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    return _num(obj)


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    return buf.getvalue()


def _report_csv(rep):
    """Flatten a JSON report to one header row and one value row."""
    flat = {"model": rep.get("model", "")}
    for key, val in rep.items():
        if key in ("model", "warnings"):
            continue
        if isinstance(val, dict):
            flat.update({f"{key}.{k}": (" ".join(_fmt(x) for x in v) if isinstance(v, list) else v)
                         for k, v in val.items()})
        elif not isinstance(val, list):
            flat[key] = val
    flat["warnings"] = "; ".join(rep.get("warnings", []))
    return _csv_text(list(flat), [[v if v is not None else "" for v in flat.values()]])


# -- argument groups ---------------------------------------------------------

def _add_market(p, strike=True, kind=True):
    if kind:
        p.add_argument("--kind", choices=("call", "put"), default="call")
    if strike:
        p.add_argument("--strike", type=float, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--forward", type=float)
    g.add_argument("--spot", type=float)
    p.add_argument("--expiry", type=float, required=True)
    p.add_argument("--rate", type=float, default=0.0)
    p.add_argument("--carry", type=float, default=0.0)


def _add_model(p, choices=MODELS, vol_required=True):
    p.add_argument("--model", choices=choices, required=True)
    p.add_argument("--vol", type=float, required=vol_required, help="sigma_N, sigma_BS, sigma_D, sigma or sigma0")
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--shift", type=float, default=None, help="DBS displacement A (default: forward)")
    p.add_argument("--rho", type=float, default=0.0)
    p.add_argument("--nu", type=float, default=0.0)


def _add_output(p):
    p.add_argument("--csv", action="store_true", help="CSV instead of JSON")
    p.add_argument("--out", default=None, help="write output to this file")


def _forward(a):
    if a.forward is not None:
        return a.forward
    return float(forward_from_spot(a.spot, a.rate, a.carry, a.expiry))


def _market_inputs(a, fwd):
    out = {"kind": getattr(a, "kind", None), "strike": getattr(a, "strike", None), "forward": fwd,
           "expiry": a.expiry, "rate": a.rate, "carry": a.carry}
    if a.spot is not None:
        out["spot"] = a.spot
    return {k: v for k, v in out.items() if v is not None}


def _build_model(a, fwd):
    name = a.model
    if name == "bachelier":
        return models.Bachelier(a.vol)
    if name in ("bs", "black"):
        return models.Black(a.vol)
    if name == "dbs":
        if a.beta is None:
            raise DomainError("--beta is required for the dbs model")
        return models.Dbs(a.vol, a.beta, fwd if a.shift is None else a.shift)
    if name == "cev":
        if a.beta is None:
            raise DomainError("--beta is required for the cev model")
        return models.Cev(a.vol, a.beta)
    if name == "sabr":
        return models.Sabr(a.vol, 0.0 if a.beta is None else a.beta, a.rho, a.nu)
    return models.Nsvh(a.vol, a.rho, a.nu)


def _model_params(model):
    return dataclasses.asdict(model)


def _with_vol(model, sigma):
    key = "sigma0" if hasattr(model, "sigma0") else "sigma"
    return dataclasses.replace(model, **{key: sigma})


def _model_vol(model):
    return model.sigma0 if hasattr(model, "sigma0") else model.sigma


def _report(model_name, inputs, undiscounted=None, rate=0.0, texp=0.0, greeks=None, **extra):
    rep = {"model": model_name, "inputs": inputs}
    if undiscounted is not None:
        rep["undiscounted"] = float(undiscounted)
        rep["discounted"] = float(discount(undiscounted, rate, texp))
    rep["greeks"] = greeks or {}
    rep.update(extra)
    rep["warnings"] = []
    return rep


# -- commands ----------------------------------------------------------------

def cmd_price(a):
    fwd = _forward(a)
    model = _build_model(a, fwd)
    p = price(model, a.kind, a.strike, fwd, a.expiry)
    inputs = {**_market_inputs(a, fwd), **_model_params(model)}
    return _report(a.model, inputs, p, a.rate, a.expiry)


def _greeks(model, kind, strike, fwd, texp):
    try:
        return greeks_analytic(model, kind, strike, fwd, texp).as_dict(), "analytic"
    except TypeError:
        def pricer(f, s, t):
            return float(price(_with_vol(model, s), kind, strike, f, t))
        return greeks_fd(pricer, fwd, _model_vol(model), texp).as_dict(), "finite_difference"


def cmd_greeks(a):
    fwd = _forward(a)
    model = _build_model(a, fwd)
    p = price(model, a.kind, a.strike, fwd, a.expiry)
    g, method = _greeks(model, a.kind, a.strike, fwd, a.expiry)
    inputs = {**_market_inputs(a, fwd), **_model_params(model)}
    return _report(a.model, inputs, p, a.rate, a.expiry, greeks=g, greeks_method=method)


def cmd_ivol(a):
    fwd = _forward(a)
    if a.discounted:
        price_fwd = float(a.price / discount(1.0, a.rate, a.expiry))
    else:
        price_fwd = a.price
    if a.model == "bachelier":
        vol = bachelier_ivol(price_fwd, a.kind, a.strike, fwd, a.expiry, polish=a.polish)
    elif a.model in ("bs", "black"):
        vol = black_ivol(price_fwd, a.kind, a.strike, fwd, a.expiry)
    else:
        if a.beta is None:
            raise DomainError("--beta is required for the dbs model")
        vol = dbs_ivol(price_fwd, a.kind, a.strike, fwd, a.beta, fwd if a.shift is None else a.shift, a.expiry)
    inputs = {**_market_inputs(a, fwd), "price": a.price}
    if a.beta is not None:
        inputs["beta"] = a.beta
    return _report(a.model, inputs, implied_vol=float(vol))


def cmd_convert(a):
    fwd = _forward(a)
    src, dst = a.source, a.target
    if src == dst:
        raise DomainError("source and target models are the same")
    if "dbs" in (src, dst) and a.beta is None:
        raise DomainError("--beta is required for dbs conversion")
    shift = fwd if a.shift is None else a.shift
    flag = False
    if a.method == "exact":
        source = _build_model(argparse.Namespace(model=src, vol=a.vol, beta=a.beta, shift=shift), fwd)
        vol = exact_convert(source, "black" if dst == "bs" else dst, a.strike, fwd, a.expiry, a.beta, shift)
    elif (src, dst) == ("bs", "bachelier"):
        vol = bs_to_bachelier_smile(a.strike, a.vol, fwd, a.expiry, variant=a.variant)
    elif (src, dst) == ("bachelier", "bs"):
        vol, flag = bachelier_to_bs_smile(a.strike, a.vol, fwd, a.expiry, return_flag=True)
    elif (src, dst) == ("dbs", "bachelier"):
        vol = dbs_to_bachelier_smile(a.strike, a.vol, a.beta, shift, fwd, a.expiry)
    elif (src, dst) == ("dbs", "bs"):
        vol, flag = dbs_to_bs_smile(a.strike, a.vol, a.beta, shift, fwd, a.expiry, return_flag=True)
    else:
        raise DomainError(f"no closed-form conversion from {src} to {dst}; use --method exact")
    inputs = {"strike": a.strike, "forward": fwd, "expiry": a.expiry, "vol": a.vol, "from": src, "to": dst,
              "method": a.method}
    if a.beta is not None:
        inputs["beta"] = a.beta
    return _report(dst, inputs, vol=float(vol), lee_bound_warning=bool(flag))


def _smile_rows(model, strikes, fwd, texp):
    rows = []
    for k in strikes:
        kind = 1 if k >= fwd else -1
        p = float(price(model, kind, k, fwd, texp))
        try:
            vn = bachelier_ivol(p, kind, k, fwd, texp)
        except DomainError:
            vn = math.nan
        try:
            vb = black_ivol(p, kind, k, fwd, texp) if k > 0 and fwd > 0 else math.nan
        except (DomainError, ConvergenceError):
            vb = math.nan
        rows.append([k, vn, vb])
    return rows


def cmd_smile(a):
    fwd = _forward(a)
    model = _build_model(a, fwd)
    if not a.n >= 2 or not a.kmin < a.kmax:
        raise DomainError("smile grid needs n >= 2 and kmin < kmax")
    strikes = np.linspace(a.kmin, a.kmax, a.n)
    rows = _smile_rows(model, strikes, fwd, a.expiry)
    header = ["strike", "bachelier_vol", "bs_vol"]
    if a.csv:
        return ("csv", header, rows)
    inputs = {**_market_inputs(a, fwd), **_model_params(model), "kmin": a.kmin, "kmax": a.kmax, "n": a.n}
    return _report(a.model, inputs, rows=[dict(zip(header, r)) for r in rows])


def cmd_barrier(a):
    fwd = _forward(a)
    model = _build_model(a, fwd)
    if not isinstance(model, (models.Bachelier, models.Black, models.Dbs)):
        raise DomainError("barrier pricing supports bachelier, bs and dbs")
    spec = BarrierSpec(a.direction, a.knock, a.level)
    p, status = barrier_price(model, a.kind, spec, a.strike, fwd, a.expiry, with_status=True)
    inputs = {**_market_inputs(a, fwd), **_model_params(model), "direction": a.direction, "knock": a.knock,
              "level": a.level}
    return _report(a.model, inputs, p, a.rate, a.expiry, status=status.value)


def _floats(text, name):
    try:
        return [float(x) for x in text.split(",")]
    except (AttributeError, ValueError):
        raise DomainError(f"--{name} must be a comma-separated list of numbers") from None


def cmd_exotic(a):
    texp = a.expiry
    if a.type == "basket":
        w, f, s = _floats(a.weights, "weights"), _floats(a.forwards, "forwards"), _floats(a.vols, "vols")
        c = _floats(a.corr, "corr")
        n = len(w)
        if len(c) != n * n:
            raise DomainError("--corr must hold n*n entries in row-major order")
        spec = BasketSpec(w, f, s, np.reshape(c, (n, n)), texp)
        p = basket_price(a.kind, a.strike, spec)
        inputs = {"weights": w, "forwards": f, "vols": s, "corr": c}
    elif a.type == "spread":
        for name in ("f1", "f2", "vol1", "vol2"):
            if getattr(a, name) is None:
                raise DomainError(f"--{name} is required for a spread option")
        p = spread_price(a.kind, a.strike, a.f1, a.f2, a.vol1, a.vol2, a.rho, texp)
        inputs = {"f1": a.f1, "f2": a.f2, "vol1": a.vol1, "vol2": a.vol2, "rho": a.rho}
    else:
        if a.forward is None or a.vol is None:
            raise DomainError("--forward and --vol are required for an Asian option")
        spec = uniform_grid(texp, a.fixings) if a.fixings else AsianSpec(start=a.start, end=texp)
        p = asian_price(a.kind, a.strike, a.forward, a.vol, spec)
        inputs = {"forward": a.forward, "vol": a.vol, "fixings": a.fixings, "start": a.start}
    inputs = {"type": a.type, "kind": a.kind, "strike": a.strike, "expiry": texp, "rate": a.rate, **inputs}
    return _report("bachelier", inputs, p, a.rate, texp)


def cmd_figure(a):
    header, rows = figures.FIGURES[a.id]()
    return ("csv", header, rows.tolist())


# -- Monte-Carlo cross-checks -------------------------------------------------

def _check(label, closed, est, extra_sd=0.0):
    sd = math.hypot(est.stderr, extra_sd)
    z = (est.mean - closed) / sd if sd > 0 else (0.0 if est.mean == closed else math.inf)
    return {"check": label, "closed_form": closed, "mc_mean": est.mean, "stderr": est.stderr, "z": z,
            "pass": bool(abs(z) <= Z_LIMIT)}


def _positive_vol(vol, default):
    v = default if vol is None else vol
    if not v > 0:
        raise DomainError("volatility must be > 0")
    return v


def _mc_checks(scenario, seed, n_paths, vol):
    if scenario in ("barrier", "barrier-fig4"):
        mods = figures.fig4_models()
        if vol is not None:
            _positive_vol(vol, None)
            mods = [_with_vol(m, vol) for m in mods]
        cfg = McConfig(n_paths=n_paths or 200_000, n_steps=250, seed=seed)
        out = []
        for m, lab in zip(mods, figures.BETA_LABELS):
            for kind, spec in ((-1, BarrierSpec("down", "out", 0.6)), (1, BarrierSpec("up", "out", 1.5))):
                closed = barrier_price(m, kind, spec, 1.0, 1.0, 1.0)
                est = mc_barrier(m, kind, spec, 1.0, 1.0, 1.0, cfg)
                name = "do_put_L0.6" if kind < 0 else "uo_call_H1.5"
                out.append(_check(f"{name}_beta_{lab}", closed, est))
        return out
    if scenario == "vanilla":
        s = _positive_vol(vol, 0.5)
        cfg = McConfig(n_paths=n_paths or 200_000, seed=seed)
        mods = (("bachelier", models.Bachelier(s)), ("bs", models.Black(s)), ("dbs_1_3", models.Dbs(s, 1 / 3, 1.0)))
        return [_check(f"call_K1.1_{lab}", float(price(m, 1, 1.1, 1.0, 1.0)), mc_vanilla(m, 1, 1.1, 1.0, 1.0, cfg))
                for lab, m in mods]
    if scenario == "asian":
        s = _positive_vol(vol, 0.5)
        cfg = McConfig(n_paths=n_paths or 100_000, n_steps=250, seed=seed)
        spec = uniform_grid(1.0, 250)
        return [_check("asian_call_K1_N250", asian_price(1, 1.0, 1.0, s, spec), mc_asian(1, 1.0, 1.0, s, spec, cfg))]
    if scenario == "basket":
        s = _positive_vol(vol, 0.3)
        spec = BasketSpec((0.5, 0.3, 0.2), (1.0, 1.2, 0.8), (s, 0.4, 0.2),
                          ((1.0, 0.5, 0.2), (0.5, 1.0, -0.3), (0.2, -0.3, 1.0)), 1.0)
        cfg = McConfig(n_paths=n_paths or 1_000_000, seed=seed)
        return [_check("basket_call_K1", basket_price(1, 1.0, spec), mc_basket(1, 1.0, spec, cfg))]
    if scenario == "spread":
        s = _positive_vol(vol, 0.3)
        cfg = McConfig(n_paths=n_paths or 1_000_000, seed=seed)
        closed = spread_price(1, 0.1, 1.2, 1.0, s, 0.25, 0.4, 1.0)
        return [_check("spread_call_K0.1", closed, mc_spread(1, 0.1, 1.2, 1.0, s, 0.25, 0.4, 1.0, cfg))]
    if scenario == "nsvh":
        p = figures.PRESETS["fig5"].params
        atm = _positive_vol(vol, p["sigma_atm"])
        m = models.Nsvh(nsvh_sigma0_from_atm(atm, p["rho"], p["nu"], 1.0), p["rho"], p["nu"])
        cfg = McConfig(n_paths=n_paths or 10_000_000, seed=seed)
        return [_check(f"nsvh_call_K{k:g}", float(price(m, 1, k, 100.0, 1.0)), mc_vanilla(m, 1, k, 100.0, 1.0, cfg))
                for k in (110.0,)]
    if scenario == "cev":
        s = _positive_vol(vol, 0.5)
        m = models.Cev(s, 0.5)
        cfg = McConfig(n_paths=n_paths or 200_000, n_steps=500, seed=seed)
        return [_check("cev_call_K1", float(price(m, 1, 1.0, 1.0, 1.0)), mc_vanilla(m, 1, 1.0, 1.0, 1.0, cfg))]
    # sabr
    s = _positive_vol(vol, 0.5)
    m = models.Sabr(s, 0.5, -0.3, 0.4)
    cfg = McConfig(n_paths=n_paths or 100_000, n_steps=500, seed=seed)
    vn = float(sabr_bachelier_vol(1.2, 1.0, m, 1.0))
    vega = float(greeks_analytic(models.Bachelier(vn), 1, 1.2, 1.0, 1.0).vega)
    closed = float(price(m, 1, 1.2, 1.0, 1.0))
    return [_check("sabr_call_K1.2", closed, mc_vanilla(m, 1, 1.2, 1.0, 1.0, cfg), SABR_VOL_BUDGET * vn * vega)]


def cmd_mc_check(a):
    if a.paths is not None and a.paths < 2:
        raise DomainError("--paths must be >= 2")
    checks = _mc_checks(a.scenario, a.seed, a.paths, a.vol)
    ok = all(c["pass"] for c in checks)
    inputs = {"scenario": a.scenario, "seed": a.seed, "paths": a.paths, "vol": a.vol}
    if a.csv:
        header = list(checks[0])
        return ("csv", header, [[(str(v).lower() if isinstance(v, bool) else v) for v in c.values()] for c in checks],
                EXIT_OK if ok else EXIT_VERIFY)
    rep = _report("mc-check", {k: v for k, v in inputs.items() if v is not None}, checks=checks, passed=ok)
    return rep, (EXIT_OK if ok else EXIT_VERIFY)


# -- parser and dispatch -------------------------------------------------------

def build_parser():
    p = _Parser(prog="bachelier", description="Bachelier-model pricing toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("price", help="vanilla option price")
    _add_model(s)
    _add_market(s)
    _add_output(s)
    s.set_defaults(func=cmd_price)

    s = sub.add_parser("greeks", help="price and Greeks")
    _add_model(s)
    _add_market(s)
    _add_output(s)
    s.set_defaults(func=cmd_greeks)

    s = sub.add_parser("ivol", help="implied volatility from a price")
    s.add_argument("--model", choices=("bachelier", "bs", "black", "dbs"), required=True)
    s.add_argument("--price", type=float, required=True)
    s.add_argument("--discounted", action="store_true", help="the quoted price is discounted")
    s.add_argument("--beta", type=float, default=None)
    s.add_argument("--shift", type=float, default=None)
    s.add_argument("--polish", choices=("wing", "always", "none"), default="wing")
    _add_market(s)
    _add_output(s)
    s.set_defaults(func=cmd_ivol)

    s = sub.add_parser("convert", help="equivalent volatility under another model")
    s.add_argument("--from", dest="source", choices=("bachelier", "bs", "dbs"), required=True)
    s.add_argument("--to", dest="target", choices=("bachelier", "bs", "dbs"), required=True)
    s.add_argument("--vol", type=float, required=True)
    s.add_argument("--beta", type=float, default=None)
    s.add_argument("--shift", type=float, default=None)
    s.add_argument("--method", choices=("approx", "exact"), default="approx")
    s.add_argument("--variant", choices=("improved", "hkl"), default="improved")
    _add_market(s, kind=False)
    _add_output(s)
    s.set_defaults(func=cmd_convert)

    s = sub.add_parser("smile", help="strike grid of Bachelier and BS implied vols")
    _add_model(s)
    _add_market(s, strike=False, kind=False)
    s.add_argument("--kmin", type=float, required=True)
    s.add_argument("--kmax", type=float, required=True)
    s.add_argument("--n", type=int, default=21)
    _add_output(s)
    s.set_defaults(func=cmd_smile)

    s = sub.add_parser("barrier", help="single-barrier option price")
    _add_model(s, choices=("bachelier", "bs", "black", "dbs"))
    _add_market(s)
    s.add_argument("--direction", choices=("down", "up"), required=True)
    s.add_argument("--knock", choices=("out", "in"), default="out")
    s.add_argument("--level", type=float, required=True)
    _add_output(s)
    s.set_defaults(func=cmd_barrier)

    s = sub.add_parser("exotic", help="basket, spread or Asian option under Bachelier")
    s.add_argument("--type", choices=("basket", "spread", "asian"), required=True)
    s.add_argument("--kind", choices=("call", "put"), default="call")
    s.add_argument("--strike", type=float, required=True)
    s.add_argument("--expiry", type=float, required=True)
    s.add_argument("--rate", type=float, default=0.0)
    s.add_argument("--weights")
    s.add_argument("--forwards")
    s.add_argument("--vols")
    s.add_argument("--corr", help="row-major n*n entries")
    s.add_argument("--f1", type=float)
    s.add_argument("--f2", type=float)
    s.add_argument("--vol1", type=float)
    s.add_argument("--vol2", type=float)
    s.add_argument("--rho", type=float, default=0.0)
    s.add_argument("--forward", type=float)
    s.add_argument("--vol", type=float)
    s.add_argument("--fixings", type=int, default=0, help="uniform fixings; 0 averages continuously")
    s.add_argument("--start", type=float, default=0.0, help="start of a continuous averaging window")
    _add_output(s)
    s.set_defaults(func=cmd_exotic)

    s = sub.add_parser("figure", help="figure data table as CSV")
    s.add_argument("id", choices=tuple(figures.FIGURES))
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_figure, csv=True)

    s = sub.add_parser("mc-check", help="closed form against the Monte-Carlo oracle")
    s.add_argument("--scenario", choices=MC_SCENARIOS, required=True)
    s.add_argument("--seed", type=int, default=20240101)
    s.add_argument("--paths", type=int, default=None)
    s.add_argument("--vol", type=float, default=None, help="override the scenario's volatility")
    _add_output(s)
    s.set_defaults(func=cmd_mc_check)
    return p


def _render(result, as_csv):
    code = EXIT_OK
    if isinstance(result, tuple) and result and result[0] == "csv":
        if len(result) == 4:
            code = result[3]
        return _csv_text(result[1], result[2]), code
    if isinstance(result, tuple):
        result, code = result
    if as_csv:
        return _report_csv(_clean(result)), code
    return json.dumps(_clean(result), indent=2) + "\n", code


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            result = args.func(args)
    except (DomainError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    text, code = _render(result, getattr(args, "csv", False))
    if caught and text.lstrip().startswith("{"):
        rep = json.loads(text)
        rep["warnings"] = [str(w.message) for w in caught]
        text = json.dumps(rep, indent=2) + "\n"
    if args.out:
        try:
            with open(args.out, "w", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
