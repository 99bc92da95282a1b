"""Seeded Monte-Carlo oracles for the closed-form prices.

Randomness comes from Philox (a counter-based 64-bit generator). Paths are
split into fixed-size blocks, each with its own child ``SeedSequence``;
uniforms are built from the raw 64-bit output and mapped to normals by the
inverse CDF. Block results are merged in block order, so a given config
reproduces the same estimate within one build.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import models
from .barrier import BarrierSpec, Direction, Knock
from .errors import DomainError
from .exotics import AsianSpec, BasketSpec, psd_factor
from .market import theta_of
from .numerics import norm_quantile

BLOCK_PATHS = 1 << 14
CEV_DEFAULT_STEPS = 500


@dataclass(frozen=True)
class McConfig:
    n_paths: int = 100_000
    n_steps: int = 1
    seed: int = 20240101
    antithetic: bool = False

    def __post_init__(self):
        if self.n_paths < 2:
            raise DomainError("n_paths must be >= 2")
        if self.n_steps < 1:
            raise DomainError("n_steps must be >= 1")
        if self.antithetic and self.n_paths % 2:
            raise DomainError("antithetic sampling needs an even n_paths")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    n_effective: int

    def zscore(self, reference):
        return (self.mean - reference) / self.stderr if self.stderr > 0 else (
            0.0 if self.mean == reference else math.inf)


class _Stream:
    """Normal variates from one Philox substream."""

    def __init__(self, seed_seq):
        self._bits = np.random.Philox(seed_seq)

    def uniform(self, n):
        raw = self._bits.random_raw(n)
        # 53-bit midpoint grid: strictly inside (0, 1)
        return ((raw >> np.uint64(11)).astype(float) + 0.5) * 2.0**-53

    def normal(self, n):
        return norm_quantile(self.uniform(n))


def _run(cfg: McConfig, block_fn):
    """Evaluate ``block_fn(stream, n_draws)`` per block and merge the samples.

    ``block_fn`` returns one sample per base draw (antithetic pairs already
    averaged, see ``_pair``), or an (n, k) array for k estimators on common
    paths, in which case a list of k estimates is returned.
    """
    n_total = cfg.n_paths // 2 if cfg.antithetic else cfg.n_paths
    n_blocks = -(-n_total // BLOCK_PATHS)
    children = np.random.SeedSequence(cfg.seed).spawn(n_blocks)
    count, mean, m2 = 0, 0.0, 0.0
    for i, child in enumerate(children):
        n = min(BLOCK_PATHS, n_total - i * BLOCK_PATHS)
        x = np.asarray(block_fn(_Stream(child), n), dtype=float)
        bm = x.mean(axis=0)
        b2 = ((x - bm) ** 2).sum(axis=0)
        # merge of (count, mean, M2), always in block order
        tot = count + n
        delta = bm - mean
        mean = mean + delta * n / tot
        m2 = m2 + b2 + delta * delta * count * n / tot
        count = tot
    stderr = np.sqrt(m2 / (count - 1) / count)
    if np.ndim(mean) == 0:
        return McEstimate(float(mean), float(stderr), count)
    return [McEstimate(float(a), float(b), count) for a, b in zip(mean, stderr)]


def _draw(stream, n, antithetic, shape_tail=()):
    """``n`` base normals, stacked with their negatives when antithetic."""
    z = stream.normal(n * int(np.prod(shape_tail, dtype=int))).reshape((n,) + tuple(shape_tail))
    return np.concatenate([z, -z]) if antithetic else z


def _pair(samples, n, antithetic):
    return 0.5 * (samples[:n] + samples[n:]) if antithetic else samples


def _terminal_sampler(model, forward, texp):
    """Map standard normals to exact terminal forwards, or None for path models."""
    sq = math.sqrt(texp)
    if isinstance(model, models.Bachelier):
        return lambda z: forward + model.sigma * sq * z
    if isinstance(model, models.Black):
        s = model.sigma * sq
        return lambda z: forward * np.exp(s * z - 0.5 * s * s)
    if isinstance(model, models.Dbs):
        if model.beta == 0.0:
            return lambda z: forward + model.shift * model.sigma * sq * z
        s = model.beta * model.sigma * sq
        d0 = model.displace(forward)
        lb = (1 - model.beta) * model.shift
        return lambda z: (d0 * np.exp(s * z - 0.5 * s * s) - lb) / model.beta
    if isinstance(model, models.Nsvh):
        if model.nu == 0.0:
            return lambda z: forward + model.sigma0 * sq * z
        nu, rho = model.nu, model.rho
        growth = math.exp(0.5 * nu * nu * texp)
        return lambda z: forward + model.sigma0 / nu * (
            np.sinh(nu * sq * z) + rho * (np.cosh(nu * sq * z) - growth))
    return None


def _cev_paths(model, forward, texp, n_steps, stream, n, antithetic):
    dt = texp / n_steps
    f = np.full(2 * n if antithetic else n, float(forward))
    vol = model.sigma * math.sqrt(dt)
    for _ in range(n_steps):
        z = _draw(stream, n, antithetic)
        alive = f > 0
        f = np.where(alive, f + vol * np.power(np.maximum(f, 0.0), model.beta) * z, 0.0)
        f = np.maximum(f, 0.0)
    return f


def _sabr_paths(model, forward, texp, n_steps, stream, n, antithetic):
    dt = texp / n_steps
    sq = math.sqrt(dt)
    m = 2 * n if antithetic else n
    f = np.full(m, float(forward))
    sig = np.full(m, float(model.sigma0))
    rho_star = math.sqrt(1 - model.rho**2)
    absorb = model.beta > 0
    for _ in range(n_steps):
        z = _draw(stream, n, antithetic, (2,))
        zv, zi = z[:, 0], z[:, 1]
        zf = model.rho * zv + rho_star * zi
        level = np.power(np.maximum(f, 0.0), model.beta) if absorb else 1.0
        f_new = f + sig * level * sq * zf
        if absorb:
            f_new = np.where(f > 0, np.maximum(f_new, 0.0), 0.0)
        f = f_new
        sig = sig * np.exp(model.nu * sq * zv - 0.5 * model.nu**2 * dt)
    return f


def mc_terminal(model, forward, texp, cfg: McConfig, stream, n):
    """Terminal forwards for ``n`` base draws (2n when antithetic)."""
    sampler = _terminal_sampler(model, forward, texp)
    if sampler is not None:
        return sampler(_draw(stream, n, cfg.antithetic))
    steps = cfg.n_steps if cfg.n_steps > 1 else CEV_DEFAULT_STEPS
    if isinstance(model, models.Cev):
        return _cev_paths(model, forward, texp, steps, stream, n, cfg.antithetic)
    if isinstance(model, models.Sabr):
        return _sabr_paths(model, forward, texp, steps, stream, n, cfg.antithetic)
    raise TypeError(f"no Monte-Carlo engine for {model!r}")


def mc_vanilla(model, kind, strike, forward, texp, cfg: McConfig = McConfig()):
    """MC price of a vanilla option.

    Bachelier, Black, DBS and NSVh sample the exact terminal law. CEV (absorbed
    at zero) and SABR are stepped in time; ``cfg.n_steps = 1`` selects the
    default of 500 steps for those.
    """
    theta = theta_of(kind)

    def block(stream, n):
        f_t = mc_terminal(model, forward, texp, cfg, stream, n)
        return _pair(np.maximum(theta * (f_t - strike), 0.0), n, cfg.antithetic)

    return _run(cfg, block)


def mc_terminal_mean(model, forward, texp, cfg: McConfig = McConfig()):
    """MC estimate of E[F_T]; a martingale check for absorbed dynamics."""
    return _run(cfg, lambda s, n: _pair(mc_terminal(model, forward, texp, cfg, s, n), n, cfg.antithetic))


def _barrier_coords(model):
    """Coordinate in which the model is a driftless-plus-constant-vol BM, and that vol."""
    if isinstance(model, models.Bachelier):
        return (lambda x: x), model.sigma
    if isinstance(model, models.Black):
        return np.log, model.sigma
    if isinstance(model, models.Dbs):
        if model.beta == 0.0:
            return (lambda x: x), model.shift * model.sigma
        return (lambda x: np.log(model.displace(x))), model.beta * model.sigma
    raise TypeError(f"barrier MC not available for {model!r}")


def mc_barrier(model, kind, spec: BarrierSpec, strike, forward, texp,
               cfg: McConfig = McConfig(n_steps=250), bridge=True):
    """MC price of a continuously monitored single barrier option.

    With ``bridge=True`` each step multiplies the path weight by the
    Brownian-bridge probability of not touching the barrier between grid
    points; ``bridge=False`` monitors only at grid points (biased high for
    knock-outs).
    """
    if cfg.n_steps < 50:
        raise DomainError("barrier MC needs at least 50 steps")
    theta = theta_of(kind)
    coord, vol = _barrier_coords(model)
    dt = texp / cfg.n_steps
    down = spec.direction is Direction.DOWN
    b = float(coord(spec.level))
    sq = math.sqrt(dt)

    def block(stream, n):
        m = 2 * n if cfg.antithetic else n
        # driving BM, mapped to the model coordinate at each grid point
        w = np.zeros(m)
        x_prev = np.full(m, float(coord(forward)))
        alive = np.ones(m)
        for i in range(cfg.n_steps):
            w = w + sq * _draw(stream, n, cfg.antithetic)
            x = _coord_path(model, forward, vol, w, (i + 1) * dt, coord)
            dist_prev = (x_prev - b) if down else (b - x_prev)
            dist = (x - b) if down else (b - x)
            inside = (dist > 0) & (dist_prev > 0)
            if bridge:
                surv = -np.expm1(-2 * np.maximum(dist_prev, 0) * np.maximum(dist, 0) / (vol * vol * dt))
                alive = alive * np.where(inside, surv, 0.0)
            else:
                alive = alive * inside
            x_prev = x
        f_t = _coord_inverse(model, x_prev)
        pay = np.maximum(theta * (f_t - strike), 0.0)
        weight = alive if spec.knock is Knock.OUT else 1.0 - alive
        return _pair(pay * weight, n, cfg.antithetic)

    return _run(cfg, block)


def _coord_path(model, forward, vol, w, t, coord):
    """Model coordinate at time t for standard BM value w (drift of the log forms included)."""
    if isinstance(model, models.Bachelier) or (isinstance(model, models.Dbs) and model.beta == 0.0):
        return forward + vol * w
    return float(coord(forward)) + vol * w - 0.5 * vol * vol * t


def _coord_inverse(model, x):
    if isinstance(model, models.Bachelier):
        return x
    if isinstance(model, models.Black):
        return np.exp(x)
    if model.beta == 0.0:
        return x
    return (np.exp(x) - (1 - model.beta) * model.shift) / model.beta


def mc_asian(kind, strike, forward, sigma, spec: AsianSpec, cfg: McConfig = McConfig(n_steps=2000),
             coarse_steps=None):
    """MC price of a fixed-strike arithmetic Asian under Bachelier dynamics.

    Discrete schedules are sampled exactly at the monitoring dates. A
    continuous window is replaced by ``cfg.n_steps`` equal right-endpoint
    dates. ``coarse_steps`` (a divisor of ``n_steps``) additionally returns
    the estimate from the same paths averaged on the coarser sub-grid.
    """
    theta = theta_of(kind)
    if spec.times is not None:
        times = spec.times
    else:
        times = spec.start + (spec.end - spec.start) * np.arange(1, cfg.n_steps + 1) / cfg.n_steps
        if spec.start > 0:
            times = np.concatenate([[spec.start], times])
    gaps = np.diff(np.concatenate([[0.0], times]))
    skip_first = spec.times is None and spec.start > 0
    if coarse_steps is not None and (spec.times is not None or cfg.n_steps % coarse_steps):
        raise DomainError("coarse_steps must divide n_steps for a continuous window")

    def averages(stream, n):
        m = 2 * n if cfg.antithetic else n
        f = np.full(m, float(forward))
        total = np.zeros(m)
        total_coarse = np.zeros(m)
        stride = cfg.n_steps // coarse_steps if coarse_steps else 0
        for j, g in enumerate(gaps):
            f = f + sigma * math.sqrt(g) * _draw(stream, n, cfg.antithetic)
            if skip_first and j == 0:
                continue
            total += f
            k = j if not skip_first else j - 1
            if stride and (k + 1) % stride == 0:
                total_coarse += f
        n_avg = len(gaps) - (1 if skip_first else 0)
        return total / n_avg, (total_coarse / coarse_steps if coarse_steps else None)

    def block(stream, n):
        avg, avg_coarse = averages(stream, n)
        pay = _pair(np.maximum(theta * (avg - strike), 0.0), n, cfg.antithetic)
        if avg_coarse is None:
            return pay
        pay_coarse = _pair(np.maximum(theta * (avg_coarse - strike), 0.0), n, cfg.antithetic)
        return np.column_stack([pay, pay_coarse])

    out = _run(cfg, block)
    return tuple(out) if coarse_steps is not None else out


def mc_basket(kind, strike, spec: BasketSpec, cfg: McConfig = McConfig()):
    """MC price of a basket option from correlated terminal normals."""
    theta = theta_of(kind)
    factor = psd_factor(spec.corr)
    scale = spec.vols * math.sqrt(spec.texp)
    dim = spec.weights.size

    def block(stream, n):
        z = _draw(stream, n, cfg.antithetic, (dim,))
        f_t = spec.forwards + (z @ factor.T) * scale
        return _pair(np.maximum(theta * (f_t @ spec.weights - strike), 0.0), n, cfg.antithetic)

    return _run(cfg, block)


def mc_spread(kind, strike, f1, f2, sigma1, sigma2, rho, texp, cfg: McConfig = McConfig()):
    spec = BasketSpec((1.0, -1.0), (f1, f2), (sigma1, sigma2), ((1.0, rho), (rho, 1.0)), texp)
    return mc_basket(kind, strike, spec, cfg)
