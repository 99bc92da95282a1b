"""Basket, spread and Asian options in closed form, with Monte-Carlo checks."""
from bachelier import AsianSpec, BasketSpec, asian_price, basket_price, spread_price, uniform_grid
from bachelier.mc_oracle import McConfig, mc_asian, mc_basket, mc_spread

cfg = McConfig(n_paths=200_000, seed=7)
spec = BasketSpec((0.5, 0.5), (1.0, 1.1), (0.3, 0.4), ((1.0, 0.6), (0.6, 1.0)), 1.0)
est = mc_basket(1, 1.0, spec, cfg)
print(f"basket call: closed {basket_price(1, 1.0, spec):.6f}  MC {est.mean:.6f} +/- {est.stderr:.6f}")

est = mc_spread(1, 0.1, 1.2, 1.0, 0.3, 0.25, 0.4, 1.0, cfg)
print(f"spread call: closed {spread_price(1, 0.1, 1.2, 1.0, 0.3, 0.25, 0.4, 1.0):.6f}  "
      f"MC {est.mean:.6f} +/- {est.stderr:.6f}")

grid = uniform_grid(1.0, 12)
est = mc_asian(1, 1.0, 1.0, 0.5, grid, McConfig(n_paths=200_000, seed=7))
print(f"monthly Asian call: closed {asian_price(1, 1.0, 1.0, 0.5, grid):.6f}  MC {est.mean:.6f} +/- {est.stderr:.6f}")
print(f"continuous Asian call: {asian_price(1, 1.0, 1.0, 0.5, AsianSpec(end=1.0)):.6f}")
