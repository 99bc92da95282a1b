"""CEV prices via the noncentral chi-square law, checked by absorbed Monte Carlo."""
import numpy as np

from bachelier import Cev, price_cev
from bachelier.mc_oracle import McConfig, mc_vanilla

m = Cev(0.5, 0.5)
for k in (0.0, 0.8, 1.0, 1.2):
    c, p = float(price_cev(1, k, 1.0, m, 1.0)), float(price_cev(-1, k, 1.0, m, 1.0))
    print(f"K={k:.1f}: call {c:.8f}  put {p:.8f}  parity gap {c - p - (1 - k):+.1e}")
est = mc_vanilla(m, 1, 1.0, 1.0, 1.0, McConfig(n_paths=100_000, n_steps=250, seed=3))
print(f"ATM MC with absorption: {est.mean:.6f} +/- {est.stderr:.6f}")
