"""Vanilla prices under the normal model and its lognormal relatives.

Prices a call and a put at an ATM strike and at a negative strike (allowed
only in the normal model), checks put-call parity, and shows that the
displaced model reproduces Black at beta = 1 and drifts towards the normal
model as beta shrinks.
"""
import numpy as np

from bachelier import Black, Dbs, price_bachelier, price_black, price_dbs

F0, T, SIGMA_N = 0.5, 1.0, 0.4

for k in (0.5, -0.3):
    c = price_bachelier("call", k, F0, SIGMA_N, T)
    p = price_bachelier("put", k, F0, SIGMA_N, T)
    print(f"normal K={k:+.2f}: call {c:.6f}  put {p:.6f}  parity gap {c - p - (F0 - k):.1e}")

k = np.linspace(0.5, 1.5, 5)
black = price_black(1, k, 1.0, 0.5, T)
print("\nstrike  black     dbs(b=1)  dbs(b=0.5) dbs(b=1e-3) normal(0.5)")
for beta_row in zip(k, black, *(price_dbs(1, k, 1.0, Dbs(0.5, b, 1.0), T) for b in (1.0, 0.5, 1e-3)),
                    price_bachelier(1, k, 1.0, 0.5, T)):
    print("  ".join(f"{v:.6f}" for v in beta_row))
