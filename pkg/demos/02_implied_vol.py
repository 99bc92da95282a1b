"""Normal implied volatility from a price, with and without polishing.

The inversion is non-iterative for |d| <= 7.7; the optional Newton polish on
the log time value recovers machine precision deep in the wings.
"""
import numpy as np

from bachelier import bachelier_ivol, black_ivol, price_bachelier, price_black

F0, T, SIGMA = 1.0, 1.0, 0.2
d = np.array([-12.0, -7.0, -3.0, -1.0, 0.0, 1.0, 3.0, 7.0, 12.0])
k = F0 - d * SIGMA * np.sqrt(T)
kind = np.where(d <= 0, 1, -1)  # quote the out-of-the-money side
p = price_bachelier(kind, k, F0, SIGMA, T)

print("d       price        rel err (wing polish)  rel err (no polish)")
for row in zip(d, p, bachelier_ivol(p, kind, k, F0, T) / SIGMA - 1,
               bachelier_ivol(p, kind, k, F0, T, polish="none") / SIGMA - 1):
    print(f"{row[0]:+5.1f}  {row[1]:.4e}   {row[2]:+.2e}              {row[3]:+.2e}")

c = price_black(1, 1.3, 1.0, 0.25, 2.0)
print(f"\nBlack round trip at K=1.3: {black_ivol(c, 1, 1.3, 1.0, 2.0):.15f} (input 0.25)")
