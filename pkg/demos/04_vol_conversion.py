"""Converting between BS and normal volatilities.

Compares the closed-form improved and HKL approximations with the exact
conversion (price under one model, invert under the other) for a very
high BS vol, where the approximations are stressed.
"""
import numpy as np

from bachelier import Black, bachelier_to_bs_atm, bs_to_bachelier_atm, bs_to_bachelier_smile, exact_convert

print(f"ATM: sigma_BS 0.2 -> sigma_N {bs_to_bachelier_atm(0.2, 1.0, 1.0):.8f} "
      f"-> sigma_BS {bachelier_to_bs_atm(bs_to_bachelier_atm(0.2, 1.0, 1.0), 1.0, 1.0):.12f}")

k = np.array([0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0])
exact = exact_convert(Black(2.0), "bachelier", k, 1.0, 1.0)
improved = bs_to_bachelier_smile(k, 2.0, 1.0, 1.0, "improved")
hkl = bs_to_bachelier_smile(k, 2.0, 1.0, 1.0, "hkl")
print("\nsigma_BS = 2\nstrike  exact     improved err  HKL err")
for row in zip(k, exact, improved / exact - 1, hkl / exact - 1):
    print(f"{row[0]:5.2f}   {row[1]:.5f}   {row[2]:+.3%}      {row[3]:+.3%}")
