"""Stochastic-volatility smiles: NSVh closed form against SABR at beta = 0.

Both are anchored to the same ATM normal vol, then calibrated back from
their own noiseless quotes.
"""
import numpy as np

from bachelier import Nsvh, calibrate_smile, sabr_bachelier_vol
from bachelier.smile import nsvh_bachelier_vol, nsvh_sigma0_from_atm, sabr_vol_atm_anchored

F0, T, ATM, RHO, NU = 100.0, 1.0, 20.0, 0.1, 0.2
k = np.arange(60.0, 141.0, 10.0)
nsvh = Nsvh(nsvh_sigma0_from_atm(ATM, RHO, NU, T), RHO, NU)
v_nsvh = nsvh_bachelier_vol(k, F0, nsvh, T)
v_sabr = sabr_vol_atm_anchored(k, F0, ATM, RHO, NU, T)
print("strike  NSVh vol  SABR vol")
for row in zip(k, v_nsvh, v_sabr):
    print(f"{row[0]:6.0f}  {row[1]:.4f}   {row[2]:.4f}")

fit = calibrate_smile("nsvh", k, v_nsvh, F0, T)
print(f"\nNSVh recalibrated: sigma0 {fit.sigma0:.8f} (true {nsvh.sigma0:.8f}), rho {fit.rho:.8f}, nu {fit.nu:.8f}")
