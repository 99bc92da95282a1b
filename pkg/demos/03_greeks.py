"""Analytic Greeks, finite-difference checks and the backbone-adjusted delta.

A BS trader who matches prices with the normal model sees a different
delta. Rotating the BS delta by the vega times the normal backbone slope
closes most of the gap.
"""
import numpy as np

from bachelier import Bachelier, Black, bachelier_ivol, delta_backbone_adjusted, greeks_analytic, greeks_fd, price

m = Bachelier(0.3)
g = greeks_analytic(m, "call", 1.1, 1.0, 0.5)
fd = greeks_fd(lambda f, s, t: float(price(Bachelier(s), 1, 1.1, f, t)), 1.0, 0.3, 0.5)
print("greek   analytic        finite diff")
for name, value in g.as_dict().items():
    print(f"{name:6s}  {value:+.10f}  {fd.as_dict()[name]:+.10f}")

print("\nstrike  delta_BS  delta_N   backbone-adjusted BS")
for k in (0.7, 0.9, 1.0, 1.1, 1.3):
    kind = 1 if k >= 1 else -1
    sn = float(bachelier_ivol(price(Black(0.5), kind, k, 1.0, 1.0), kind, k, 1.0, 1.0))
    gb = greeks_analytic(Black(0.5), 1, k, 1.0, 1.0)
    dn = greeks_analytic(Bachelier(sn), 1, k, 1.0, 1.0).delta
    print(f"{k:.1f}     {gb.delta:.4f}    {dn:.4f}    {delta_backbone_adjusted(gb.delta, gb.vega, 0.5, 1.0):.4f}")
