"""A potential turns √t growth of the free 1D wave into a bounded L² norm.

Runs the free-wave baseline and the Gaussian-potential scenario from the
catalog, then fits ``‖u(t)‖ ~ t^β`` on the same window for both.

    python3 demos/growth_vs_boundedness.py
"""

import numpy as np

from decaylab.ratefit import fit_power
from decaylab.scenarios import get_scenario, run_scenario

for sid in ("S1", "S4"):
    rep = run_scenario(get_scenario(sid))
    s = rep.series
    fit = fit_power(s.t, s.column("l2_u"), (20, 100))
    print(f"{rep.id:24s} beta = {fit.exponent:+.3f}   ||u(100)|| = {s.column('l2_u')[-1]:.3f}")

# with V = 0 the mass of u1 keeps feeding the norm: ‖u‖² ≈ (∫u1)² t / 2
s1 = run_scenario(get_scenario("S1")).series
print("free wave ||u||^2 / t at t = 100:", round(float(s1.column("l2_u_sq")[-1] / s1.t[-1]), 4))
print("predicted (mass 2):", 2.0**2 / 2)
