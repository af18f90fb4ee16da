"""Energy decay of the damped wave, with and without a potential.

Without a potential the 1D damped wave loses energy like ``t^(-3/2)``; a
positive Gaussian potential speeds this up so that ``(1+t)² E(t)`` stays
bounded.  Also walks the explicit-constant inequality chain for the
potential case.

    python3 demos/damped_decay.py
"""

from decaylab.ratefit import fit_power
from decaylab.scenarios import get_scenario, run_scenario

reports = {sid: run_scenario(get_scenario(sid)) for sid in ("S7", "S6")}
for rep in reports.values():
    s = rep.series
    fit = fit_power(s.t, s.column("energy"), (45, 180))
    print(f"{rep.id:24s} E(t) ~ t^{fit.exponent:.2f}  (r2 = {fit.r_squared:.5f})")

for item in reports["S6"].check("lemma_chain").details["inequalities"]:
    print(f"  {item['name']:22s} max lhs/rhs = {item['max_ratio']:.3f}")
