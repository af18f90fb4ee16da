"""Regenerate the S7 reference fixture (damped wave, V = 0, energy decay).

Runs the catalog entry at doubled spatial resolution (h halved, dt follows
from the CFL rule) and stores the fitted power-law exponent of E(t).  The
S7 scenario checks its own exponent against this value +- 0.2.

    python scripts/make_s7_reference.py
"""

import dataclasses
import json
from pathlib import Path

from decaylab.evolve import run_simulation
from decaylab.ratefit import fit_power
from decaylab.scenarios import get_scenario

OUT = Path(__file__).resolve().parents[1] / "src/decaylab/scenarios/fixtures/s7_reference.json"


def main():
    base = get_scenario("S7-damped-no-potential")
    cfg = dataclasses.replace(base, N=2 * base.N - 1, sample_every=2 * base.sample_every)
    u0, u1 = cfg.initial_data()
    series = run_simulation(
        u0, u1, cfg.kind, cfg.potential_spec(), cfg.damping_spec(), T=cfg.T,
        sample_every=cfg.sample_every, safety=cfg.safety,
    )
    window = tuple(base.checks["energy_decay"]["window"])
    fit = fit_power(series.t, series.column("energy"), window)
    ref = {
        "scenario": base.id,
        "column": "energy",
        "window": list(window),
        "exponent": round(fit.exponent, 6),
        "r_squared": round(fit.r_squared, 8),
        "slope_se": float(f"{fit.slope_se:.3e}"),
        "grid": {"dim": cfg.dim, "L": cfg.L, "N": cfg.N, "h": cfg.grid.h},
        "dt": series.dt,
        "T": cfg.T,
        "generator": "scripts/make_s7_reference.py",
    }
    OUT.write_text(json.dumps(ref, indent=2, sort_keys=True) + "\n")
    print(json.dumps(ref, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
