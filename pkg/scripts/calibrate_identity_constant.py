"""Measure residual / (dt² (1+t) scale) for every catalog scenario.

The identity tolerance constant ``IDENTITY_C`` in ``decaylab.scenarios.runner``
is set from the largest value printed here, with a safety factor of about
10.  Also confirms, for each scenario, that halving dt divides the final
residuals by about 4.

    python scripts/calibrate_identity_constant.py
"""

import dataclasses
import warnings

import numpy as np

from decaylab.evolve import cfl_dt, run_simulation
from decaylab.potential import eval_potential
from decaylab.scenarios import builtin_catalog
from decaylab.scenarios.runner import _identity_scale


def ratio_table():
    worst = {}
    for cfg in builtin_catalog():
        u0, u1 = cfg.initial_data()
        damp = cfg.damping_spec() if cfg.kind.startswith("damped") else None
        s = run_simulation(u0, u1, cfg.kind, cfg.potential_spec(), damp, T=cfg.T,
                           sample_every=cfg.sample_every, safety=cfg.safety)
        den = s.dt**2 * (1.0 + s.t) * _identity_scale(s.functionals)
        for col in ("v_residual", "energy_residual"):
            r = float(np.max(np.abs(s.column(col)) / den))
            print(f"{cfg.id:32s} {col:16s} {r:8.4f}")
            key = (cfg.kind, col)
            worst[key] = max(worst.get(key, (0.0, "")), (r, cfg.id))
    return worst


def halving(cfg, T=5.0):
    """Final-time residual ratios for dt -> dt/2 on a shortened run."""
    cfg = dataclasses.replace(cfg, T=min(cfg.T, T))
    u0, u1 = cfg.initial_data()
    damp = cfg.damping_spec() if cfg.kind.startswith("damped") else None
    V = eval_potential(cfg.potential_spec(), cfg.grid)
    out = []
    for k in range(2):
        dt = cfl_dt(cfg.grid, cfg.kind, float(V.values.max()), 0.5) / 2**k
        n = int(round(cfg.T / dt))
        s = run_simulation(u0, u1, cfg.kind, V, damp, T=cfg.T, dt=cfg.T / n, sample_every=n)
        out.append([abs(s.samples[-1].v_residual), abs(s.samples[-1].energy_residual)])
    a = np.array(out)
    return a[0] / a[1]


if __name__ == "__main__":
    warnings.simplefilter("ignore")
    worst = ratio_table()
    print()
    for (kind, col), (r, sid) in sorted(worst.items()):
        print(f"worst {kind:13s} {col:16s} {r:8.4f}  ({sid})")
    print(f"\nsuggested IDENTITY_C = {10 * max(r for r, _ in worst.values()):.1f}")
    print("\ndt-halving ratios (v, energy) on t <= 5:")
    for cfg in builtin_catalog():
        if cfg.dim == 1:
            print(f"  {cfg.id:32s} {np.round(halving(cfg), 3)}")
