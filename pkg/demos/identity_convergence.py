"""The integral identities hold for the discrete solution up to O(dt²).

Builds a small damped-wave problem by hand (no catalog), runs it at two time
steps, and prints the final-time residuals of the ``v``-identity and the
energy identity.  Halving dt divides both by about four.

    python3 demos/identity_convergence.py
"""

import numpy as np

from decaylab import cfl_dt, make_grid, run_simulation
from decaylab.numgrid import Field
from decaylab.potential import GaussianPotential, UnitDamping, eval_potential

grid = make_grid(1, 20.0, 401)
x = grid.axis
u0 = Field(grid, np.exp(-(x**2))).with_dirichlet()
u1 = Field(grid, -x * np.exp(-(x**2))).with_dirichlet()
V = eval_potential(GaussianPotential(), grid)

T = 5.0
dt0 = cfl_dt(grid, "damped_wave", float(V.values.max()), safety=0.5)
prev = None
for k in range(3):
    n = int(round(T / (dt0 / 2**k)))
    s = run_simulation(u0, u1, "damped_wave", V, UnitDamping(), T=T, dt=T / n, sample_every=n)
    last = s.samples[-1]
    res = np.array([abs(last.v_residual), abs(last.energy_residual)])
    line = f"dt = {s.dt:.5f}  v-residual {res[0]:.3e}  energy residual {res[1]:.3e}"
    if prev is not None:
        line += f"  ratios {prev[0] / res[0]:.2f}, {prev[1] / res[1]:.2f}"
    print(line)
    prev = res
