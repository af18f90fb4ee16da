"""Closed-form semi-discrete solutions used as independent oracles.

On an exact Dirichlet eigenvector ``φ`` of the discrete Laplacian
(``Δ_h φ = -λ φ``) with constant potential ``m²`` every scheme reduces to
a scalar ODE in time, solved here analytically.
"""

import math

import numpy as np
from scipy.special import erf

from decaylab.evolve import cfl_dt, initial_state, step
from decaylab.numgrid import Field, dirichlet_eigenmode, laplacian_eigenvalue, make_grid


def mode_solution(kind, lam, m2, t, c0=1.0, c1=0.0):
    """Amplitude ``c(t)`` with ``c(0) = c0``, ``c'(0) = c1``."""
    if kind == "heat":
        return c0 * math.exp(-(lam + m2) * t)
    if kind in ("wave", "plate"):
        w = math.sqrt((lam if kind == "wave" else lam**2) + m2)
        return c0 * math.cos(w * t) + c1 / w * math.sin(w * t)
    if kind == "damped_wave":
        # c'' + c' + w² c = 0, underdamped for w > 1/2
        w2 = lam + m2
        mu = math.sqrt(w2 - 0.25)
        return math.exp(-t / 2) * (c0 * math.cos(mu * t) + (c1 + c0 / 2) / mu * math.sin(mu * t))
    raise ValueError(kind)


def eigenmode_error(kind, m2=1.0, h=0.02, L=1.0, T=10.0, safety=0.5, j=1, c1=0.0, every=50):
    """Max over sampled ``t ∈ [0, T]`` of ``‖u_h(t) - c(t) φ‖ / sup_s ‖c(s) φ‖``."""
    N = int(round(2 * L / h)) + 1
    grid = make_grid(1, L, N)
    phi = dirichlet_eigenmode(grid, j)
    lam = laplacian_eigenvalue(grid, j)
    V = Field(grid, np.full(grid.shape, m2))
    dt = cfl_dt(grid, kind, m2, safety)
    n = int(math.ceil(T / dt))
    dt = T / n
    u1 = None if kind == "heat" else phi * c1
    state = initial_state(kind, phi, u1, V, None, dt)
    phi_norm = math.sqrt(np.sum(phi.values**2) * grid.h)
    errs, amps = [], []
    for k in range(n + 1):
        if k % every == 0 or k == n:
            c = mode_solution(kind, lam, m2, k * dt, 1.0, c1)
            e = state.u - c * phi.values
            errs.append(math.sqrt(np.sum(e * e) * grid.h))
            amps.append(abs(c) * phi_norm)
        if k < n:
            state = step(state, V.values)
    if kind == "heat":
        # decaying solution: compare against the current amplitude
        return max(e / a for e, a in zip(errs, amps))
    return max(errs) / max(amps)


def dalembert_error(T=50.0, L=70.0, h=0.025, safety=0.9):
    """Free 1D wave from ``u0 = 0``, ``u1 = exp(-x²)`` against
    ``u(x,t) = (√π/4)(erf(x+t) - erf(x-t))``, relative L² at ``t ≈ T``."""
    from decaylab.evolve import run_simulation

    N = int(round(2 * L / h)) + 1
    grid = make_grid(1, L, N)
    x = grid.axis
    u1 = Field(grid, np.exp(-(x**2))).with_dirichlet()
    s = run_simulation(grid.zeros(), u1, "wave", T=T, sample_every=10**9, safety=safety)
    t = s.final_state.t
    exact = math.sqrt(math.pi) / 4 * (erf(x + t) - erf(x - t))
    err = s.final_state.u - exact
    return math.sqrt(np.sum(err * err) / np.sum(exact * exact)), t
