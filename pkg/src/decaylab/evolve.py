"""Explicit time stepping for the wave, damped wave, heat, plate and damped
plate equations with a potential, and the driver that samples diagnostics.

Second-order kinds use leapfrog with a nodewise-implicit damping term; heat
uses the explicit two-stage Runge-Kutta (Heun) scheme, whose stability
interval on the negative real axis equals forward Euler's.  Every state also
carries ``v = ∫₀ᵗ u ds`` and a handful of running time integrals, all
accumulated with second-order (two-level average) quadrature.
"""

from __future__ import annotations

import hashlib
import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .numgrid import Field, Grid, laplacian_array
from .potential import (
    EQUATION_KINDS,
    DampingSpec,
    PotentialSpec,
    UnitDamping,
    ZeroDamping,
    ZeroPotential,
    compute_data_functionals,
    eval_potential,
    source_field,
)

log = logging.getLogger(__name__)

PLATE_KINDS = ("plate", "damped_plate")
DAMPED_KINDS = ("damped_wave", "damped_plate")
WAVE_KINDS = ("wave", "damped_wave")

BLOWUP_FACTOR = 1e6


class InstabilityError(RuntimeError):
    """Raised when a run blows up (non-finite or runaway L² norm)."""


def cfl_dt(grid: Grid, kind: str, V_max: float = 0.0, safety: float = 0.9) -> float:
    """Stable time step ``safety * dt_max`` for the explicit scheme of ``kind``.

    ``4 dim / h²`` bounds the spectral radius of the discrete Laplacian.
    """
    if V_max < 0:
        raise ValueError("V_max must be nonnegative")
    if not 0 < safety <= 1:
        raise ValueError("safety must lie in (0, 1]")
    rho = 4.0 * grid.dim / grid.h**2
    if kind in WAVE_KINDS:
        dt_max = 2.0 / math.sqrt(rho + V_max)
    elif kind == "heat":
        dt_max = 2.0 / (rho + V_max)
    elif kind in PLATE_KINDS:
        dt_max = 2.0 / math.sqrt(rho**2 + V_max)
    else:
        raise ValueError(f"unknown equation kind {kind!r}")
    return safety * dt_max


@dataclass
class EvolutionState:
    """Solution at step ``step`` (time ``step * dt``) plus running integrals.

    ``u_prev`` is ``None`` for heat.  At step 0 it holds a ghost level chosen so
    that the uniform leapfrog update reproduces the second-order Taylor start
    ``u0 + dt u1 + ½dt² u_tt(0)``.  ``lap_u`` caches ``laplacian(u)``.
    """

    kind: str
    grid: Grid
    dt: float
    step: int
    u: np.ndarray
    u_prev: np.ndarray | None
    v: np.ndarray
    lap_u: np.ndarray
    l2_u_sq: float
    a_l2_u_sq: float
    stiffness: float
    cum_l2_u_sq: float = 0.0
    cum_l2_ut_sq: float = 0.0
    cum_a_u_sq: float = 0.0
    cum_a_ut_sq: float = 0.0
    cum_stiffness: float = 0.0
    cum_weighted_ut_sq: float = 0.0
    blowup_scale: float = 0.0

    @property
    def t(self) -> float:
        return self.step * self.dt

    def field(self) -> Field:
        return Field(self.grid, self.u)


def _stiffness(kind: str, u, lap_u, Vu, h: float) -> float:
    """``-(Δu, u) + (Vu, u)``, or ``‖Δu‖² + (Vu, u)`` for plates."""
    w = h**u.ndim
    if kind in PLATE_KINDS:
        return float(np.sum(lap_u * lap_u)) * w + float(np.sum(Vu * u)) * w
    return -float(np.sum(lap_u * u)) * w + float(np.sum(Vu * u)) * w


def _force(kind: str, u, lap_u, V, h: float):
    if kind in PLATE_KINDS:
        return -laplacian_array(lap_u, h) - V * u
    return lap_u - V * u


def initial_state(
    kind: str,
    u0: Field,
    u1: Field | None,
    V: Field,
    a: Field | None,
    dt: float,
) -> EvolutionState:
    if kind not in EQUATION_KINDS:
        raise ValueError(f"unknown equation kind {kind!r}")
    grid = u0.grid
    h = grid.h
    u = u0.with_dirichlet().values
    vel = np.zeros(grid.shape) if u1 is None else u1.with_dirichlet().values
    a_vals = None if a is None else a.values
    lap_u = laplacian_array(u, h)
    Vu = V.values * u
    w = grid.cell_volume
    l2 = float(np.sum(u * u)) * w
    u_prev = None
    if kind != "heat":
        F0 = _force(kind, u, lap_u, V.values, h)
        if kind in DAMPED_KINDS:
            c = 0.5 * dt * (1.0 if a_vals is None else a_vals)
            if np.any(np.asarray(c) >= 1.0):
                raise ValueError("time step too large for the damping coefficient")
            damping = 1.0 if a_vals is None else a_vals
            u_first = u + dt * vel + 0.5 * dt * dt * (F0 - damping * vel)
            u_prev = (2.0 * u + dt * dt * F0 - (1.0 + c) * u_first) / (1.0 - c)
        else:
            u_prev = u - dt * vel + 0.5 * dt * dt * F0
    scale = max(math.sqrt(l2), math.sqrt(float(np.sum(vel * vel)) * w))
    return EvolutionState(
        kind=kind,
        grid=grid,
        dt=dt,
        step=0,
        u=u,
        u_prev=u_prev,
        v=np.zeros(grid.shape),
        lap_u=lap_u,
        l2_u_sq=l2,
        a_l2_u_sq=l2 if a_vals is None else float(np.sum(a_vals * u * u)) * w,
        stiffness=_stiffness(kind, u, lap_u, Vu, h),
        blowup_scale=scale,
    )


def _advance(state: EvolutionState, u_next: np.ndarray, V, a) -> EvolutionState:
    """Build the state at step+1 and update all running integrals."""
    grid, dt, h = state.grid, state.dt, state.grid.h
    w = grid.cell_volume
    u_next[grid.boundary_mask] = 0.0
    lap_next = laplacian_array(u_next, h)
    l2_next = float(np.sum(u_next * u_next)) * w
    if not math.isfinite(l2_next) or (
        state.blowup_scale > 0 and l2_next > (BLOWUP_FACTOR * state.blowup_scale) ** 2
    ):
        raise InstabilityError(
            f"{state.kind} run blew up at t={state.t + dt:.6g} (step {state.step + 1}): "
            f"|u|={math.sqrt(l2_next) if math.isfinite(l2_next) else l2_next:.3g}, "
            f"initial scale {state.blowup_scale:.3g}, dt={dt:.6g}, h={h:.6g}"
        )
    stiff_next = _stiffness(state.kind, u_next, lap_next, V * u_next, h)
    du = (u_next - state.u) / dt
    ut_sq = float(np.sum(du * du)) * w
    if a is None:
        a_l2_next = l2_next
        a_ut_sq = ut_sq
    else:
        a_l2_next = float(np.sum(a * u_next * u_next)) * w
        a_ut_sq = float(np.sum(a * du * du)) * w
    t_mid = (state.step + 0.5) * dt
    return EvolutionState(
        kind=state.kind,
        grid=grid,
        dt=dt,
        step=state.step + 1,
        u=u_next,
        u_prev=None if state.kind == "heat" else state.u,
        v=state.v + 0.5 * dt * (state.u + u_next),
        lap_u=lap_next,
        l2_u_sq=l2_next,
        a_l2_u_sq=a_l2_next,
        stiffness=stiff_next,
        cum_l2_u_sq=state.cum_l2_u_sq + 0.5 * dt * (state.l2_u_sq + l2_next),
        cum_l2_ut_sq=state.cum_l2_ut_sq + dt * ut_sq,
        cum_a_u_sq=state.cum_a_u_sq + 0.5 * dt * (state.a_l2_u_sq + a_l2_next),
        cum_a_ut_sq=state.cum_a_ut_sq + dt * a_ut_sq,
        cum_stiffness=state.cum_stiffness + 0.5 * dt * (state.stiffness + stiff_next),
        cum_weighted_ut_sq=state.cum_weighted_ut_sq + dt * (1.0 + t_mid) * ut_sq,
        blowup_scale=state.blowup_scale,
    )


def _values(f):
    return f.values if isinstance(f, Field) else f


def _check_kind(state: EvolutionState, allowed: tuple[str, ...]):
    if state.kind not in allowed:
        raise ValueError(f"stepper for {allowed} applied to a {state.kind} state")


def _leapfrog(state: EvolutionState, V, a) -> EvolutionState:
    F = _force(state.kind, state.u, state.lap_u, V, state.grid.h)
    dt2 = state.dt * state.dt
    if state.kind in DAMPED_KINDS:
        c = 0.5 * state.dt * (1.0 if a is None else a)
        u_next = (2.0 * state.u - state.u_prev + dt2 * F + c * state.u_prev) / (1.0 + c)
    else:
        u_next = 2.0 * state.u - state.u_prev + dt2 * F
    return _advance(state, u_next, V, a)


def step_wave(state: EvolutionState, V) -> EvolutionState:
    """Leapfrog ``u⁺ = 2u - u⁻ + dt² (Δu - V u)``."""
    _check_kind(state, ("wave",))
    return _leapfrog(state, _values(V), None)


def step_damped_wave(state: EvolutionState, V, a=None) -> EvolutionState:
    """``(1 + a dt/2) u⁺ = 2u - u⁻ + dt² (Δu - V u) + (a dt/2) u⁻``.

    ``a=None`` means unit damping.
    """
    _check_kind(state, ("damped_wave",))
    return _leapfrog(state, _values(V), None if a is None else _values(a))


def step_plate(state: EvolutionState, V) -> EvolutionState:
    _check_kind(state, ("plate",))
    return _leapfrog(state, _values(V), None)


def step_damped_plate(state: EvolutionState, V, a=None) -> EvolutionState:
    _check_kind(state, ("damped_plate",))
    return _leapfrog(state, _values(V), None if a is None else _values(a))


def step_heat(state: EvolutionState, V) -> EvolutionState:
    """One Heun step for ``u_t = Δu - V u``."""
    _check_kind(state, ("heat",))
    V = _values(V)
    h, dt = state.grid.h, state.dt
    k1 = state.lap_u - V * state.u
    u_star = state.u + dt * k1
    k2 = laplacian_array(u_star, h) - V * u_star
    return _advance(state, state.u + 0.5 * dt * (k1 + k2), V, None)


def step(state: EvolutionState, V, a=None) -> EvolutionState:
    """Dispatch on ``state.kind``."""
    if state.kind == "heat":
        return step_heat(state, V)
    if state.kind == "wave":
        return step_wave(state, V)
    if state.kind == "plate":
        return step_plate(state, V)
    if state.kind == "damped_wave":
        return step_damped_wave(state, V, a)
    return step_damped_plate(state, V, a)


def discrete_cone_radius(support_radius: float, n_steps: int, h: float) -> float:
    """Radius (max-norm) outside of which a 3/5-point leapfrog solution is
    exactly zero after ``n_steps``: the stencil moves one cell per step."""
    return support_radius + n_steps * h


def run_simulation(
    u0: Field,
    u1: Field | None,
    kind: str,
    potential: PotentialSpec | Field = ZeroPotential(),
    damping: DampingSpec | None = None,
    T: float = 10.0,
    sample_every: int = 1,
    safety: float = 0.9,
    dt: float | None = None,
    boundary_threshold: float = 1e-6,
    support_radius: float | None = None,
    fingerprint: str = "",
):
    """Advance from ``(u0, u1)`` to ``t >= T``, sampling diagnostics every
    ``sample_every`` steps and at the final step.  Returns a
    :class:`~decaylab.functionals.DiagnosticSeries`."""
    from .functionals import DiagnosticSeries, initial_sample, sample

    grid = u0.grid
    if u1 is None:
        u1 = grid.zeros()
    V = potential if isinstance(potential, Field) else eval_potential(potential, grid)
    if damping is None:
        damping = UnitDamping() if kind in DAMPED_KINDS else ZeroDamping()
    if kind in DAMPED_KINDS:
        a = None if isinstance(damping, UnitDamping) else Field(grid, damping.evaluate(grid))
        if a is not None and np.any(a.values <= 0):
            raise ValueError("damped kinds need a strictly positive damping coefficient")
    else:
        if not isinstance(damping, ZeroDamping):
            raise ValueError(f"{kind} takes no damping term")
        a = None
    if sample_every < 1:
        raise ValueError("sample_every must be >= 1")
    if dt is None:
        dt = cfl_dt(grid, kind, float(V.values.max()), safety)
    n_steps = 0 if T <= 0 else int(math.ceil(T / dt - 1e-9))
    if kind in WAVE_KINDS and support_radius is not None and n_steps > 0:
        if grid.half_width < support_radius + T:
            raise ValueError(
                f"finite-speed guard violated: L={grid.half_width} < R + T = {support_radius + T}"
            )

    u0 = u0.with_dirichlet()
    u1 = u1.with_dirichlet()
    funcs = compute_data_functionals(u0, u1, V, kind, a)
    src = source_field(u0, u1, kind, a).values
    a_vals = None if a is None else a.values

    log.debug("%s run: h=%g dt=%g steps=%d", kind, grid.h, dt, n_steps)
    state = initial_state(kind, u0, u1, V, a, dt)
    nxt = step(state, V.values, a_vals) if n_steps > 0 else None
    samples = [initial_sample(state, V.values, u0.values, u1.values, src, funcs, nxt)]
    while state.step < n_steps:
        if state.step > 0:
            nxt = step(state, V.values, a_vals)
        if state.step > 0 and state.step % sample_every == 0:
            samples.append(sample(state, nxt, V.values, a_vals, u0.values, src, funcs))
        state = nxt
    if n_steps > 0:
        nxt = step(state, V.values, a_vals)
        samples.append(sample(state, nxt, V.values, a_vals, u0.values, src, funcs))

    series = DiagnosticSeries(
        kind=kind,
        samples=samples,
        functionals=funcs,
        fingerprint=fingerprint,
        dt=dt,
        grid=grid,
        final_state=state,
    )
    peak = max(s.boundary_activity for s in samples)
    if kind not in WAVE_KINDS and peak > boundary_threshold:
        msg = (
            f"{kind} run: boundary activity {peak:.3g} exceeds {boundary_threshold:g}; "
            "the box may be too small"
        )
        series.warnings.append(msg)
        warnings.warn(msg, stacklevel=2)
    return series


def state_digest(state: EvolutionState) -> str:
    """Hash of the solution arrays, for determinism checks."""
    h = hashlib.sha256()
    for arr in (state.u, state.v):
        h.update(np.ascontiguousarray(arr).tobytes())
    return h.hexdigest()


__all__ = [
    "EvolutionState",
    "InstabilityError",
    "cfl_dt",
    "discrete_cone_radius",
    "initial_state",
    "run_simulation",
    "state_digest",
    "step",
    "step_damped_plate",
    "step_damped_wave",
    "step_heat",
    "step_plate",
    "step_wave",
]
