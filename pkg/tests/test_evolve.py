import math

import numpy as np
import pytest

from decaylab.evolve import (
    InstabilityError,
    cfl_dt,
    discrete_cone_radius,
    initial_state,
    run_simulation,
    state_digest,
    step,
)
from decaylab.numgrid import Field, make_grid
from decaylab.potential import BumpPotential, ConstantPotential, GaussianPotential, UnitDamping

from oracles import eigenmode_error


def test_cfl_values():
    g = make_grid(1, 1.0, 101)  # h = 0.02
    assert cfl_dt(g, "wave", safety=1.0) == pytest.approx(0.02)
    assert cfl_dt(g, "heat", safety=1.0) == pytest.approx(0.0002)
    assert cfl_dt(g, "plate", safety=1.0) == pytest.approx(0.0002)
    assert cfl_dt(g, "wave", V_max=1.0) < cfl_dt(g, "wave")
    g2 = make_grid(2, 1.0, 101)
    assert cfl_dt(g2, "wave", safety=1.0) == pytest.approx(0.02 / math.sqrt(2))
    with pytest.raises(ValueError):
        cfl_dt(g, "wave", safety=1.5)
    with pytest.raises(ValueError):
        cfl_dt(g, "telegraph")


@pytest.mark.parametrize("kind", ["wave", "damped_wave", "heat", "plate", "damped_plate"])
def test_zero_data_stays_zero(kind):
    g = make_grid(1, 2.0, 41)
    s = run_simulation(g.zeros(), g.zeros(), kind, GaussianPotential(), T=1.0)
    assert np.all(s.final_state.u == 0.0)
    assert np.all(s.column("l2_u_sq") == 0.0)
    assert np.all(s.column("energy") == 0.0)


@pytest.mark.parametrize(
    "kind,kw",
    [
        ("wave", {"c1": 0.7}),
        ("heat", {"L": 2.0}),
        ("plate", {"c1": 0.7}),
        ("damped_wave", {"c1": 0.7}),
    ],
)
def test_eigenmode_oracle(kind, kw):
    assert eigenmode_error(kind, m2=1.0, h=0.02, T=10.0, **kw) <= 1e-3


def test_eigenmode_error_is_second_order_in_dt():
    e1 = eigenmode_error("wave", safety=0.8, c1=0.7)
    e2 = eigenmode_error("wave", safety=0.4, c1=0.7)
    assert e1 / e2 == pytest.approx(4.0, rel=0.1)


def test_initial_energy_matches_data_functional():
    g = make_grid(1, 10.0, 401)
    x = g.axis
    u0 = Field(g, np.exp(-(x**2))).with_dirichlet()
    u1 = Field(g, x * np.exp(-(x**2))).with_dirichlet()
    s = run_simulation(u0, u1, "wave", GaussianPotential(), T=0.0)
    assert len(s) == 1
    assert s.samples[0].energy == s.functionals.E0
    assert s.samples[0].t == 0.0


def test_runs_are_deterministic():
    g = make_grid(2, 4.0, 81)
    r2 = g.radius**2
    u0 = Field(g, np.exp(-4 * r2)).with_dirichlet()
    digests = set()
    for _ in range(3):
        s = run_simulation(u0, None, "wave", GaussianPotential(), T=2.0)
        digests.add(state_digest(s.final_state))
    assert len(digests) == 1


def test_discrete_finite_speed():
    g = make_grid(1, 20.0, 801)
    x = g.axis
    R = 1.0
    u1 = Field(g, np.where(np.abs(x) < R, np.cos(np.pi * x / 2) ** 2, 0.0)).with_dirichlet()
    s = run_simulation(g.zeros(), u1, "wave", T=5.0)
    n = s.final_state.step
    rad = discrete_cone_radius(R, n + 1, g.h)
    assert rad < g.half_width
    outside = np.abs(x) > rad + 1e-12
    assert np.all(s.final_state.u[outside] == 0.0)
    assert np.any(s.final_state.u[np.abs(x) > R + 4.0] != 0.0)


def test_finite_speed_guard():
    g = make_grid(1, 5.0, 101)
    with pytest.raises(ValueError, match="finite-speed"):
        run_simulation(g.zeros(), g.zeros(), "wave", T=10.0, support_radius=1.0)


def test_instability_detected():
    g = make_grid(1, 1.0, 51)
    x = g.axis
    u0 = Field(g, np.cos(np.pi * x / 2)).with_dirichlet()
    u0.values[1::2] *= -1.0  # seed the fastest mode
    dt = 1.5 * cfl_dt(g, "wave", safety=1.0)
    with pytest.raises(InstabilityError):
        run_simulation(u0, None, "wave", T=100.0, dt=dt)


def test_heat_l2_is_nonincreasing():
    g = make_grid(1, 20.0, 401)
    x = g.axis
    u0 = Field(g, np.exp(-(x**2)) * (1 + 0.5 * np.sin(5 * x))).with_dirichlet()
    s = run_simulation(u0, None, "heat", ConstantPotential(0.3), T=5.0)
    y = s.column("l2_u_sq")
    assert np.all(np.diff(y) <= 0.0)
    assert not s.warnings


def test_damped_shadow_energy_nonincreasing():
    g = make_grid(1, 20.0, 401)
    x = g.axis
    u0 = Field(g, np.exp(-(x**2))).with_dirichlet()
    s = run_simulation(u0, u0, "damped_wave", GaussianPotential(), UnitDamping(), T=10.0)
    sh = s.column("shadow_energy")
    assert np.all(np.diff(sh) <= 1e-14 * sh[0])
    assert sh[-1] < 0.5 * sh[0]


def test_step_respects_dirichlet():
    g = make_grid(1, 1.0, 21)
    u0 = Field(g, np.ones(g.shape)).with_dirichlet()
    V = np.zeros(g.shape)
    st = initial_state("wave", u0, None, Field(g, V), None, 0.01)
    for _ in range(5):
        st = step(st, V)
        assert st.u[0] == 0.0 and st.u[-1] == 0.0


def test_bad_arguments():
    g = make_grid(1, 2.0, 41)
    with pytest.raises(ValueError):
        run_simulation(g.zeros(), None, "wave", damping=UnitDamping())
    with pytest.raises(ValueError):
        run_simulation(g.zeros(), None, "wave", sample_every=0)
    with pytest.raises(ValueError):
        run_simulation(g.zeros(), None, "klein", BumpPotential(0.5))


def test_heat_boundary_warning():
    g = make_grid(1, 3.0, 61)
    u0 = Field(g, np.exp(-(g.axis**2))).with_dirichlet()
    with pytest.warns(UserWarning, match="boundary activity"):
        s = run_simulation(u0, None, "heat", T=5.0)
    assert s.warnings


def test_sampling_grid():
    g = make_grid(1, 2.0, 41)
    s = run_simulation(g.zeros(), None, "wave", T=1.0, sample_every=7, dt=0.01)
    assert s.final_state.step == 100
    steps = np.round(s.t / s.dt).astype(int)
    assert steps.tolist() == list(range(0, 100, 7)) + [100]
