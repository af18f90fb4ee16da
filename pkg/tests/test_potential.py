import math

import numpy as np
import pytest

from decaylab.numgrid import Field, make_grid
from decaylab.potential import (
    BoundedDamping,
    BumpPotential,
    ConstantPotential,
    GaussianPotential,
    InversePolyPotential,
    NakaoPotential,
    TabulatedPotential,
    UnitDamping,
    ZeroDamping,
    ZeroPotential,
    check_support_hypothesis,
    compute_data_functionals,
    damping_from_config,
    eval_potential,
    potential_from_config,
    source_field,
    weighted_data_integral,
)


@pytest.fixture
def grid():
    return make_grid(1, 5.0, 201)


def test_potential_families(grid):
    x = grid.axis
    np.testing.assert_array_equal(eval_potential(ZeroPotential(), grid).values, 0.0)
    np.testing.assert_array_equal(eval_potential(ConstantPotential(2.0), grid).values, 2.0)
    np.testing.assert_allclose(eval_potential(GaussianPotential(3.0, 2.0), grid).values, 3 * np.exp(-x**2 / 4))
    np.testing.assert_allclose(eval_potential(InversePolyPotential(2.0), grid).values, 1 / (1 + x**2))
    np.testing.assert_allclose(
        eval_potential(NakaoPotential(2.0, 3.0), grid).values, 2 * (1 + np.abs(x)) ** -3.0
    )


def test_bump_is_smooth_and_compact(grid):
    V = eval_potential(BumpPotential(1.0), grid).values
    x = grid.axis
    assert np.all(V[np.abs(x) >= 1.0] == 0.0)
    assert np.all(V[np.abs(x) < 1.0] > 0.0)
    assert V.max() == pytest.approx(math.exp(-1.0))


def test_bump_must_fit_in_box(grid):
    with pytest.raises(ValueError):
        eval_potential(BumpPotential(6.0), grid)


@pytest.mark.parametrize(
    "factory",
    [
        lambda: ConstantPotential(0.0),
        lambda: GaussianPotential(-1.0),
        lambda: InversePolyPotential(-1.0),
        lambda: NakaoPotential(0.0, 1.0),
        lambda: BumpPotential(-1.0),
    ],
)
def test_invalid_parameters(factory):
    with pytest.raises(ValueError):
        factory()


def test_tabulated_rejects_negative(grid):
    bad = Field(grid, -np.ones(grid.shape))
    with pytest.raises(ValueError):
        eval_potential(TabulatedPotential(bad), grid)
    other = make_grid(1, 5.0, 11).zeros()
    with pytest.raises(ValueError):
        eval_potential(TabulatedPotential(other), grid)


def test_potential_from_config():
    assert potential_from_config({"kind": "constant", "m2": 4}) == ConstantPotential(4.0)
    assert potential_from_config({"kind": "bump", "radius": 0.5}) == BumpPotential(0.5)
    with pytest.raises(ValueError):
        potential_from_config({"kind": "gaussian", "radius": 1})
    with pytest.raises(ValueError):
        potential_from_config({"kind": "mystery"})


def test_damping(grid):
    assert isinstance(damping_from_config({"kind": "unit"}, grid), UnitDamping)
    assert isinstance(damping_from_config({}, grid), ZeroDamping)
    d = damping_from_config({"kind": "bounded", "a0": 0.5, "b0": 1.5}, grid)
    a = d.evaluate(grid)
    assert a.min() >= 0.5 and a.max() <= 1.5
    assert a.max() - a.min() > 0.9
    with pytest.raises(ValueError):
        BoundedDamping(Field(grid, np.full(grid.shape, 2.0)), 0.5, 1.5)
    with pytest.raises(ValueError):
        BoundedDamping.cosine(grid, 0.0, 1.0)


def test_weighted_integral_semantics(grid):
    V = eval_potential(BumpPotential(1.0), grid)
    zero = grid.zeros()
    assert weighted_data_integral(zero, V) == 0.0
    inside = Field(grid, np.where(np.abs(grid.axis) < 0.5, 1.0, 0.0))
    val = weighted_data_integral(inside, V)
    expected = np.sum(np.where(np.abs(grid.axis) < 0.5, 1.0 / np.where(V.values > 0, V.values, 1), 0)) * grid.h
    assert val == pytest.approx(expected, rel=1e-14)
    outside = Field(grid, np.where(np.abs(grid.axis) < 2.0, 1.0, 0.0))
    assert weighted_data_integral(outside, V) == math.inf


def test_support_hypothesis(grid):
    V = eval_potential(BumpPotential(1.0), grid)
    omega = V.values > 0
    ok = check_support_hypothesis(Field(grid, np.where(np.abs(grid.axis) < 0.5, 1.0, 0.0)), V, omega)
    assert ok.passed and ok.violations == 0 and math.isfinite(ok.integral)
    bad = check_support_hypothesis(Field(grid, np.where(np.abs(grid.axis) < 1.5, 1.0, 0.0)), V, omega)
    assert not bad.passed and bad.violations == 20


def test_source_field(grid):
    u0 = Field(grid, np.ones(grid.shape))
    u1 = Field(grid, 2 * np.ones(grid.shape))
    assert source_field(u0, u1, "wave") is u1
    assert source_field(u0, u1, "heat") is u0
    np.testing.assert_array_equal(source_field(u0, u1, "damped_wave").values, 3.0)
    a = Field(grid, 0.5 * np.ones(grid.shape))
    np.testing.assert_array_equal(source_field(u0, u1, "damped_plate", a).values, 2.5)


def test_data_functionals_consistency(grid):
    V = eval_potential(GaussianPotential(), grid)
    x = grid.axis
    u0 = Field(grid, np.exp(-4 * x**2)).with_dirichlet()
    u1 = Field(grid, np.exp(-9 * x**2)).with_dirichlet()
    f = compute_data_functionals(u0, u1, V, "damped_wave")
    assert f.lemma31_I0_sq == pytest.approx(3 * f.E0 + 0.5 * f.l2_u0_sq + f.u1_dot_u0)
    assert f.source_sq == pytest.approx(f.K0_sq)
    assert f.I0_sq == f.K0p_sq
    assert f.E0 > 0
    fw = compute_data_functionals(u0, u1, V, "wave")
    assert fw.source_sq == fw.I0_sq
    fh = compute_data_functionals(u0, u1, V, "heat")
    assert fh.source_sq == fh.K0h_sq
    with pytest.raises(ValueError):
        compute_data_functionals(u0, u1, V, "schrodinger")
