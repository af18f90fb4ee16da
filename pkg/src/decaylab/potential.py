"""Potential and damping coefficient families, plus the weighted data integrals
``∫ |data|² / V`` that decide whether the L²-bound theorems apply."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .numgrid import Field, Grid, grad_norm_sq, inner, l2_norm_sq, laplacian

SECOND_ORDER_KINDS = ("wave", "damped_wave", "plate", "damped_plate")
EQUATION_KINDS = SECOND_ORDER_KINDS + ("heat",)


# -- potentials ---------------------------------------------------------------


@dataclass(frozen=True)
class ZeroPotential:
    kind = "zero"

    def evaluate(self, grid: Grid) -> np.ndarray:
        return np.zeros(grid.shape)


@dataclass(frozen=True)
class ConstantPotential:
    """Klein-Gordon mass term ``V ≡ m²``."""

    m2: float
    kind = "constant"

    def __post_init__(self):
        if not self.m2 > 0:
            raise ValueError("constant potential needs m2 > 0")

    def evaluate(self, grid: Grid) -> np.ndarray:
        return np.full(grid.shape, float(self.m2))


@dataclass(frozen=True)
class GaussianPotential:
    amplitude: float = 1.0
    sigma: float = 1.0
    kind = "gaussian"

    def __post_init__(self):
        if not (self.amplitude > 0 and self.sigma > 0):
            raise ValueError("gaussian potential needs amplitude > 0 and sigma > 0")

    def evaluate(self, grid: Grid) -> np.ndarray:
        return self.amplitude * np.exp(-(grid.radius**2) / self.sigma**2)


@dataclass(frozen=True)
class InversePolyPotential:
    """``(1 + |x|²)^(-alpha/2)``."""

    alpha: float
    kind = "inverse_poly"

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError("inverse_poly potential needs alpha >= 0")

    def evaluate(self, grid: Grid) -> np.ndarray:
        return (1.0 + grid.radius**2) ** (-self.alpha / 2.0)


@dataclass(frozen=True)
class NakaoPotential:
    """``k3 (1 + |x|)^(-theta)``."""

    k3: float
    theta: float
    kind = "nakao"

    def __post_init__(self):
        if not self.k3 > 0 or self.theta < 0:
            raise ValueError("nakao potential needs k3 > 0 and theta >= 0")

    def evaluate(self, grid: Grid) -> np.ndarray:
        return self.k3 * (1.0 + grid.radius) ** (-self.theta)


def _mollifier(grid: Grid, center, radius: float) -> np.ndarray:
    """``exp(-r² / (r² - |x-c|²))`` inside the open ball, exact zero outside."""
    c = np.broadcast_to(np.asarray(center, dtype=float), (grid.dim,))
    d2 = sum((x - ci) ** 2 for x, ci in zip(grid.coords, c))
    inside = d2 < radius**2
    out = np.zeros(grid.shape)
    out[inside] = np.exp(-(radius**2) / (radius**2 - d2[inside]))
    return out


@dataclass(frozen=True)
class BumpPotential:
    """Smooth compactly supported potential on the ball ``B_radius(center)``."""

    radius: float
    amplitude: float = 1.0
    center: tuple[float, ...] = (0.0,)
    kind = "bump"

    def __post_init__(self):
        if not (self.radius > 0 and self.amplitude > 0):
            raise ValueError("bump potential needs radius > 0 and amplitude > 0")

    def evaluate(self, grid: Grid) -> np.ndarray:
        c = np.broadcast_to(np.asarray(self.center, dtype=float), (grid.dim,))
        if np.any(np.abs(c) + self.radius >= grid.half_width):
            raise ValueError("bump support must lie inside the computational box")
        return self.amplitude * _mollifier(grid, c, self.radius)


@dataclass(frozen=True)
class TabulatedPotential:
    values: Field
    kind = "tabulated"

    def evaluate(self, grid: Grid) -> np.ndarray:
        if self.values.grid != grid:
            raise ValueError("tabulated potential lives on a different grid")
        if np.any(self.values.values < 0):
            raise ValueError("tabulated potential has negative entries")
        if not np.all(np.isfinite(self.values.values)):
            raise ValueError("tabulated potential has non-finite entries")
        return self.values.values.copy()


PotentialSpec = (
    ZeroPotential
    | ConstantPotential
    | GaussianPotential
    | InversePolyPotential
    | NakaoPotential
    | BumpPotential
    | TabulatedPotential
)


def eval_potential(spec: PotentialSpec, grid: Grid) -> Field:
    vals = spec.evaluate(grid)
    if np.any(vals < 0):
        raise ValueError("potential must be nonnegative")
    return Field(grid, vals)


_POTENTIAL_KEYS = {
    "zero": (),
    "constant": ("m2",),
    "gaussian": ("amplitude", "sigma"),
    "inverse_poly": ("alpha",),
    "nakao": ("k3", "theta"),
    "bump": ("center", "radius", "amplitude"),
}


def potential_from_config(cfg: Mapping[str, Any]) -> PotentialSpec:
    """Build a potential from config keys ``kind, m2, amplitude, sigma, alpha,
    k3, theta, center, radius``."""
    cfg = dict(cfg)
    kind = cfg.pop("kind", "zero")
    if kind not in _POTENTIAL_KEYS:
        raise ValueError(f"unknown potential kind {kind!r}")
    unknown = set(cfg) - set(_POTENTIAL_KEYS[kind])
    if unknown:
        raise ValueError(f"keys {sorted(unknown)} not valid for {kind} potential")
    if kind == "zero":
        return ZeroPotential()
    if kind == "constant":
        return ConstantPotential(float(cfg["m2"]))
    if kind == "gaussian":
        return GaussianPotential(float(cfg.get("amplitude", 1.0)), float(cfg.get("sigma", 1.0)))
    if kind == "inverse_poly":
        return InversePolyPotential(float(cfg["alpha"]))
    if kind == "nakao":
        return NakaoPotential(float(cfg["k3"]), float(cfg["theta"]))
    center = cfg.get("center", 0.0)
    center = tuple(float(c) for c in np.atleast_1d(center))
    return BumpPotential(float(cfg["radius"]), float(cfg.get("amplitude", 1.0)), center)


# -- damping ------------------------------------------------------------------


@dataclass(frozen=True)
class ZeroDamping:
    kind = "zero"

    def evaluate(self, grid: Grid) -> np.ndarray:
        return np.zeros(grid.shape)


@dataclass(frozen=True)
class UnitDamping:
    kind = "unit"

    def evaluate(self, grid: Grid) -> np.ndarray:
        return np.ones(grid.shape)


@dataclass(frozen=True)
class BoundedDamping:
    """Tabulated damping with ``0 < a0 <= a(x) <= b0`` at every node."""

    values: Field
    a0: float
    b0: float
    kind = "bounded"

    def __post_init__(self):
        a = self.values.values
        if not 0 < self.a0 <= self.b0:
            raise ValueError("bounded damping needs 0 < a0 <= b0")
        if np.any(a < self.a0) or np.any(a > self.b0):
            raise ValueError("damping profile leaves the band [a0, b0]")

    def evaluate(self, grid: Grid) -> np.ndarray:
        if self.values.grid != grid:
            raise ValueError("damping profile lives on a different grid")
        return self.values.values.copy()

    @classmethod
    def cosine(cls, grid: Grid, a0: float, b0: float, wavelength: float = 2 * math.pi):
        """``a(x) = (a0+b0)/2 + (b0-a0)/2 · Π cos(2π x_k / wavelength)``."""
        prof = np.ones(grid.shape)
        for c in grid.coords:
            prof = prof * np.cos(2 * math.pi * c / wavelength)
        vals = 0.5 * (a0 + b0) + 0.5 * (b0 - a0) * prof
        return cls(Field(grid, np.clip(vals, a0, b0)), a0, b0)


DampingSpec = ZeroDamping | UnitDamping | BoundedDamping


def damping_from_config(cfg: Mapping[str, Any], grid: Grid) -> DampingSpec:
    cfg = dict(cfg)
    kind = cfg.pop("kind", "zero")
    if kind == "zero" and not cfg:
        return ZeroDamping()
    if kind == "unit" and not cfg:
        return UnitDamping()
    if kind == "bounded":
        unknown = set(cfg) - {"a0", "b0", "wavelength"}
        if unknown:
            raise ValueError(f"keys {sorted(unknown)} not valid for bounded damping")
        return BoundedDamping.cosine(
            grid, float(cfg["a0"]), float(cfg["b0"]), float(cfg.get("wavelength", 2 * math.pi))
        )
    raise ValueError(f"bad damping config {dict(kind=kind, **cfg)!r}")


# -- weighted data functionals -------------------------------------------------


def weighted_data_integral(data: Field, V: Field, where: np.ndarray | None = None) -> float:
    """``h^dim Σ data² / V`` over nodes with ``data != 0``.

    Zero data contributes nothing, whatever V is there.  Nonzero data where
    V vanishes makes the integral ``inf``.  With ``where`` given, only nodes
    of that mask are summed (the ``∫_Ω`` variants).
    """
    if data.grid != V.grid:
        raise ValueError("fields live on different grids")
    d, v = data.values, V.values
    active = d != 0
    if where is not None:
        active &= where
    if np.any(v[active] <= 0):
        return math.inf
    return float(np.sum(np.where(active, d * d / np.where(active, v, 1.0), 0.0))) * (
        data.grid.cell_volume
    )


@dataclass
class SupportReport:
    passed: bool
    violations: int
    integral: float


def check_support_hypothesis(data: Field, V: Field, omega_mask: np.ndarray) -> SupportReport:
    """Is ``supp data ⊂ Ω`` with ``V > 0`` there?  Reports the ``∫_Ω`` integral."""
    outside = (data.values != 0) & ~(omega_mask & (V.values > 0))
    count = int(np.count_nonzero(outside))
    return SupportReport(
        passed=count == 0,
        violations=count,
        integral=weighted_data_integral(data, V, where=omega_mask),
    )


@dataclass
class DataFunctionals:
    """Data-dependent constants entering the hypotheses and explicit bounds.

    ``lemma31_I0_sq`` is ``3E(0) + ½‖u0‖² + (u1, u0)``; it is a different
    quantity from ``I0_sq = ∫ u1²/V``.
    """

    kind: str
    I0_sq: float
    J0_sq: float
    K0_sq: float
    L0_sq: float
    K0h_sq: float
    J0h_sq: float
    K0p_sq: float
    J0p_sq: float
    E0: float
    l2_u0_sq: float
    l2_u1_sq: float
    grad_u0_sq: float
    moment_u1: float
    u1_dot_u0: float
    lemma31_I0_sq: float
    source_sq: float = math.nan
    extras: dict = field(default_factory=dict)

    @property
    def hypothesis_sq(self) -> float:
        """Weighted integral governing the kind's theorem (``∫ source²/V``)."""
        return self.source_sq

    def as_dict(self) -> dict:
        out = {k: v for k, v in self.__dict__.items() if k != "extras"}
        out.update(self.extras)
        return out


def source_field(u0: Field, u1: Field, kind: str, a: Field | None = None) -> Field:
    """Right-hand side of the equation solved by ``v = ∫₀ᵗ u ds``.

    wave/plate: ``u1``; damped kinds: ``u1 + a u0``; heat: ``u0``.
    """
    if kind in ("wave", "plate"):
        return u1
    if kind == "heat":
        return u0
    if kind in ("damped_wave", "damped_plate"):
        a_vals = np.ones(u0.grid.shape) if a is None else a.values
        return Field(u0.grid, u1.values + a_vals * u0.values)
    raise ValueError(f"unknown equation kind {kind!r}")


def stiffness(u: Field, V: Field, kind: str) -> float:
    """``‖∇u‖² + ‖√V u‖²`` (``‖Δu‖²`` replaces the gradient for plates)."""
    pot = inner(V * u, u)
    if kind in ("plate", "damped_plate"):
        return l2_norm_sq(laplacian(u)) + pot
    return grad_norm_sq(u) + pot


def compute_data_functionals(
    u0: Field, u1: Field, V: Field, kind: str = "wave", a: Field | None = None
) -> DataFunctionals:
    if kind not in EQUATION_KINDS:
        raise ValueError(f"unknown equation kind {kind!r}")
    omega = V.values > 0
    w = weighted_data_integral
    s = u0 + u1
    l2_u1 = l2_norm_sq(u1)
    if kind in ("plate", "damped_plate"):
        stiff = l2_norm_sq(laplacian(u0))
    else:
        stiff = grad_norm_sq(u0)
    # same summation order as the sampled energy, so E(0) matches bitwise
    E0 = 0.5 * (l2_u1 + stiff + inner(V * u0, u0))
    u1u0 = inner(u1, u0)
    return DataFunctionals(
        kind=kind,
        I0_sq=w(u1, V),
        J0_sq=w(u1, V, where=omega),
        K0_sq=w(s, V),
        L0_sq=w(s, V, where=omega),
        K0h_sq=w(u0, V),
        J0h_sq=w(u0, V, where=omega),
        K0p_sq=w(u1, V),
        J0p_sq=w(u1, V, where=omega),
        E0=E0,
        l2_u0_sq=l2_norm_sq(u0),
        l2_u1_sq=l2_u1,
        grad_u0_sq=grad_norm_sq(u0),
        moment_u1=float(np.sum(u1.values)) * u1.grid.cell_volume,
        u1_dot_u0=u1u0,
        lemma31_I0_sq=3.0 * E0 + 0.5 * l2_norm_sq(u0) + u1u0,
        source_sq=w(source_field(u0, u1, kind, a), V),
        extras={"variable_damping": a is not None},
    )
