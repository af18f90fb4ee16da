"""Scenario configuration: a line-oriented ``key = value`` text format.

Keys are dotted (``grid.N``, ``u1.radius``, ``check.growth``); values are JSON.
Blank lines and ``#`` comments are ignored.  The key set is closed: unknown
keys are rejected so a typo cannot silently change an experiment.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from ..evolve import DAMPED_KINDS, WAVE_KINDS
from ..numgrid import Field, Grid, dirichlet_eigenmode, integral, make_grid
from ..potential import (
    EQUATION_KINDS,
    DampingSpec,
    PotentialSpec,
    _mollifier,
    damping_from_config,
    potential_from_config,
)


class ConfigError(ValueError):
    """Invalid or unknown configuration content."""


TOP_KEYS = (
    "id",
    "title",
    "kind",
    "T",
    "safety",
    "sample_every",
    "expected",
    "guard_override",
    "boundary_threshold",
    "notes",
)
GRID_KEYS = ("dim", "L", "N")
POTENTIAL_KEYS = ("kind", "m2", "amplitude", "sigma", "alpha", "k3", "theta", "center", "radius")
DAMPING_KEYS = ("kind", "a0", "b0", "wavelength")
DATA_KEYS = ("family", "j", "center", "width", "radius", "amplitude", "mass")
DATA_FAMILIES = ("zero", "eigenmode", "gaussian-bump", "smooth-bump")
EXPECTED = ("pass", "hypothesis_violated")

# check type -> allowed parameters
CHECK_TYPES: dict[str, tuple[str, ...]] = {
    "hypothesis": ("localized",),
    "v_identity": ("C",),
    "energy_identity": ("C",),
    "shadow_energy": ("rel_tol",),
    "monotone": ("column", "rel_slack"),
    "boundary_zero": (),
    "absorption": (),
    "lemma_chain": (),
    "heat_dissipation": (),
    "power": ("column", "window", "band", "reference", "tol"),
    "sqrtlog": ("column", "window", "min_r2", "max_beta"),
    "bounded": ("column", "window", "ratio_cap", "beta_tol", "scale"),
    "asymptote": ("column", "window", "power", "target", "rel_tol"),
    "sup_ratio": ("column", "scale", "cap"),
}
DATA_SCALES = ("wave", "damped", "heat", "plate", "energy")


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully specified experiment.  Spec dicts hold JSON-compatible values."""

    id: str
    kind: str
    dim: int
    L: float
    N: int
    T: float
    potential: dict = field(default_factory=lambda: {"kind": "zero"})
    damping: dict = field(default_factory=lambda: {"kind": "zero"})
    u0: dict = field(default_factory=lambda: {"family": "zero"})
    u1: dict = field(default_factory=lambda: {"family": "zero"})
    checks: dict = field(default_factory=dict)
    title: str = ""
    safety: float = 0.9
    sample_every: int = 10
    expected: str = "pass"
    guard_override: bool = False
    boundary_threshold: float = 1e-6
    notes: str = ""

    # -- derived objects ------------------------------------------------------

    @property
    def grid(self) -> Grid:
        return make_grid(self.dim, self.L, self.N)

    def potential_spec(self) -> PotentialSpec:
        return potential_from_config(self.potential)

    def damping_spec(self, grid: Grid | None = None) -> DampingSpec:
        return damping_from_config(self.damping, grid or self.grid)

    def initial_data(self, grid: Grid | None = None) -> tuple[Field, Field]:
        grid = grid or self.grid
        return build_data(self.u0, grid), build_data(self.u1, grid)

    def support_radius(self) -> float:
        """Radius of a ball around the origin containing both data supports."""
        return max(data_support_radius(self.u0, self.L), data_support_radius(self.u1, self.L))

    # -- validation -----------------------------------------------------------

    def validate(self) -> None:
        if not self.id:
            raise ConfigError("scenario id is empty")
        if self.kind not in EQUATION_KINDS:
            raise ConfigError(f"{self.id}: unknown equation kind {self.kind!r}")
        if self.dim not in (1, 2):
            raise ConfigError(f"{self.id}: grid.dim must be 1 or 2")
        if not (isinstance(self.N, int) and self.N >= 3):
            raise ConfigError(f"{self.id}: grid.N must be an integer >= 3, got {self.N!r}")
        if not self.L > 0:
            raise ConfigError(f"{self.id}: grid.L must be positive")
        if not (math.isfinite(self.T) and self.T >= 0):
            raise ConfigError(f"{self.id}: T must be finite and nonnegative")
        if not 0 < self.safety <= 1:
            raise ConfigError(f"{self.id}: safety must lie in (0, 1]")
        if not (isinstance(self.sample_every, int) and self.sample_every >= 1):
            raise ConfigError(f"{self.id}: sample_every must be a positive integer")
        if self.expected not in EXPECTED:
            raise ConfigError(f"{self.id}: expected must be one of {EXPECTED}")
        for name, spec in (("u0", self.u0), ("u1", self.u1)):
            _validate_data(self.id, name, spec)
        for name, chk in self.checks.items():
            _validate_check(self.id, name, chk)
        grid = self.grid
        try:
            self.potential_spec().evaluate(grid)
            damp = self.damping_spec(grid)
        except (ValueError, KeyError, TypeError) as exc:
            raise ConfigError(f"{self.id}: {exc}") from exc
        if (damp.kind == "zero") == (self.kind in DAMPED_KINDS):
            raise ConfigError(
                f"{self.id}: damping.kind = {damp.kind} does not fit equation kind {self.kind}"
            )
        if self.kind in WAVE_KINDS and not self.guard_override:
            R = self.support_radius()
            if self.L < R + self.T:
                raise ConfigError(
                    f"{self.id}: finite-speed guard violated, L = {self.L} < R + T = {R + self.T} "
                    "(set guard_override = true to run anyway)"
                )

    # -- serialization --------------------------------------------------------

    def to_items(self) -> list[tuple[str, Any]]:
        items: list[tuple[str, Any]] = [("id", self.id)]
        if self.title:
            items.append(("title", self.title))
        items += [
            ("kind", self.kind),
            ("grid.dim", self.dim),
            ("grid.L", float(self.L)),
            ("grid.N", self.N),
            ("T", float(self.T)),
            ("safety", float(self.safety)),
            ("sample_every", self.sample_every),
            ("expected", self.expected),
            ("guard_override", self.guard_override),
            ("boundary_threshold", float(self.boundary_threshold)),
        ]
        for prefix, spec in (
            ("potential", self.potential),
            ("damping", self.damping),
            ("u0", self.u0),
            ("u1", self.u1),
        ):
            items += [(f"{prefix}.{k}", spec[k]) for k in sorted(spec)]
        items += [(f"check.{k}", self.checks[k]) for k in self.checks]
        if self.notes:
            items.append(("notes", self.notes))
        return items

    def dumps(self) -> str:
        lines = [f"{k} = {json.dumps(v, sort_keys=True)}" for k, v in self.to_items()]
        return "\n".join(lines) + "\n"

    def fingerprint(self) -> str:
        return hashlib.sha256(self.dumps().encode()).hexdigest()[:16]

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps())


def loads(text: str) -> ScenarioConfig:
    """Parse the text format; raises :class:`ConfigError` on any problem."""
    top: dict[str, Any] = {}
    groups: dict[str, dict[str, Any]] = {
        "grid": {},
        "potential": {},
        "damping": {},
        "u0": {},
        "u1": {},
        "check": {},
    }
    allowed = {
        "grid": GRID_KEYS,
        "potential": POTENTIAL_KEYS,
        "damping": DAMPING_KEYS,
        "u0": DATA_KEYS,
        "u1": DATA_KEYS,
    }
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        try:
            val = json.loads(value.strip())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"line {lineno}: bad JSON value for {key}: {exc.msg}") from exc
        head, dot, rest = key.partition(".")
        if not dot:
            if key not in TOP_KEYS:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            target, name = top, key
        else:
            if head not in groups or not rest or "." in rest:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            if head != "check" and rest not in allowed[head]:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            target, name = groups[head], rest
        if name in target:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        target[name] = val
    for req in ("id", "kind", "T"):
        if req not in top:
            raise ConfigError(f"missing required key {req!r}")
    for req in GRID_KEYS:
        if req not in groups["grid"]:
            raise ConfigError(f"missing required key 'grid.{req}'")
    g = groups["grid"]
    if not all(isinstance(g[k], int) and not isinstance(g[k], bool) for k in ("dim", "N")):
        raise ConfigError("grid.dim and grid.N must be integers")
    cfg = ScenarioConfig(
        id=str(top["id"]),
        title=str(top.get("title", "")),
        kind=str(top["kind"]),
        dim=g["dim"],
        L=float(g["L"]),
        N=g["N"],
        T=float(top["T"]),
        potential=groups["potential"] or {"kind": "zero"},
        damping=groups["damping"] or {"kind": "zero"},
        u0=groups["u0"] or {"family": "zero"},
        u1=groups["u1"] or {"family": "zero"},
        checks=groups["check"],
        safety=float(top.get("safety", 0.9)),
        sample_every=top.get("sample_every", 10),
        expected=str(top.get("expected", "pass")),
        guard_override=bool(top.get("guard_override", False)),
        boundary_threshold=float(top.get("boundary_threshold", 1e-6)),
        notes=str(top.get("notes", "")),
    )
    cfg.validate()
    return cfg


def load(path: str | Path) -> ScenarioConfig:
    return loads(Path(path).read_text())


def _validate_data(sid: str, name: str, spec: dict) -> None:
    fam = spec.get("family")
    if fam not in DATA_FAMILIES:
        raise ConfigError(f"{sid}: {name}.family must be one of {DATA_FAMILIES}, got {fam!r}")
    needed = {
        "zero": (),
        "eigenmode": ("j",),
        "gaussian-bump": ("width",),
        "smooth-bump": ("radius",),
    }[fam]
    optional = {
        "zero": (),
        "eigenmode": ("amplitude",),
        "gaussian-bump": ("center", "amplitude", "mass"),
        "smooth-bump": ("center", "amplitude", "mass"),
    }[fam]
    unknown = set(spec) - {"family", *needed, *optional}
    if unknown:
        raise ConfigError(f"{sid}: keys {sorted(unknown)} not valid for {name}.family = {fam}")
    for k in needed:
        if k not in spec:
            raise ConfigError(f"{sid}: {name}.{k} is required for family {fam}")
    for k in ("width", "radius"):
        if k in spec and not spec[k] > 0:
            raise ConfigError(f"{sid}: {name}.{k} must be positive")
    if "amplitude" in spec and "mass" in spec:
        raise ConfigError(f"{sid}: {name} sets both amplitude and mass")


def _validate_check(sid: str, name: str, chk: Any) -> None:
    if not isinstance(chk, dict) or "type" not in chk:
        raise ConfigError(f"{sid}: check.{name} must be a JSON object with a 'type'")
    typ = chk["type"]
    if typ not in CHECK_TYPES:
        raise ConfigError(f"{sid}: check.{name} has unknown type {typ!r}")
    unknown = set(chk) - {"type", *CHECK_TYPES[typ]}
    if unknown:
        raise ConfigError(f"{sid}: check.{name}: unknown parameters {sorted(unknown)}")
    if "window" in chk:
        w = chk["window"]
        if not (isinstance(w, list) and len(w) == 2 and 1 <= w[0] < w[1]):
            raise ConfigError(f"{sid}: check.{name}: window must be [t0, t1] with 1 <= t0 < t1")
    if "scale" in chk and chk["scale"] not in DATA_SCALES:
        raise ConfigError(f"{sid}: check.{name}: scale must be one of {DATA_SCALES}")


# -- initial data families -------------------------------------------------------

GAUSS_CUTOFF = 6.0  # gaussian bumps are set to exactly zero beyond 6 widths


def _center(spec: dict, dim: int) -> np.ndarray:
    c = np.atleast_1d(np.asarray(spec.get("center", 0.0), dtype=float))
    return np.broadcast_to(c, (dim,))


def build_data(spec: dict, grid: Grid) -> Field:
    """Evaluate a data family on ``grid`` (boundary entries zeroed).

    ``mass`` rescales so the discrete integral equals the given value.
    """
    fam = spec.get("family", "zero")
    if fam == "zero":
        return grid.zeros()
    if fam == "eigenmode":
        f = dirichlet_eigenmode(grid, spec["j"] if np.isscalar(spec["j"]) else tuple(spec["j"]))
        return f * float(spec.get("amplitude", 1.0))
    c = _center(spec, grid.dim)
    if fam == "gaussian-bump":
        w = float(spec["width"])
        d2 = sum((x - ci) ** 2 for x, ci in zip(grid.coords, c))
        vals = np.where(d2 < (GAUSS_CUTOFF * w) ** 2, np.exp(-d2 / w**2), 0.0)
    elif fam == "smooth-bump":
        vals = _mollifier(grid, c, float(spec["radius"]))
    else:
        raise ConfigError(f"unknown data family {fam!r}")
    f = Field(grid, vals).with_dirichlet()
    if "mass" in spec:
        m = integral(f)
        if m == 0:
            raise ConfigError("data support holds no grid nodes; cannot normalize mass")
        return f * (float(spec["mass"]) / m)
    return f * float(spec.get("amplitude", 1.0))


def data_support_radius(spec: dict, L: float) -> float:
    """Radius (from the origin) of a ball containing ``supp`` of the data."""
    fam = spec.get("family", "zero")
    if fam == "zero":
        return 0.0
    if fam == "eigenmode":
        return math.sqrt(2.0) * L  # fills the whole box
    c = float(np.linalg.norm(np.atleast_1d(np.asarray(spec.get("center", 0.0), dtype=float))))
    if fam == "gaussian-bump":
        return c + GAUSS_CUTOFF * float(spec["width"])
    return c + float(spec["radius"])
