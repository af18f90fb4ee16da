"""Built-in scenario catalog: one experiment per theorem or claim, plus the
contrast runs that make each conclusion visible.

Expected verdicts are part of each entry (``expected``); the contrast pairs
used by ``verify_all`` are listed in :data:`CONTRASTS`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import ScenarioConfig

IDENTITIES_UNDAMPED = {
    "v_identity": {"type": "v_identity"},
    "energy_identity": {"type": "energy_identity"},
    "shadow_energy": {"type": "shadow_energy", "rel_tol": 1e-10},
}
IDENTITIES_DAMPED = {
    "v_identity": {"type": "v_identity"},
    "energy_identity": {"type": "energy_identity"},
    "dissipation": {"type": "monotone", "column": "shadow_energy"},
}
IDENTITIES_HEAT = {
    "v_identity": {"type": "v_identity"},
    "energy_identity": {"type": "energy_identity"},
    "l2_monotone": {"type": "monotone", "column": "l2_u_sq"},
}

BUMP_1D = {"family": "smooth-bump", "center": [0.0], "radius": 1.0, "mass": 2.0}
# Plate and heat runs resolve high modes poorly at the stability limit
# (omega dt or lambda dt near 2), so their data are spectrally concentrated.
GAUSS_1D = {"family": "gaussian-bump", "center": [0.0], "width": 1.0, "mass": 1.0}
GAUSS_1D_M2 = {"family": "gaussian-bump", "center": [0.0], "width": 1.0, "mass": 2.0}
GAUSS_V = {"kind": "gaussian", "amplitude": 1.0, "sigma": 1.0}


def _wave_1d(sid, title, potential, checks, u1=BUMP_1D, **kw) -> ScenarioConfig:
    # L leaves room for the discrete one-cell-per-step cone: R + T/0.9 < L
    return ScenarioConfig(
        id=sid,
        title=title,
        kind="wave",
        dim=1,
        L=115.0,
        N=4601,
        T=100.0,
        potential=potential,
        u1=u1,
        sample_every=20,
        checks=checks,
        **kw,
    )


def _damped_1d(sid, title, potential, checks, damping=None, **kw) -> ScenarioConfig:
    bump = {"family": "smooth-bump", "center": [0.0], "radius": 1.0, "mass": 1.0}
    kw.setdefault("u0", bump)
    kw.setdefault("u1", bump)
    return ScenarioConfig(
        id=sid,
        title=title,
        kind="damped_wave",
        dim=1,
        L=185.0,
        N=7401,
        T=180.0,
        potential=potential,
        damping=damping or {"kind": "unit"},
        sample_every=20,
        checks=checks,
        **kw,
    )


def _heat_1d(sid, title, potential, checks, u0=None, **kw) -> ScenarioConfig:
    return ScenarioConfig(
        id=sid,
        title=title,
        kind="heat",
        dim=1,
        L=80.0,
        N=1601,
        T=100.0,
        potential=potential,
        u0=u0 or GAUSS_1D,
        sample_every=100,
        checks=checks,
        **kw,
    )


def _plate_1d(sid, title, kind, potential, checks, **kw) -> ScenarioConfig:
    return ScenarioConfig(
        id=sid,
        title=title,
        kind=kind,
        dim=1,
        L=60.0,
        N=1201,
        T=80.0,
        potential=potential,
        sample_every=100,
        boundary_threshold=1e-3,
        checks=checks,
        **kw,
    )


def builtin_catalog() -> list[ScenarioConfig]:
    decay_window = [45.0, 180.0]
    return [
        _wave_1d(
            "S1-free-wave-1d",
            "free wave in 1D: ||u|| grows like sqrt(t)",
            {"kind": "zero"},
            {
                **IDENTITIES_UNDAMPED,
                "finite_speed": {"type": "boundary_zero"},
                "growth": {"type": "power", "column": "l2_u", "window": [20.0, 100.0], "band": [0.45, 0.55]},
                "dalembert": {
                    "type": "asymptote",
                    "column": "l2_u",
                    "window": [20.0, 100.0],
                    "power": 0.5,
                    "target": 1.4142135623730951,
                    "rel_tol": 0.05,
                },
            },
            notes="u0 = 0 and moment(u1) = 2, so ||u(t)||/sqrt(t) tends to moment/sqrt(2) = sqrt(2)",
        ),
        ScenarioConfig(
            id="S2-free-wave-2d",
            title="free wave in 2D: ||u|| grows like sqrt(log t)",
            kind="wave",
            dim=2,
            L=84.0,
            N=513,
            T=80.0,
            u1={"family": "smooth-bump", "center": [0.0, 0.0], "radius": 2.0, "mass": 1.0},
            sample_every=5,
            checks={
                **IDENTITIES_UNDAMPED,
                "log_growth": {
                    "type": "sqrtlog",
                    "column": "l2_u",
                    "window": [10.0, 80.0],
                    "min_r2": 0.9,
                    "max_beta": 0.15,
                },
            },
        ),
        ScenarioConfig(
            id="S3-klein-gordon",
            title="Klein-Gordon (V = m^2): bounded, eigenmode data",
            kind="wave",
            dim=1,
            L=5.0,
            N=501,
            T=100.0,
            potential={"kind": "constant", "m2": 1.0},
            u0={"family": "eigenmode", "j": 1},
            u1={"family": "eigenmode", "j": 2},
            sample_every=20,
            guard_override=True,
            checks={
                "hypothesis": {"type": "hypothesis"},
                **IDENTITIES_UNDAMPED,
                "absorption": {"type": "absorption"},
                "bounded": {"type": "bounded", "column": "l2_u", "window": [20.0, 100.0], "scale": "wave"},
            },
            notes="eigenmodes fill the box: the Dirichlet problem is the experiment, no truncation",
        ),
        _wave_1d(
            "S4-gaussian-potential",
            "wave with V = exp(-|x|^2): bounded L2 norm",
            GAUSS_V,
            {
                "hypothesis": {"type": "hypothesis"},
                **IDENTITIES_UNDAMPED,
                "finite_speed": {"type": "boundary_zero"},
                "absorption": {"type": "absorption"},
                "bounded": {"type": "bounded", "column": "l2_u", "window": [20.0, 100.0], "scale": "wave"},
            },
        ),
        _wave_1d(
            "S5-localized-potential",
            "wave with a bump potential on B_0.5, supp u1 inside: bounded",
            {"kind": "bump", "center": [0.0], "radius": 0.5, "amplitude": 1.0},
            {
                "hypothesis": {"type": "hypothesis", "localized": True},
                **IDENTITIES_UNDAMPED,
                "finite_speed": {"type": "boundary_zero"},
                "absorption": {"type": "absorption"},
                "bounded": {"type": "bounded", "column": "l2_u", "window": [20.0, 100.0], "scale": "wave"},
            },
            u1={"family": "smooth-bump", "center": [0.0], "radius": 0.25, "amplitude": 1.0},
        ),
        _wave_1d(
            "S5n-localized-negative-control",
            "negative control: supp u1 leaves the potential's support",
            {"kind": "bump", "center": [0.0], "radius": 0.5, "amplitude": 1.0},
            {
                "hypothesis": {"type": "hypothesis", "localized": True},
                "v_identity": {"type": "v_identity"},
                "absorption": {"type": "absorption"},
                "bounded": {"type": "bounded", "column": "l2_u", "window": [20.0, 100.0], "scale": "wave"},
            },
            u1={"family": "smooth-bump", "center": [0.0], "radius": 1.0, "amplitude": 1.0},
            expected="hypothesis_violated",
        ),
        _damped_1d(
            "S6-damped-fast-decay",
            "damped wave with V = exp(-|x|^2): (1+t)^2 E(t) bounded",
            GAUSS_V,
            {
                "hypothesis": {"type": "hypothesis"},
                **IDENTITIES_DAMPED,
                "lemma_chain": {"type": "lemma_chain"},
                "absorption": {"type": "absorption"},
                "weighted_energy": {
                    "type": "bounded",
                    "column": "weighted_energy",
                    "window": decay_window,
                    "scale": "damped",
                },
                "weighted_l2": {
                    "type": "bounded",
                    "column": "weighted_l2",
                    "window": decay_window,
                    "scale": "damped",
                },
                "energy_decay": {"type": "power", "column": "energy", "window": decay_window},
            },
        ),
        _damped_1d(
            "S7-damped-no-potential",
            "damped wave with V = 0: slower energy decay (contrast to S6)",
            {"kind": "zero"},
            {
                **IDENTITIES_DAMPED,
                "energy_decay": {
                    "type": "power",
                    "column": "energy",
                    "window": decay_window,
                    "reference": "s7_reference.json",
                    "tol": 0.2,
                },
            },
        ),
        _damped_1d(
            "S8-damped-localized",
            "damped wave, bump potential on B_1, supp(u1 + u0) inside",
            {"kind": "bump", "center": [0.0], "radius": 1.0, "amplitude": 1.0},
            {
                "hypothesis": {"type": "hypothesis", "localized": True},
                **IDENTITIES_DAMPED,
                "lemma_chain": {"type": "lemma_chain"},
                "absorption": {"type": "absorption"},
                "weighted_energy": {
                    "type": "bounded",
                    "column": "weighted_energy",
                    "window": decay_window,
                    "scale": "damped",
                },
                "weighted_l2": {
                    "type": "bounded",
                    "column": "weighted_l2",
                    "window": decay_window,
                    "scale": "damped",
                },
            },
            u0={"family": "smooth-bump", "center": [0.0], "radius": 0.5, "amplitude": 1.0},
            u1={"family": "zero"},
        ),
        _heat_1d(
            "S9-heat-decay",
            "heat with V = exp(-|x|^2): (1+t)||u||^2 bounded",
            GAUSS_V,
            {
                "hypothesis": {"type": "hypothesis"},
                **IDENTITIES_HEAT,
                "dissipation": {"type": "heat_dissipation"},
                "absorption": {"type": "absorption"},
                "weighted_l2": {
                    "type": "bounded",
                    "column": "weighted_l2",
                    "window": [25.0, 100.0],
                    "scale": "heat",
                },
            },
        ),
        _heat_1d(
            "S9b-free-heat",
            "free heat (contrast to S9): (1+t)||u||^2 grows like sqrt(t)",
            {"kind": "zero"},
            {
                **IDENTITIES_HEAT,
                "weighted_l2": {
                    "type": "power",
                    "column": "weighted_l2",
                    "window": [25.0, 100.0],
                    "band": [0.4, 0.6],
                },
                "heat_kernel": {
                    "type": "asymptote",
                    "column": "l2_u_sq",
                    "window": [50.0, 100.0],
                    "power": -0.5,
                    "target": 0.19947114020071635,
                    "rel_tol": 0.1,
                },
            },
            notes="mass-1 data: ||u||^2 tends to (8 pi t)^(-1/2)",
        ),
        _heat_1d(
            "S10-heat-localized",
            "heat with a bump potential on B_3, supp u0 inside",
            {"kind": "bump", "center": [0.0], "radius": 3.0, "amplitude": 1.0},
            {
                "hypothesis": {"type": "hypothesis", "localized": True},
                **IDENTITIES_HEAT,
                "dissipation": {"type": "heat_dissipation"},
                "absorption": {"type": "absorption"},
                "weighted_l2": {
                    "type": "bounded",
                    "column": "weighted_l2",
                    "window": [25.0, 100.0],
                    "scale": "heat",
                },
            },
            u0={"family": "gaussian-bump", "center": [0.0], "width": 0.5, "amplitude": 1.0},
        ),
        _plate_1d(
            "S11-plate-bounded",
            "plate with V = exp(-|x|^2): bounded L2 norm",
            "plate",
            GAUSS_V,
            {
                "hypothesis": {"type": "hypothesis"},
                **IDENTITIES_UNDAMPED,
                "absorption": {"type": "absorption"},
                "bounded": {"type": "bounded", "column": "l2_u", "window": [10.0, 80.0], "scale": "plate"},
            },
            u1=GAUSS_1D_M2,
        ),
        _plate_1d(
            "S11b-free-plate",
            "free plate (contrast to S11): ||u|| grows like t^(3/4)",
            "plate",
            {"kind": "zero"},
            {
                **IDENTITIES_UNDAMPED,
                "growth": {"type": "power", "column": "l2_u", "window": [10.0, 80.0], "band": [0.65, 0.85]},
            },
            u1=GAUSS_1D_M2,
        ),
        _damped_1d(
            "S12-variable-damping",
            "damped wave, V = exp(-|x|^2), damping 0.5 <= a(x) <= 1.5",
            GAUSS_V,
            {
                "hypothesis": {"type": "hypothesis"},
                **IDENTITIES_DAMPED,
                "absorption": {"type": "absorption"},
                "weighted_energy": {
                    "type": "bounded",
                    "column": "weighted_energy",
                    "window": decay_window,
                    "scale": "damped",
                },
                "weighted_l2": {
                    "type": "bounded",
                    "column": "weighted_l2",
                    "window": decay_window,
                    "scale": "damped",
                },
            },
            damping={"kind": "bounded", "a0": 0.5, "b0": 1.5, "wavelength": 6.283185307179586},
        ),
        _plate_1d(
            "S12b-damped-plate",
            "damped plate with V = exp(-|x|^2): energy and L2 decay",
            "damped_plate",
            GAUSS_V,
            {
                "hypothesis": {"type": "hypothesis"},
                **IDENTITIES_DAMPED,
                "absorption": {"type": "absorption"},
                "weighted_l2": {
                    "type": "bounded",
                    "column": "weighted_l2",
                    "window": [20.0, 80.0],
                    "scale": "damped",
                },
            },
            damping={"kind": "unit"},
            u0=GAUSS_1D,
            u1=GAUSS_1D,
        ),
    ]


@dataclass(frozen=True)
class Contrast:
    """``exponent(baseline) - exponent(with_potential) >= margin``."""

    with_potential: str
    baseline: str
    with_check: str
    baseline_check: str
    margin: float


CONTRASTS = (
    Contrast("S4-gaussian-potential", "S1-free-wave-1d", "bounded", "growth", 0.2),
    Contrast("S6-damped-fast-decay", "S7-damped-no-potential", "energy_decay", "energy_decay", 0.3),
    Contrast("S9-heat-decay", "S9b-free-heat", "weighted_l2", "weighted_l2", 0.2),
    Contrast("S11-plate-bounded", "S11b-free-plate", "bounded", "growth", 0.2),
)


def catalog_by_id() -> dict[str, ScenarioConfig]:
    return {c.id: c for c in builtin_catalog()}


def get_scenario(sid: str) -> ScenarioConfig:
    cat = catalog_by_id()
    if sid in cat:
        return cat[sid]
    # allow the short prefix ("S4") as an alias
    hits = [c for k, c in cat.items() if k.split("-")[0] == sid]
    if len(hits) == 1:
        return hits[0]
    raise KeyError(f"no scenario {sid!r}")
