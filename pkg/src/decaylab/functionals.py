"""Sampled diagnostics and the integral identities/inequalities of the
energy-multiplier argument, evaluated on discrete solutions.

Each inequality check computes its left and right sides separately from raw
sample columns and data constants.  The allowed slack is ``1e-9`` plus the
measured defect of the identity the inequality is derived from (weighted as
in the derivation), so it vanishes at the scheme's order as ``dt -> 0``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .evolve import DAMPED_KINDS, PLATE_KINDS, EvolutionState
from .numgrid import Field, Grid, grad_norm_sq_array, laplacian_array
from .potential import DataFunctionals, source_field

ABS_TOL = 1e-9

CSV_COLUMNS = (
    "t",
    "l2_u_sq",
    "energy",
    "l2_ut_sq",
    "grad_u_sq",
    "pot_u_sq",
    "cum_l2_u_sq",
    "cum_l2_ut_sq",
    "v_residual",
    "energy_residual",
    "weighted_energy",
    "weighted_l2",
    "boundary_activity",
)


@dataclass
class DiagnosticSample:
    """One sampled record.  ``energy == ½(l2_ut_sq + grad_u_sq + pot_u_sq)``.

    For plates ``grad_u_sq`` holds ``‖Δu‖²``; for heat ``l2_ut_sq`` is 0 and
    ``energy`` is the Dirichlet form ``½(‖∇u‖² + ‖√V u‖²)``.
    """

    t: float
    l2_u_sq: float
    energy: float
    l2_ut_sq: float
    grad_u_sq: float
    pot_u_sq: float
    cum_l2_u_sq: float
    cum_l2_ut_sq: float
    v_residual: float
    energy_residual: float
    weighted_energy: float
    weighted_l2: float
    boundary_activity: float
    # not part of the CSV record
    grad_v_sq: float = 0.0
    pot_v_sq: float = 0.0
    source_dot_v: float = 0.0
    cum_a_u_sq: float = 0.0
    cum_a_ut_sq: float = 0.0
    cum_stiffness: float = 0.0
    cum_weighted_ut_sq: float = 0.0
    shadow_energy: float = math.nan

    @property
    def cum_energy(self) -> float:
        """``∫₀ᵗ E(s) ds``."""
        return 0.5 * (self.cum_l2_ut_sq + self.cum_stiffness)

    def csv_row(self) -> tuple[float, ...]:
        return tuple(getattr(self, c) for c in CSV_COLUMNS)


@dataclass
class DiagnosticSeries:
    kind: str
    samples: list[DiagnosticSample]
    functionals: DataFunctionals
    fingerprint: str = ""
    dt: float = math.nan
    grid: Grid | None = None
    final_state: EvolutionState | None = None
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        ts = [s.t for s in self.samples]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("sample times must increase strictly")

    def column(self, name: str) -> np.ndarray:
        if name == "l2_u":
            return np.sqrt(self.column("l2_u_sq"))
        if name == "cum_energy":
            return np.array([s.cum_energy for s in self.samples])
        return np.array([getattr(s, name) for s in self.samples], dtype=float)

    @property
    def t(self) -> np.ndarray:
        return self.column("t")

    def __len__(self):
        return len(self.samples)


# -- per-sample quantities -----------------------------------------------------


def _stiffness_part(kind: str, u: np.ndarray, lap_u: np.ndarray | None, h: float) -> float:
    if kind in PLATE_KINDS:
        if lap_u is None:
            lap_u = laplacian_array(u, h)
        return float(np.sum(lap_u * lap_u)) * h**u.ndim
    return grad_norm_sq_array(u, h)


def _boundary_ratio(grid: Grid, u: np.ndarray) -> float:
    peak = float(np.max(np.abs(u)))
    if peak == 0.0:
        return 0.0
    return float(np.max(np.abs(u[grid.monitor_mask]))) / peak


def boundary_activity(state: EvolutionState | Field) -> float:
    """Largest ``|u|`` on the two layers next to the wall, relative to ``max |u|``."""
    if isinstance(state, Field):
        return _boundary_ratio(state.grid, state.values)
    return _boundary_ratio(state.grid, state.u)


def _v_terms(kind, v, V, src, h):
    w = h**v.ndim
    grad_v = _stiffness_part(kind, v, None, h)
    pot_v = float(np.sum(V * v * v)) * w
    src_v = float(np.sum(src * v)) * w
    return grad_v, pot_v, src_v


def _v_residual(kind, l2_u, cum_l2_u, cum_a_u, l2_u0, grad_v, pot_v, src_v) -> float:
    if kind == "heat":
        return cum_l2_u + 0.5 * grad_v + 0.5 * pot_v - src_v
    dissipation = cum_a_u if kind in DAMPED_KINDS else 0.0
    return 0.5 * l2_u + 0.5 * grad_v + 0.5 * pot_v + dissipation - 0.5 * l2_u0 - src_v


def v_identity_residual(
    state: EvolutionState, V, u0, u1, kind: str | None = None, a=None
) -> float:
    """Signed defect of the identity satisfied by ``v = ∫₀ᵗ u ds``.

    wave/plate: ``½‖v_t‖² + ½‖∇v‖² + ½‖√V v‖² - ½‖u0‖² - (u1, v)``;
    damped kinds add ``∫‖√a v_s‖²`` and use ``u1 + a u0`` as source;
    heat: ``∫‖v_s‖² + ½‖∇v‖² + ½‖√V v‖² - (u0, v)``.
    """
    kind = kind or state.kind
    grid = state.grid
    as_field = lambda f: f if isinstance(f, Field) else Field(grid, f)  # noqa: E731
    u0, u1 = as_field(u0), as_field(u1)
    V = as_field(V).values
    src = source_field(u0, u1, kind, None if a is None else as_field(a)).values
    grad_v, pot_v, src_v = _v_terms(kind, state.v, V, src, grid.h)
    l2_u0 = float(np.sum(u0.values * u0.values)) * grid.cell_volume
    return _v_residual(
        kind, state.l2_u_sq, state.cum_l2_u_sq, state.cum_a_u_sq, l2_u0, grad_v, pot_v, src_v
    )


def energy(state: EvolutionState, V, u_next: np.ndarray | Field) -> float:
    """``½(‖u_t‖² + ‖∇u‖² + ‖√V u‖²)`` with ``u_t = (u_next - u_prev)/(2dt)``.

    Plates use ``‖Δu‖²`` in place of ``‖∇u‖²``.
    """
    if state.kind == "heat":
        raise ValueError("heat states carry no kinetic energy")
    V = V.values if isinstance(V, Field) else V
    u_next = u_next.values if isinstance(u_next, Field) else u_next
    w = state.grid.cell_volume
    ut = (u_next - state.u_prev) / (2.0 * state.dt)
    l2_ut = float(np.sum(ut * ut)) * w
    stiff = _stiffness_part(state.kind, state.u, state.lap_u, state.grid.h)
    return 0.5 * (l2_ut + stiff + float(np.sum(V * state.u * state.u)) * w)


def _make_sample(kind, t, u, lap_u, l2_ut, V, grid, acc, v, src, funcs, shadow):
    h, w = grid.h, grid.cell_volume
    l2_u = acc["l2_u_sq"]
    grad_u = _stiffness_part(kind, u, lap_u, h)
    pot_u = float(np.sum(V * u * u)) * w
    E = 0.5 * (l2_ut + grad_u + pot_u)
    grad_v, pot_v, src_v = _v_terms(kind, v, V, src, h)
    v_res = _v_residual(
        kind, l2_u, acc["cum_l2_u_sq"], acc["cum_a_u_sq"], funcs.l2_u0_sq, grad_v, pot_v, src_v
    )
    if kind == "heat":
        e_res = 0.5 * l2_u + acc["cum_stiffness"] - 0.5 * funcs.l2_u0_sq
    elif kind in DAMPED_KINDS:
        e_res = E + acc["cum_a_ut_sq"] - funcs.E0
    else:
        e_res = E - funcs.E0
    return DiagnosticSample(
        t=t,
        l2_u_sq=l2_u,
        energy=E,
        l2_ut_sq=l2_ut,
        grad_u_sq=grad_u,
        pot_u_sq=pot_u,
        cum_l2_u_sq=acc["cum_l2_u_sq"],
        cum_l2_ut_sq=acc["cum_l2_ut_sq"],
        v_residual=v_res,
        energy_residual=e_res,
        weighted_energy=(1.0 + t) ** 2 * E,
        weighted_l2=(1.0 + t) * l2_u,
        boundary_activity=_boundary_ratio(grid, u),
        grad_v_sq=grad_v,
        pot_v_sq=pot_v,
        source_dot_v=src_v,
        cum_a_u_sq=acc["cum_a_u_sq"],
        cum_a_ut_sq=acc["cum_a_ut_sq"],
        cum_stiffness=acc["cum_stiffness"],
        cum_weighted_ut_sq=acc["cum_weighted_ut_sq"],
        shadow_energy=shadow,
    )


_ACC = (
    "l2_u_sq",
    "cum_l2_u_sq",
    "cum_l2_ut_sq",
    "cum_a_u_sq",
    "cum_a_ut_sq",
    "cum_stiffness",
    "cum_weighted_ut_sq",
)


def _shadow(state, nxt, V) -> float:
    """Leapfrog-conserved form ``½‖(u⁺-u)/dt‖² + ½ b(u⁺, u)``."""
    w = state.grid.cell_volume
    du = (nxt.u - state.u) / state.dt
    if state.kind in PLATE_KINDS:
        b = float(np.sum(nxt.lap_u * state.lap_u)) * w
    else:
        b = -float(np.sum(nxt.lap_u * state.u)) * w
    b += float(np.sum(V * nxt.u * state.u)) * w
    return 0.5 * float(np.sum(du * du)) * w + 0.5 * b


def initial_sample(state, V, u0, u1, src, funcs: DataFunctionals, nxt=None) -> DiagnosticSample:
    """Sample at ``t = 0`` using the exact initial velocity ``u1``."""
    acc = {k: getattr(state, k) for k in _ACC}
    l2_ut = 0.0 if state.kind == "heat" else funcs.l2_u1_sq
    shadow = math.nan if nxt is None or state.kind == "heat" else _shadow(state, nxt, V)
    return _make_sample(
        state.kind, 0.0, u0, state.lap_u, l2_ut, V, state.grid, acc, state.v, src, funcs, shadow
    )


def sample(state: EvolutionState, nxt: EvolutionState, V, a, u0, src, funcs) -> DiagnosticSample:
    """Sample at ``state.t``; ``nxt`` (one step ahead) supplies the centered
    velocity and the leapfrog shadow energy."""
    kind, grid, dt = state.kind, state.grid, state.dt
    w = grid.cell_volume
    acc = {k: getattr(state, k) for k in _ACC}
    shadow = math.nan
    if kind == "heat":
        l2_ut = 0.0
    else:
        ut = (nxt.u - state.u_prev) / (2.0 * dt)
        l2_ut = float(np.sum(ut * ut)) * w
        shadow = _shadow(state, nxt, V)
    return _make_sample(
        kind, state.t, state.u, state.lap_u, l2_ut, V, grid, acc, state.v, src, funcs, shadow
    )


# -- checks --------------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    status: str  # "pass" | "fail" | "not_applicable"
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def as_dict(self) -> dict:
        return asdict(self)


def _running_defect(series: DiagnosticSeries, *cols: str) -> np.ndarray:
    d = np.zeros(len(series))
    for c in cols:
        d = np.maximum(d, np.abs(series.column(c)))
    return np.maximum.accumulate(d)


def _inequality(name: str, t, lhs, rhs, slack) -> dict:
    viol = lhs - rhs - slack
    ok = bool(np.all(viol <= 0))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(rhs > 0, lhs / rhs, np.where(lhs > 0, np.inf, 0.0))
    i = int(np.argmax(viol)) if len(viol) else 0
    return {
        "name": name,
        "passed": ok,
        "max_ratio": float(np.max(ratio)) if len(ratio) else 0.0,
        "worst_t": float(t[i]) if len(t) else 0.0,
        "min_margin": float(np.min(rhs - lhs)) if len(t) else 0.0,
    }


def absorption_check(series: DiagnosticSeries, functionals: DataFunctionals, kind=None) -> CheckResult:
    """Absorbed form of the ``v``-identity (Schwarz + Young on the source term).

    second-order kinds: ``½‖v_t‖² + ½‖∇v‖² + ¼‖√V v‖² [+ ∫‖√a v_s‖²] <= ½‖u0‖² + W``;
    heat: ``∫‖v_s‖² + ¼‖√V v‖² <= W``; ``W = ∫ source² / V``.
    """
    kind = kind or series.kind
    W = functionals.source_sq
    if not math.isfinite(W):
        return CheckResult("absorption", "not_applicable", {"reason": "weighted data integral is infinite"})
    t = series.t
    pot_v = series.column("pot_v_sq")
    if kind == "heat":
        lhs = series.column("cum_l2_u_sq") + 0.25 * pot_v
        rhs = np.full_like(lhs, W)
    else:
        lhs = 0.5 * series.column("l2_u_sq") + 0.5 * series.column("grad_v_sq") + 0.25 * pot_v
        if kind in DAMPED_KINDS:
            lhs = lhs + series.column("cum_a_u_sq")
        rhs = np.full_like(lhs, 0.5 * functionals.l2_u0_sq + W)
    slack = ABS_TOL + _running_defect(series, "v_residual")
    res = _inequality("absorption", t, lhs, rhs, slack)
    return CheckResult("absorption", "pass" if res["passed"] else "fail", res)


def damped_energy_identity_residual(series: DiagnosticSeries) -> np.ndarray:
    """``E(t) + ∫₀ᵗ‖√a u_t‖² ds - E(0)`` at every sample."""
    if series.kind not in DAMPED_KINDS:
        raise ValueError("damped energy identity needs a damped series")
    return series.column("energy_residual")


def lemma_chain_check(series: DiagnosticSeries, functionals: DataFunctionals) -> CheckResult:
    """The weighted-multiplier decay chain for ``u_tt - Δu + Vu + u_t = 0``.

    Inequalities, each with its explicit constant:
      ‖u‖ <= 2 I0,  ∫E <= I0² + E0,  ∫(1+s)‖u_t‖² <= E0 + ∫E,
      (1+t)² E <= 9E0 + 6I0² + (u1,u0) + ∫‖u‖²,
      (1+t)/4 ‖u‖² <= 6E0 + 5I0² + (u1,u0) + ∫‖u‖²,
      ∫‖u‖² <= ½‖u0‖² + K0²  (K0² over supp(u1+u0) in the localized case),
    where ``I0² = 3E0 + ½‖u0‖² + (u1,u0)``.
    """
    if series.kind not in DAMPED_KINDS:
        return CheckResult("lemma_chain", "not_applicable", {"reason": "needs a damped kind"})
    if functionals.extras.get("variable_damping"):
        return CheckResult(
            "lemma_chain", "not_applicable", {"reason": "explicit constants assume unit damping"}
        )
    f = functionals
    t = series.t
    I0sq, E0, cross = f.lemma31_I0_sq, f.E0, f.u1_dot_u0
    l2 = series.column("l2_u_sq")
    cum_l2 = series.column("cum_l2_u_sq")
    cum_E = series.column("cum_energy")
    defect = _running_defect(series, "energy_residual", "v_residual")
    slack = ABS_TOL + (1.0 + t) ** 2 * defect
    items = [
        _inequality("l2_bound", t, np.sqrt(l2), np.full_like(t, 2.0 * math.sqrt(max(I0sq, 0.0))),
                    np.sqrt(slack)),
        _inequality("energy_integral", t, cum_E, np.full_like(t, I0sq + E0), slack),
        _inequality("weighted_dissipation", t, series.column("cum_weighted_ut_sq"), E0 + cum_E, slack),
        _inequality("weighted_energy", t, series.column("weighted_energy"),
                    9 * E0 + 6 * I0sq + cross + cum_l2, slack),
        _inequality("weighted_l2", t, 0.25 * (1 + t) * l2, 6 * E0 + 5 * I0sq + cross + cum_l2, slack),
    ]
    if math.isfinite(f.source_sq):
        items.append(_inequality("l2_integral", t, cum_l2, np.full_like(t, 0.5 * f.l2_u0_sq + f.source_sq),
                                 ABS_TOL + _running_defect(series, "v_residual")))
    ok = all(it["passed"] for it in items)
    return CheckResult("lemma_chain", "pass" if ok else "fail", {"inequalities": items})


def heat_dissipation_check(series: DiagnosticSeries, functionals: DataFunctionals) -> CheckResult:
    """``(1+t)‖u‖² <= ‖u0‖² + ∫‖u‖²``, ``∫‖u‖² <= K``, and their combination
    ``(1+t)‖u‖² <= ‖u0‖² + K`` with ``K = ∫ u0²/V``."""
    if series.kind != "heat":
        return CheckResult("heat_dissipation", "not_applicable", {"reason": "needs heat kind"})
    t = series.t
    l2 = series.column("l2_u_sq")
    cum = series.column("cum_l2_u_sq")
    l2_0 = functionals.l2_u0_sq
    defect = _running_defect(series, "energy_residual", "v_residual")
    slack = ABS_TOL + (1.0 + t) * defect
    items = [_inequality("weighted_l2_vs_integral", t, (1 + t) * l2, l2_0 + cum, slack)]
    K = functionals.source_sq
    if math.isfinite(K):
        items.append(_inequality("l2_integral", t, cum, np.full_like(t, K), slack))
        items.append(_inequality("weighted_l2", t, (1 + t) * l2, np.full_like(t, l2_0 + K), slack))
    else:
        return CheckResult("heat_dissipation", "not_applicable",
                           {"reason": "weighted data integral is infinite", "inequalities": items})
    ok = all(it["passed"] for it in items)
    return CheckResult("heat_dissipation", "pass" if ok else "fail", {"inequalities": items})


def monotone_check(series: DiagnosticSeries, column: str, rel_slack: float = 1e-12) -> CheckResult:
    """Sample-to-sample non-increase of ``column`` up to ``rel_slack * y[0]``."""
    y = series.column(column)
    scale = max(abs(float(y[0])), float(np.max(np.abs(y))) if len(y) else 0.0)
    jumps = np.diff(y)
    worst = float(np.max(jumps)) if len(jumps) else 0.0
    ok = worst <= rel_slack * scale
    return CheckResult(
        f"monotone_{column}",
        "pass" if ok else "fail",
        {"max_increase": worst, "allowed": rel_slack * scale},
    )


def sample_consistency(series: DiagnosticSeries) -> bool:
    """Every record satisfies ``energy == ½(l2_ut + grad + pot)`` exactly."""
    return all(s.energy == 0.5 * (s.l2_ut_sq + s.grad_u_sq + s.pot_u_sq) for s in series.samples)


def sample_fields() -> tuple[str, ...]:
    return tuple(f.name for f in fields(DiagnosticSample))
