"""Acceptance criteria, one test per criterion.

Each test prints a single ``ACCEPTANCE <n> PASS|FAIL: ...`` line (also
collected into the end-of-session summary) before asserting.  Fits are
recomputed from the emitted ``series.csv`` files with :mod:`decaylab.ratefit`
so the verdicts do not depend on the runner's own check wiring.
"""

import filecmp
import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from decaylab.cli import main as cli_main
from decaylab.evolve import cfl_dt, run_simulation
from decaylab.numgrid import Field, grad_norm_sq, inner, laplacian, make_grid
from decaylab.potential import GaussianPotential, UnitDamping, eval_potential
from decaylab.ratefit import boundedness_score, fit_power, fit_sqrtlog
from decaylab.scenarios.runner import data_scale, load_reference
from decaylab.scenarios.verify import verify_all

from conftest import random_dirichlet_field
from oracles import dalembert_error, eigenmode_error

RESULTS: list[str] = []


def report(n: int, ok: bool, text: str) -> None:
    line = f"ACCEPTANCE {n} {'PASS' if ok else 'FAIL'}: {text}"
    RESULTS.append(line)
    print(line)


# -- shared full-catalog run -----------------------------------------------------


@pytest.fixture(scope="module")
def catalog_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("verify1")
    start = time.perf_counter()
    summary = verify_all(out_dir=out, svg=True, echo=None)
    elapsed = time.perf_counter() - start
    return out, summary, elapsed


def series(out: Path, sid: str) -> dict[str, np.ndarray]:
    data = np.genfromtxt(out / sid / "series.csv", delimiter=",", names=True)
    return {k: data[k] for k in data.dtype.names}


def functionals(out: Path, sid: str) -> dict:
    return json.loads((out / sid / "report.json").read_text())["functionals"]


class _F:
    def __init__(self, d):
        self.__dict__.update({k: (math.inf if v == "inf" else v) for k, v in d.items()})


def scale_of(out, sid, kind):
    return data_scale(kind, _F(functionals(out, sid)))


# -- 1. discrete identities ------------------------------------------------------


def _final_residuals(kind, dt, T, grid, V, u0, u1, damping=None):
    n = int(round(T / dt))
    s = run_simulation(u0, u1, kind, V, damping, T=T, dt=T / n, sample_every=n)
    last = s.samples[-1]
    return abs(last.v_residual), abs(last.energy_residual)


def test_criterion_1_discrete_identities():
    start = time.perf_counter()
    rng = np.random.default_rng(7)
    sbp = 0.0
    for dim, N in ((1, 4096), (2, 64)):
        grid = make_grid(dim, 5.0, N)
        for _ in range(100 if dim == 1 else 20):
            f = random_dirichlet_field(grid, rng)
            g2 = grad_norm_sq(f)
            sbp = max(sbp, abs(inner(laplacian(f), f) + g2) / g2)

    g = make_grid(1, 20.0, 401)
    x = g.axis
    u0 = Field(g, np.exp(-(x**2))).with_dirichlet()
    u1 = Field(g, 0.5 * x * np.exp(-(x**2))).with_dirichlet()
    V = eval_potential(GaussianPotential(), g)
    drift = 0.0
    for kind in ("wave", "plate"):
        dt = cfl_dt(g, kind, float(V.values.max()))
        # conservation holds in the closed box, so wall contact is irrelevant here
        s = run_simulation(
            u0, u1, kind, V, T=1e4 * dt * (1 - 1e-12), dt=dt, sample_every=100, boundary_threshold=1.0
        )
        assert s.final_state.step == 10_000
        sh = s.column("shadow_energy")
        drift = max(drift, float(np.max(np.abs(sh - sh[0])) / sh[0]))

    ratios = {}
    T = 5.0
    for label, kind, col, damp in (
        ("wave v-identity", "wave", 0, None),
        ("damped energy identity", "damped_wave", 1, UnitDamping()),
        ("damped v-identity", "damped_wave", 0, UnitDamping()),
        ("heat v-identity", "heat", 0, None),
    ):
        dt0 = cfl_dt(g, kind, float(V.values.max()), 0.5)
        r1 = _final_residuals(kind, dt0, T, g, V, u0, None if kind == "heat" else u1, damp)[col]
        r2 = _final_residuals(kind, dt0 / 2, T, g, V, u0, None if kind == "heat" else u1, damp)[col]
        ratios[label] = r1 / r2
    elapsed = time.perf_counter() - start
    ok_ratios = all(3.0 <= r <= 5.0 for r in ratios.values())
    ok = sbp <= 1e-12 and drift <= 1e-10 and ok_ratios and elapsed <= 60
    report(
        1,
        ok,
        f"SBP max rel {sbp:.2e} (<=1e-12); shadow drift over 1e4 steps {drift:.2e} (<=1e-10); "
        "dt-halving ratios " + ", ".join(f"{k} {v:.2f}" for k, v in ratios.items())
        + f" (4 +- 25%); {elapsed:.0f}s",
    )
    assert ok


# -- 2. oracle equivalence -------------------------------------------------------


def test_criterion_2_oracles():
    start = time.perf_counter()
    errs = {
        "klein-gordon": eigenmode_error("wave", m2=1.0, h=0.02, T=10.0, c1=0.7),
        "heat": eigenmode_error("heat", m2=1.0, h=0.02, T=10.0, L=2.0),
        "plate": eigenmode_error("plate", m2=1.0, h=0.02, T=10.0, c1=0.7),
    }
    dal, t = dalembert_error(T=50.0)
    elapsed = time.perf_counter() - start
    ok = all(e <= 1e-3 for e in errs.values()) and dal <= 0.01 and elapsed <= 120
    report(
        2,
        ok,
        "eigenmode rel L2 errors "
        + ", ".join(f"{k} {v:.1e}" for k, v in errs.items())
        + f" (<=1e-3); d'Alembert at t={t:.2f} {dal:.1e} (<=1e-2); {elapsed:.0f}s",
    )
    assert ok


# -- 3. growth baselines ---------------------------------------------------------


def test_criterion_3_growth(catalog_run):
    out, summary, _ = catalog_run
    s1 = series(out, "S1-free-wave-1d")
    b1 = fit_power(s1["t"], np.sqrt(s1["l2_u_sq"]), (20, 100)).exponent
    s11 = series(out, "S11b-free-plate")
    b11 = fit_power(s11["t"], np.sqrt(s11["l2_u_sq"]), (10, 80)).exponent
    s2 = series(out, "S2-free-wave-2d")
    y2 = np.sqrt(s2["l2_u_sq"])
    r2 = fit_sqrtlog(s2["t"], y2, (10, 80)).r_squared
    b2 = fit_power(s2["t"], y2, (10, 80)).exponent
    runtime = sum(r.wall_clock for r in summary.reports if r.id in ("S1-free-wave-1d", "S11b-free-plate", "S2-free-wave-2d"))
    ok = 0.45 <= b1 <= 0.55 and 0.65 <= b11 <= 0.85 and r2 >= 0.9 and b2 <= 0.15 and runtime <= 300
    report(
        3,
        ok,
        f"free wave 1D beta {b1:.3f} in [0.45,0.55]; free plate beta {b11:.3f} in [0.65,0.85]; "
        f"free wave 2D sqrtlog r2 {r2:.4f} (>=0.9), power beta {b2:.3f} (<=0.15); {runtime:.0f}s",
    )
    assert ok


# -- 4. theorem conclusions ------------------------------------------------------


def test_criterion_4_theorem_bounds(catalog_run):
    out, summary, _ = catalog_run
    parts = []
    ok = True
    for sid in ("S3-klein-gordon", "S4-gaussian-potential", "S5-localized-potential"):
        s = series(out, sid)
        f = functionals(out, sid)
        lhs = 0.5 * s["l2_u_sq"]  # ½‖v_t‖²; the remaining terms are checked by the runner
        rhs = 0.5 * f["l2_u0_sq"] + f["I0_sq"]
        chk = next(c for c in summary.reports if c.id == sid).check("absorption")
        good = chk.passed and bool(np.all(lhs <= rhs + 1e-9))
        ok &= good
        parts.append(f"{sid.split('-')[0]} absorption max ratio {chk.details['max_ratio']:.3f}")
    s6 = series(out, "S6-damped-fast-decay")
    f6 = functionals(out, "S6-damped-fast-decay")
    bound = 2.0 * math.sqrt(f6["lemma31_I0_sq"])
    l2max = float(np.max(np.sqrt(s6["l2_u_sq"])))
    chain = next(r for r in summary.reports if r.id == "S6-damped-fast-decay").check("lemma_chain")
    good = l2max <= bound + 1e-9 and chain.passed
    ok &= good
    parts.append(f"S6 max ||u|| {l2max:.3f} <= 2 sqrt(I0^2) = {bound:.3f}, full chain {chain.status}")
    s9 = series(out, "S9-heat-decay")
    f9 = functionals(out, "S9-heat-decay")
    heat_rhs = f9["l2_u0_sq"] + f9["K0h_sq"]
    heat_max = float(np.max(s9["weighted_l2"]))
    hchk = next(r for r in summary.reports if r.id == "S9-heat-decay").check("dissipation")
    good = heat_max <= heat_rhs + 1e-9 and hchk.passed
    ok &= good
    parts.append(f"S9 max (1+t)||u||^2 {heat_max:.3f} <= {heat_rhs:.3f}")
    runtime = sum(r.wall_clock for r in summary.reports if r.id[:3] in ("S3-", "S4-", "S5-", "S6-", "S9-"))
    ok &= runtime <= 300
    report(4, ok, "; ".join(parts) + f"; {runtime:.0f}s")
    assert ok


# -- 5. decay exponents ----------------------------------------------------------


def test_criterion_5_decay_exponents(catalog_run):
    out, summary, _ = catalog_run
    s6 = series(out, "S6-damped-fast-decay")
    sc = scale_of(out, "S6-damped-fast-decay", "damped")
    bs = boundedness_score(s6["t"], s6["weighted_energy"], (45, 180), sc)
    s7 = series(out, "S7-damped-no-potential")
    b7 = fit_power(s7["t"], s7["energy"], (45, 180)).exponent
    b6 = fit_power(s6["t"], s6["energy"], (45, 180)).exponent
    ref = load_reference("s7_reference.json")["exponent"]
    sep = b7 - b6
    runtime = sum(r.wall_clock for r in summary.reports if r.id[:3] in ("S6-", "S7-"))
    in_band = -0.05 <= bs.exponent <= 0.05
    ok = in_band and abs(b7 - ref) <= 0.2 and sep >= 0.3 and runtime <= 180
    report(
        5,
        ok,
        f"S6 (1+t)^2 E beta {bs.exponent:.3f} in [-0.05,0.05]: {'yes' if in_band else 'no'} "
        f"(one-sided verdict {bs.verdict}); S7 energy beta {b7:.3f} vs reference {ref:.3f} (+-0.2); "
        f"separation {sep:.2f} (>=0.3); {runtime:.0f}s",
    )
    assert ok


# -- 6. localized potential ------------------------------------------------------


def test_criterion_6_localized(catalog_run):
    out, summary, _ = catalog_run
    s5 = series(out, "S5-localized-potential")
    sc = scale_of(out, "S5-localized-potential", "wave")
    bs = boundedness_score(s5["t"], np.sqrt(s5["l2_u_sq"]), (20, 100), sc)
    by_id = {r.id: r for r in summary.reports}
    neg = by_id["S5n-localized-negative-control"]
    runtime = by_id["S5-localized-potential"].wall_clock + neg.wall_clock
    ok = (
        by_id["S5-localized-potential"].status == "pass"
        and bs.exponent <= 0.05
        and math.isfinite(bs.goodness_ratio)
        and neg.status == "hypothesis_violated"
        and runtime <= 120
    )
    report(
        6,
        ok,
        f"S5 beta {bs.exponent:.4f} (<=0.05), sup ratio {bs.goodness_ratio:.3f} (finite); "
        f"negative control status {neg.status}; {runtime:.0f}s",
    )
    assert ok


# -- 7. end to end ---------------------------------------------------------------


def _tree_identical(a: Path, b: Path) -> tuple[bool, int]:
    files = sorted(p.relative_to(a) for p in a.rglob("*") if p.is_file())
    same = all((b / f).is_file() and filecmp.cmp(a / f, b / f, shallow=False) for f in files)
    other = sorted(p.relative_to(b) for p in b.rglob("*") if p.is_file())
    return same and files == other, len(files)


def test_criterion_7_end_to_end(catalog_run, tmp_path, capsys):
    out, summary, first = catalog_run
    start = time.perf_counter()
    code = cli_main(["verify", "--out", str(tmp_path), "--svg"])
    elapsed = time.perf_counter() - start
    capsys.readouterr()
    same, n_files = _tree_identical(out, tmp_path)
    ok = code == 0 and summary.exit_code == 0 and same and max(first, elapsed) <= 900
    report(
        7,
        ok,
        f"decaylab verify exit {code}; {n_files} CSV/JSON/SVG/config files byte-identical "
        f"across two runs: {same}; {elapsed:.0f}s on this machine",
    )
    assert ok
