"""Run the (filtered) catalog, evaluate contrast pairs, write a summary."""

from __future__ import annotations

import fnmatch
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

from .catalog import CONTRASTS, Contrast, builtin_catalog
from .config import ScenarioConfig
from .emit import _jsonable
from .runner import ScenarioReport, run_scenario

OUT_ENV = "DECAYLAB_OUT"
DEFAULT_OUT = "decaylab-out"


def default_out_dir() -> Path:
    return Path(os.environ.get(OUT_ENV, DEFAULT_OUT))


def select(configs: Iterable[ScenarioConfig], pattern: str | None) -> list[ScenarioConfig]:
    """Glob-filter scenario ids (``fnmatch`` rules, case-sensitive)."""
    configs = list(configs)
    if not pattern:
        return configs
    return [c for c in configs if fnmatch.fnmatchcase(c.id, pattern)]


@dataclass
class ContrastResult:
    contrast: Contrast
    status: str  # "pass" | "fail" | "skipped"
    with_exponent: float | None = None
    baseline_exponent: float | None = None

    def as_dict(self) -> dict:
        c = self.contrast
        return {
            "with_potential": c.with_potential,
            "baseline": c.baseline,
            "margin": c.margin,
            "with_exponent": self.with_exponent,
            "baseline_exponent": self.baseline_exponent,
            "separation": (
                None
                if self.with_exponent is None or self.baseline_exponent is None
                else self.baseline_exponent - self.with_exponent
            ),
            "status": self.status,
        }


def evaluate_contrast(c: Contrast, reports: dict[str, ScenarioReport]) -> ContrastResult:
    if c.with_potential not in reports or c.baseline not in reports:
        return ContrastResult(c, "skipped")
    fw = reports[c.with_potential].fit(c.with_check)
    fb = reports[c.baseline].fit(c.baseline_check)
    if fw is None or fb is None:
        return ContrastResult(c, "fail")
    bw, bb = fw["exponent"], fb["exponent"]
    return ContrastResult(c, "pass" if bb - bw >= c.margin else "fail", bw, bb)


@dataclass
class VerifySummary:
    reports: list[ScenarioReport] = field(default_factory=list)
    contrasts: list[ContrastResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.as_expected for r in self.reports) and all(
            c.status != "fail" for c in self.contrasts
        )

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "scenarios": [
                {
                    "id": r.id,
                    "fingerprint": r.fingerprint,
                    "status": r.status,
                    "expected": r.expected,
                    "as_expected": r.as_expected,
                }
                for r in self.reports
            ],
            "contrasts": [c.as_dict() for c in self.contrasts],
        }


def _run_one(args):
    cfg, out_dir, svg = args
    rep = run_scenario(cfg, out_dir, svg)
    rep.series = None  # keep the cross-process payload small
    return rep


def verify_all(
    pattern: str | None = None,
    out_dir: str | Path | None = None,
    svg: bool = False,
    configs: Iterable[ScenarioConfig] | None = None,
    jobs: int = 1,
    echo: Callable[[str], None] | None = print,
) -> VerifySummary:
    """Validate every selected config, run them, and check the contrasts.

    All configs are validated before the first simulation starts, so a bad
    config aborts the whole run with :class:`ConfigError`.
    """
    selected = select(configs if configs is not None else builtin_catalog(), pattern)
    for cfg in selected:
        cfg.validate()
    out = Path(out_dir) if out_dir is not None else default_out_dir()
    summary = VerifySummary()
    tasks = [(cfg, out, svg) for cfg in selected]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, tasks))
    else:
        results = map(_run_one, tasks)
    for rep in results:
        summary.reports.append(rep)
        if echo:
            mark = "ok  " if rep.as_expected else "FAIL"
            echo(
                f"{mark} {rep.id:32s} {rep.status:20s} expected {rep.expected:20s} "
                f"{rep.wall_clock:6.1f}s"
            )
    by_id = {r.id: r for r in summary.reports}
    for c in CONTRASTS:
        res = evaluate_contrast(c, by_id)
        if res.status == "skipped":
            continue
        summary.contrasts.append(res)
        if echo:
            mark = "ok  " if res.status == "pass" else "FAIL"
            echo(
                f"{mark} contrast {c.with_potential} vs {c.baseline}: "
                f"{res.baseline_exponent:.3f} - {res.with_exponent:.3f} >= {c.margin}"
            )
    out.mkdir(parents=True, exist_ok=True)
    (out / "summary.json").write_text(
        json.dumps(_jsonable(summary.as_dict()), indent=2, sort_keys=True) + "\n"
    )
    if echo:
        n_ok = sum(r.as_expected for r in summary.reports)
        echo(f"{n_ok}/{len(summary.reports)} scenarios as expected; overall {'PASS' if summary.ok else 'FAIL'}")
    return summary
