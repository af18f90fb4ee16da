"""Deterministic CSV / JSON / SVG emission for scenario runs."""

from __future__ import annotations

import io
import json
import math
from pathlib import Path

import numpy as np

from ..functionals import CSV_COLUMNS, DiagnosticSeries

SERIES_FILE = "series.csv"
REPORT_FILE = "report.json"
PLOT_FILE = "plots.svg"
CONFIG_FILE = "config.txt"


def csv_text(series: DiagnosticSeries) -> str:
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for s in series.samples:
        buf.write(",".join("%.17g" % v for v in s.csv_row()) + "\n")
    return buf.getvalue()


def emit_csv(series: DiagnosticSeries, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(csv_text(series))
    return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, np.bool_):
        return bool(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def report_json(report) -> str:
    """JSON text of a report; non-finite numbers become the strings
    ``"inf"``/``"nan"`` so the output stays strict JSON."""
    return json.dumps(_jsonable(report.to_dict()), indent=2, sort_keys=True, allow_nan=False) + "\n"


def emit_json(report, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(report_json(report))
    return path


def emit_svg(report, path: str | Path) -> Path:
    """Three panels: log-log ‖u‖ with the fitted power line, E and (1+t)²E,
    and the identity residuals."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    series = report.series
    if series is None:
        raise ValueError("report carries no series to plot")
    path = Path(path)
    t = series.t
    with matplotlib.rc_context({"svg.hashsalt": "decaylab", "svg.fonttype": "path"}):
        fig, axes = plt.subplots(3, 1, figsize=(6.4, 9.6))
        ax = axes[0]
        y = series.column("l2_u")
        pos = (t > 0) & (y > 0)
        if np.any(pos):
            ax.loglog(t[pos], y[pos], label="‖u(t)‖")
            fit = _first_power_fit(report, "l2_u")
            if fit is not None:
                t0, t1 = fit["window"]
                tt = np.array([t0, t1])
                ax.loglog(
                    tt,
                    fit["prefactor"] * tt ** fit["exponent"],
                    "--",
                    label=f"fit, slope {fit['exponent']:.3f}",
                )
        else:
            ax.plot(t, y, label="‖u(t)‖")
        ax.set_xlabel("t")
        ax.legend(loc="best")
        ax.set_title(f"{report.id}: L2 norm")

        ax = axes[1]
        ax.plot(t, series.column("energy"), label="E(t)")
        ax.plot(t, series.column("weighted_energy"), label="(1+t)² E(t)")
        ax.set_xlabel("t")
        ax.legend(loc="best")
        ax.set_title("energy")

        ax = axes[2]
        ax.plot(t, series.column("v_residual"), label="v-identity residual")
        ax.plot(t, series.column("energy_residual"), label="energy-identity residual")
        ax.set_xlabel("t")
        ax.legend(loc="best")
        ax.set_title("identity residuals")
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return path


def _first_power_fit(report, column: str):
    for chk in report.checks:
        fit = chk.details.get("fit") if isinstance(chk.details, dict) else None
        if fit and fit.get("model") in ("power", "bounded") and chk.details.get("column") == column:
            return fit
    return None


def write_outputs(report, out_dir: str | Path, svg: bool = False) -> dict:
    """Write ``<out_dir>/<id>/{config.txt, series.csv, report.json[, plots.svg]}``."""
    d = Path(out_dir) / report.id
    d.mkdir(parents=True, exist_ok=True)
    (d / CONFIG_FILE).write_text(report.config_text)
    report.outputs = {"config": CONFIG_FILE}
    if report.series is not None:
        emit_csv(report.series, d / SERIES_FILE)
        report.outputs["csv"] = SERIES_FILE
        if svg:
            emit_svg(report, d / PLOT_FILE)
            report.outputs["svg"] = PLOT_FILE
    report.outputs["report"] = REPORT_FILE
    emit_json(report, d / REPORT_FILE)
    return report.outputs
