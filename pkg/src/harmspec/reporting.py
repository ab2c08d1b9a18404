"""Machine-readable experiment reports: canonical CSV bodies, JSON rows,
a metadata sidecar for timing, and rendered figures next to the CSV.

CSV bodies are byte-deterministic for a fixed config and seed: floats are
formatted with %.12g, rows keep canonical order, and wall-clock data lives
only in the ``.meta.json`` sidecar.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

__all__ = [
    "Report",
    "format_cell",
    "rows_to_csv",
    "write_report",
    "load_report_rows",
    "emit_plotdata",
    "render_figure",
    "PLOT_KINDS",
]

PLOT_KINDS = ("envelope", "verdict-sweep", "alpha-decay")


@dataclass
class Report:
    experiment_id: str
    inputs: dict
    rows: list
    verdict: str              # pass | fail | inconclusive
    wall_clock: float = 0.0
    seed: int | None = None
    summary: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return {"pass": 0, "fail": 1, "inconclusive": 2}.get(self.verdict, 1)


def format_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        if math.isnan(v):
            return "nan"
        return format(float(v), ".12g")
    if isinstance(v, np.integer):
        return str(int(v))
    return str(v)


def rows_to_csv(rows, header=None) -> str:
    if header is None:
        header = list(rows[0].keys()) if rows else []
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_cell(row.get(k)) for k in header))
    return "\n".join(lines) + "\n"


def write_report(report: Report, out_base) -> dict:
    """Write <base>.csv (deterministic body), <base>.json (rows + inputs +
    verdict + seed) and <base>.meta.json (wall clock). Returns the paths."""
    base = Path(out_base)
    base.parent.mkdir(parents=True, exist_ok=True)
    csv_path = base.with_suffix(".csv")
    json_path = base.with_suffix(".json")
    meta_path = base.with_suffix(".meta.json")
    csv_path.write_text(rows_to_csv(report.rows))
    payload = {
        "experiment_id": report.experiment_id,
        "inputs": {k: format_cell(v) for k, v in report.inputs.items()},
        "seed": report.seed,
        "verdict": report.verdict,
        "summary": {k: format_cell(v) for k, v in report.summary.items()},
        "rows": report.rows,
    }
    json_path.write_text(json.dumps(payload, indent=1, default=format_cell,
                                    sort_keys=True) + "\n")
    meta_path.write_text(json.dumps({"wall_clock_s": report.wall_clock},
                                    indent=1) + "\n")
    return {"csv": csv_path, "json": json_path, "meta": meta_path}


def load_report_rows(path) -> list:
    data = json.loads(Path(path).read_text())
    if "rows" not in data:
        raise ValueError(f"report {path} has no rows")
    return data["rows"]


def _require(rows, keys, kind):
    for k in keys:
        if not rows or k not in rows[0]:
            raise KeyError(f"plot kind {kind!r} needs column {k!r}")


def emit_plotdata(rows, kind: str, scale_power: float = 2.0):
    """Project report rows onto the plot-data columns for the given kind.
    Returns (header, list-of-dict rows); raises KeyError on missing columns.
    An empty report yields the documented header with no rows."""
    if not rows:
        headers = {"envelope": ["r", "M_u", "M_abs_u", "M_abs_scaled"],
                   "verdict-sweep": ["phi", "decision", "rate"],
                   "alpha-decay": ["alpha", "norm", "beta"]}
        if kind not in headers:
            raise KeyError(f"unknown plot kind {kind!r}; choose from {PLOT_KINDS}")
        return headers[kind], []
    if kind == "envelope":
        param = "r" if rows and "r" in rows[0] else "y"
        _require(rows, [param, "M_u", "M_abs_u"], kind)
        out = []
        for row in rows:
            closeness = (1.0 - float(row[param])) if param == "r" \
                else float(row[param])
            out.append({
                param: float(row[param]),
                "M_u": float(row["M_u"]),
                "M_abs_u": float(row["M_abs_u"]),
                "M_abs_scaled": float(row["M_abs_u"]) * closeness ** scale_power,
            })
        return [param, "M_u", "M_abs_u", "M_abs_scaled"], out
    if kind == "verdict-sweep":
        _require(rows, ["phi", "decision"], kind)
        out = [{"phi": float(r["phi"]), "decision": r["decision"],
                "rate": r.get("rate", "")} for r in rows]
        return ["phi", "decision", "rate"], out
    if kind == "alpha-decay":
        _require(rows, ["alpha", "norm"], kind)
        out = [{"alpha": float(r["alpha"]), "norm": float(r["norm"]),
                "beta": r.get("beta", "")} for r in rows]
        return ["alpha", "norm", "beta"], out
    raise KeyError(f"unknown plot kind {kind!r}; choose from {PLOT_KINDS}")


def render_figure(kind: str, header, rows, png_path) -> Path:
    """Render the plot-data rows to a PNG next to the delimited output."""
    png_path = Path(png_path)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    if kind == "envelope":
        param = header[0]
        xs = [r[param] for r in rows]
        closeness = [(1.0 - x) if param == "r" else x for x in xs]
        ax.loglog(closeness, [max(r["M_abs_u"], 1e-300) for r in rows],
                  "o-", label="max |u|")
        ax.loglog(closeness, [max(r["M_abs_scaled"], 1e-300) for r in rows],
                  "s--", label="scaled")
        ax.set_xlabel("1 - r" if param == "r" else "y")
        ax.set_ylabel("envelope")
        ax.legend()
    elif kind == "verdict-sweep":
        codes = {"tends-to-zero": 0, "bounded-by-one": 1,
                 "inconclusive": 2, "diverges": 3}
        xs = [r["phi"] for r in rows]
        ys = [codes.get(r["decision"], 2) for r in rows]
        ax.plot(xs, ys, ".")
        ax.set_yticks(sorted(set(codes.values())))
        ax.set_yticklabels([k for k, _ in sorted(codes.items(),
                                                 key=lambda kv: kv[1])])
        ax.set_xlabel("phi")
    else:  # alpha-decay
        xs = [r["alpha"] for r in rows]
        ys = [max(r["norm"], 1e-300) for r in rows]
        ax.loglog(xs, ys, "o-")
        ax.set_xlabel("alpha")
        ax.set_ylabel("||D(alpha + i beta) x||")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(png_path, dpi=130)
    plt.close(fig)
    return png_path
