"""Render FER waterfall plots and complexity tables from simulation CSV.

This package consumes only the harness CSV contract (fixed header, one
row per decoder/SNR point) and never re-implements any decoding.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

REQUIRED_COLUMNS = ["r", "m", "decoder", "L", "M", "P", "ebn0_db", "frames",
                    "frame_errors", "fer", "ml_lb_fer", "avg_additions",
                    "avg_comparisons", "time_steps", "mem_bits"]

GROUP_KEYS = ("decoder", "L", "M", "P")


@dataclass
class PlotSpec:
    csv_paths: list
    group_keys: tuple = GROUP_KEYS
    ml_overlay: bool = False
    out_image: str = ""
    out_table: str = ""
    dpi: int = 120
    figsize: tuple = (6.0, 4.5)


class RenderError(ValueError):
    pass


def load_rows(csv_paths) -> list:
    rows = []
    for path in csv_paths:
        with open(path, "r", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            missing = [c for c in REQUIRED_COLUMNS if c not in (reader.fieldnames or [])]
            if missing:
                raise RenderError(f"{path}: missing columns {missing}")
            rows.extend(reader)
    return rows


def _series_label(key) -> str:
    decoder, L, M, P = key
    label = f"{decoder}-{L}"
    if int(M) > 1:
        label += f"-{M}"
    if int(P) > 1 and decoder == "Aut-SSC":
        label = f"{decoder}-{P}"
    return label


def group_series(rows, group_keys=GROUP_KEYS):
    series = {}
    for row in rows:
        key = tuple(row[k] for k in group_keys)
        series.setdefault(key, []).append((float(row["ebn0_db"]),
                                           float(row["fer"]),
                                           float(row["ml_lb_fer"])))
    for key in series:
        series[key].sort()
    return dict(sorted(series.items()))


def render_fer(spec: PlotSpec) -> str:
    """One log-scale FER line per (decoder, L, M, P) group; returns a
    caption summarizing what was drawn."""
    rows = load_rows(spec.csv_paths)
    series = group_series(rows, spec.group_keys)
    if not series:
        raise RenderError("no data series found")
    fig, ax = plt.subplots(figsize=spec.figsize, dpi=spec.dpi)
    markers = ["o", "s", "^", "v", "D", "x", "*", "P"]
    for idx, (key, points) in enumerate(series.items()):
        x = [p[0] for p in points]
        y = [p[1] for p in points]
        label = _series_label(key)
        ax.semilogy(x, y, marker=markers[idx % len(markers)], label=label)
        if spec.ml_overlay:
            ml = [p[2] for p in points]
            if any(v > 0 for v in ml):
                ax.semilogy(x, ml, linestyle="--", color="gray",
                            label=f"{label} ML bound")
    ax.set_xlabel("Eb/N0 (dB)")
    ax.set_ylabel("FER")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(spec.out_image, metadata={"Software": "rmplots"})
    plt.close(fig)
    caption = (f"FER curves for {len(series)} decoder configurations over "
               f"{spec.csv_paths}")
    return caption


def sci(value: float) -> str:
    """Two-significant-digit scientific notation, e.g. 20900 -> 2.1E+04."""
    return f"{value:.1E}"


def kb(bits: float) -> str:
    """Kilobytes at 1024 bytes each, two decimals, e.g. 86272 -> 10.53."""
    return f"{bits / 8192:.2f}"


def render_tables(spec: PlotSpec) -> str:
    """Emit the per-decoder complexity grid as CSV text (and optionally a
    file): operations in scientific form, time steps, memory in KB."""
    rows = load_rows(spec.csv_paths)
    seen = {}
    for row in rows:
        key = (f"RM({row['r']};{row['m']})",) + tuple(row[k] for k in GROUP_KEYS)
        ops = float(row["avg_additions"]) + float(row["avg_comparisons"])
        seen[key] = (ops, int(row["time_steps"]), int(row["mem_bits"]))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["code", "decoder", "L", "M", "P", "C", "T", "M_KB"])
    for key in sorted(seen):
        ops, steps, bits = seen[key]
        writer.writerow(list(key) + [sci(ops), steps, kb(bits)])
    text = buf.getvalue()
    if spec.out_table:
        with open(spec.out_table, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
