"""Self-contained SVG emission for benchmark sweeps (no plotting library).

Two chart families:

* per (size, instance): best-of-repeats energy vs. stopping threshold,
* per size: mean wall time vs. stopping threshold,

both with a log10 x-axis running from the loosest threshold on the left
to the tightest on the right and one fixed-color series per backend.
Each SVG embeds a ``<metadata>`` JSON block holding the exact plotted
values so downstream checks can confirm they equal the CSV aggregates.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

SERIES_COLORS = {"sa": "black", "adam": "blue", "adamw": "orange", "lbfgs": "red"}
SERIES_LABELS = {"sa": "SA", "adam": "Adam", "adamw": "AdamW", "lbfgs": "L-BFGS"}

_WIDTH, _HEIGHT = 640, 440
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 80, 150, 40, 55


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    step = 10 * mag
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if (hi - lo) / (mult * mag) <= target:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(t)
        t += step
    return ticks


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _threshold_label(t: float) -> str:
    e = math.log10(t)
    if abs(e - round(e)) < 1e-9:
        return f"1e{int(round(e))}"
    return f"{t:g}"


def _render_chart(title, x_label, y_label, series, metadata) -> str:
    """Build one SVG chart.

    ``series`` maps backend -> (thresholds, values), thresholds sorted
    loosest-first; x positions are -log10(threshold).
    """
    all_t = sorted({t for ts, _ in series.values() for t in ts}, reverse=True)
    all_v = [v for _, vs in series.values() for v in vs]
    xs = [-math.log10(t) for t in all_t]
    x_lo, x_hi = min(xs), max(xs)
    if x_hi - x_lo < 1e-12:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    v_lo, v_hi = min(all_v), max(all_v)
    pad = 0.05 * (v_hi - v_lo) if v_hi > v_lo else max(1.0, 0.1 * abs(v_hi))
    y_lo, y_hi = v_lo - pad, v_hi + pad

    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def px(t):
        return _MARGIN_L + plot_w * ((-math.log10(t)) - x_lo) / (x_hi - x_lo)

    def py(v):
        return _MARGIN_T + plot_h * (1.0 - (v - y_lo) / (y_hi - y_lo))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}" font-family="sans-serif">',
        f"<metadata>{json.dumps(metadata)}</metadata>",
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="15">{title}</text>',
        # axes
        f'<line x1="{_MARGIN_L}" y1="{_MARGIN_T + plot_h}" x2="{_MARGIN_L + plot_w}" '
        f'y2="{_MARGIN_T + plot_h}" stroke="black"/>',
        f'<line x1="{_MARGIN_L}" y1="{_MARGIN_T}" x2="{_MARGIN_L}" y2="{_MARGIN_T + plot_h}" stroke="black"/>',
        f'<text x="{_MARGIN_L + plot_w / 2:.1f}" y="{_HEIGHT - 12}" text-anchor="middle" '
        f'font-size="13">{x_label}</text>',
        f'<text x="18" y="{_MARGIN_T + plot_h / 2:.1f}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 18 {_MARGIN_T + plot_h / 2:.1f})">{y_label}</text>',
    ]
    for t in all_t:
        x = px(t)
        parts.append(
            f'<line x1="{x:.2f}" y1="{_MARGIN_T + plot_h}" x2="{x:.2f}" '
            f'y2="{_MARGIN_T + plot_h + 5}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{_MARGIN_T + plot_h + 20}" text-anchor="middle" '
            f'font-size="11">{_threshold_label(t)}</text>'
        )
    for tick in _nice_ticks(y_lo, y_hi):
        y = py(tick)
        parts.append(f'<line x1="{_MARGIN_L - 5}" y1="{y:.2f}" x2="{_MARGIN_L}" y2="{y:.2f}" stroke="black"/>')
        parts.append(
            f'<line x1="{_MARGIN_L}" y1="{y:.2f}" x2="{_MARGIN_L + plot_w}" y2="{y:.2f}" '
            f'stroke="#dddddd" stroke-width="0.5"/>'
        )
        parts.append(
            f'<text x="{_MARGIN_L - 9}" y="{y + 4:.2f}" text-anchor="end" font-size="11">{_fmt(tick)}</text>'
        )
    legend_y = _MARGIN_T + 10
    for backend, (thresholds, values) in series.items():
        color = SERIES_COLORS[backend]
        points = [(px(t), py(v)) for t, v in zip(thresholds, values)]
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in points)
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        for x, y in points:
            parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="{color}"/>')
        lx = _MARGIN_L + plot_w + 12
        parts.append(f'<line x1="{lx}" y1="{legend_y}" x2="{lx + 22}" y2="{legend_y}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{lx + 28}" y="{legend_y + 4}" font-size="12">{SERIES_LABELS[backend]}</text>')
        legend_y += 20
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _group_series(records, value_of, reduce_fn):
    """backend -> (thresholds loosest-first, reduced values per threshold)."""
    by_backend: dict = {}
    for rec in records:
        by_backend.setdefault(rec.backend, {}).setdefault(rec.threshold, []).append(value_of(rec))
    series = {}
    for backend in SERIES_COLORS:
        if backend not in by_backend:
            continue
        thresholds = sorted(by_backend[backend], reverse=True)
        series[backend] = (thresholds, [reduce_fn(by_backend[backend][t]) for t in thresholds])
    return series


def emit_plots(records, output_dir) -> list[Path]:
    """Write all energy and runtime SVGs for the given records.

    Energy charts plot the minimum energy across repeats per (instance,
    backend, threshold); runtime charts plot the mean wall time across
    all repeats and instances per (size, backend, threshold).
    """
    records = list(records)
    if not records:
        raise ValueError("emit_plots requires a non-empty record set")
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    by_instance: dict = {}
    for rec in records:
        by_instance.setdefault((rec.n, rec.instance_id), []).append(rec)
    for (n, instance_id), recs in sorted(by_instance.items()):
        series = _group_series(recs, lambda r: r.energy, min)
        metadata = {
            "kind": "energy",
            "n": n,
            "instance_id": instance_id,
            "aggregation": "min-over-repeats",
            "series": {b: {"thresholds": ts, "values": vs} for b, (ts, vs) in series.items()},
        }
        svg = _render_chart(
            f"Best energy vs threshold ({instance_id}, n={n})",
            "stopping threshold",
            "energy",
            series,
            metadata,
        )
        path = out / f"energy_{instance_id}.svg"
        path.write_text(svg)
        written.append(path)

    by_size: dict = {}
    for rec in records:
        by_size.setdefault(rec.n, []).append(rec)
    for n, recs in sorted(by_size.items()):
        series = _group_series(recs, lambda r: r.wall_time_s, lambda vs: sum(vs) / len(vs))
        metadata = {
            "kind": "runtime",
            "n": n,
            "aggregation": "mean-over-runs",
            "series": {b: {"thresholds": ts, "values": vs} for b, (ts, vs) in series.items()},
        }
        svg = _render_chart(
            f"Mean runtime vs threshold (n={n})",
            "stopping threshold",
            "runtime (s)",
            series,
            metadata,
        )
        path = out / f"runtime_n{n}.svg"
        path.write_text(svg)
        written.append(path)
    return written
