"""Static SVG rendering of aggregate experiment curves.

Hand-rolled SVG so the output is a pure function of the input CSV: no
timestamps, no generated ids, no library version strings. Byte-identical
inputs give byte-identical plots.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

from .experiment import AGG_HEADER

WIDTH, HEIGHT = 720, 480
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 20, 36, 55

KINDS = {
    "regret": ("mean_regret", "std_regret", "mean regret"),
    "posterior": ("mean_posterior_mass_true", None, "mean posterior mass on true model"),
}


class SchemaError(ValueError):
    """CSV does not match the declared aggregate schema."""


def _read_agg(csv_path: str | Path):
    expected = AGG_HEADER.split(",")
    with open(csv_path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{csv_path}: empty file") from None
        if header != expected:
            raise SchemaError(f"{csv_path}: header {header} != expected {expected}")
        cols = {name: [] for name in expected}
        for row in reader:
            if len(row) != len(expected):
                raise SchemaError(f"{csv_path}: row with {len(row)} fields, expected {len(expected)}")
            for name, value in zip(expected, row):
                cols[name].append(float(value))
    if not cols["t"]:
        raise SchemaError(f"{csv_path}: no data rows")
    return cols


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    v = first
    while v <= hi + 1e-12 * step:
        ticks.append(0.0 if abs(v) < 1e-12 * step else v)
        v += step
    return ticks


def _fmt_num(x: float) -> str:
    return format(x, ".6g")


def render_svg(csv_path: str | Path, kind: str, out_path: str | Path, log_x: bool = False) -> None:
    """Render one aggregate curve (with a +-1 std band when the schema carries
    a deviation column for this kind) to a standalone SVG file.

    The file is written only after the full document has been built, so a
    schema failure leaves no partial output behind.
    """
    if kind not in KINDS:
        raise SchemaError(f"unknown plot kind {kind!r}; choices: {sorted(KINDS)}")
    mean_col, std_col, y_label = KINDS[kind]
    cols = _read_agg(csv_path)
    ts = cols["t"]
    mean = cols[mean_col]
    std = cols[std_col] if std_col else None

    if log_x:
        if ts[0] <= 0:
            raise SchemaError("log-scaled x-axis requires positive t values")
        xs = [math.log10(t) for t in ts]
    else:
        xs = ts
    lo_y_candidates = [m - s for m, s in zip(mean, std)] if std else mean
    hi_y_candidates = [m + s for m, s in zip(mean, std)] if std else mean
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(lo_y_candidates), max(hi_y_candidates)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:  # flat curve: pad so the line sits mid-plot
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0

    inner_w = WIDTH - MARGIN_L - MARGIN_R
    inner_h = HEIGHT - MARGIN_T - MARGIN_B

    def px(x: float) -> float:
        return MARGIN_L + (x - x_lo) / (x_hi - x_lo) * inner_w

    def py(y: float) -> float:
        return MARGIN_T + (y_hi - y) / (y_hi - y_lo) * inner_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="20" text-anchor="middle" font-family="sans-serif" '
        f'font-size="14">{y_label} vs time</text>',
    ]
    if std:
        upper = [(px(x), py(m + s)) for x, m, s in zip(xs, mean, std)]
        lower = [(px(x), py(m - s)) for x, m, s in zip(xs, mean, std)]
        pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in upper + lower[::-1])
        parts.append(f'<polygon points="{pts}" fill="#9ecae1" fill-opacity="0.45" stroke="none"/>')
    mean_pts = " ".join(f"{px(x):.2f},{py(m):.2f}" for x, m in zip(xs, mean))
    parts.append(f'<polyline points="{mean_pts}" fill="none" stroke="#08519c" stroke-width="1.5"/>')

    axis_y = HEIGHT - MARGIN_B
    parts.append(
        f'<line x1="{MARGIN_L}" y1="{axis_y}" x2="{WIDTH - MARGIN_R}" y2="{axis_y}" '
        f'stroke="black" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T}" x2="{MARGIN_L}" y2="{axis_y}" '
        f'stroke="black" stroke-width="1"/>'
    )
    for tx in _nice_ticks(x_lo, x_hi):
        x = px(tx)
        label = _fmt_num(10.0**tx if log_x else tx)
        parts.append(f'<line x1="{x:.2f}" y1="{axis_y}" x2="{x:.2f}" y2="{axis_y + 5}" stroke="black"/>')
        parts.append(
            f'<text x="{x:.2f}" y="{axis_y + 18}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="11">{label}</text>'
        )
    for ty in _nice_ticks(y_lo, y_hi):
        y = py(ty)
        parts.append(f'<line x1="{MARGIN_L - 5}" y1="{y:.2f}" x2="{MARGIN_L}" y2="{y:.2f}" stroke="black"/>')
        parts.append(
            f'<text x="{MARGIN_L - 8}" y="{y + 4:.2f}" text-anchor="end" font-family="sans-serif" '
            f'font-size="11">{_fmt_num(ty)}</text>'
        )
    x_title = "t (steps, log scale)" if log_x else "t (steps)"
    parts.append(
        f'<text x="{MARGIN_L + inner_w / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{x_title}</text>'
    )
    parts.append(
        f'<text x="16" y="{MARGIN_T + inner_h / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {MARGIN_T + inner_h / 2:.1f})">{y_label}</text>'
    )
    parts.append("</svg>")
    Path(out_path).write_text("\n".join(parts) + "\n")
