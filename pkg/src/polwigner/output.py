"""Serialization of grids and reports: CSV, JSON and SVG heatmaps."""

import json
import math

import numpy as np

__all__ = ["fmt", "grid_to_csv", "grid_to_json", "grid_to_svg", "table_to_csv", "dumps"]

# viridis anchor colours, interpolated linearly
_RAMP = [
    (0.0, (68, 1, 84)), (0.125, (71, 44, 122)), (0.25, (59, 81, 139)),
    (0.375, (44, 113, 142)), (0.5, (33, 144, 141)), (0.625, (39, 173, 129)),
    (0.75, (92, 200, 99)), (0.875, (170, 220, 50)), (1.0, (253, 231, 37)),
]


def fmt(x):
    """17 significant digits: enough to round-trip a double."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _header(meta):
    return [f"# {key}={fmt(meta[key])}" for key in sorted(meta)]


def grid_to_csv(grid):
    lines = _header(grid.metadata())
    lines.append(f"{grid.axis1.name},{grid.axis2.name},w")
    a1, a2 = grid.axis1.values(), grid.axis2.values()
    for i, x in enumerate(a1):
        for j, y in enumerate(a2):
            lines.append(f"{fmt(x)},{fmt(y)},{fmt(grid.values[i, j])}")
    return "\n".join(lines) + "\n"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def dumps(obj):
    return json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n"


def grid_to_json(grid, peaks=None):
    doc = {
        "metadata": grid.metadata(),
        "axis1": grid.axis1.values(),
        "axis2": grid.axis2.values(),
        "values": grid.values,
    }
    if peaks is not None:
        doc["peaks"] = [p._asdict() for p in peaks]
    return dumps(doc)


def _colour(t):
    t = min(max(t, 0.0), 1.0)
    for (t0, c0), (t1, c1) in zip(_RAMP, _RAMP[1:]):
        if t <= t1:
            u = 0.0 if t1 == t0 else (t - t0) / (t1 - t0)
            r, g, b = (round(a + (b_ - a) * u) for a, b_ in zip(c0, c1))
            return f"#{r:02x}{g:02x}{b:02x}"
    return "#fde725"


def grid_to_svg(grid, cell=6):
    v = grid.values
    n1, n2 = v.shape
    lo, hi = float(v.min()), float(v.max())
    span = hi - lo
    margin, bar = 50, 16
    width, height = margin + n1 * cell + 3 * bar + 60, margin + n2 * cell + 40
    meta = " ".join(f"{k}={fmt(val)}" for k, val in sorted(grid.metadata().items()))
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f"<!-- {meta} -->",
    ]
    # axis1 runs left to right, axis2 bottom to top
    for i in range(n1):
        for j in range(n2):
            t = 0.5 if span == 0 else (v[i, j] - lo) / span
            x, y = margin + i * cell, margin + (n2 - 1 - j) * cell
            out.append(f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" fill="{_colour(t)}"/>')
    bx = margin + n1 * cell + bar
    for s in range(64):
        y = margin + (63 - s) * n2 * cell / 64
        out.append(f'<rect x="{bx}" y="{y:.2f}" width="{bar}" height="{n2 * cell / 64 + 0.5:.2f}" '
                   f'fill="{_colour(s / 63)}"/>')
    out += [
        f'<text x="{bx + bar + 4}" y="{margin + 10}" font-size="10">max {fmt(hi)[:10]}</text>',
        f'<text x="{bx + bar + 4}" y="{margin + n2 * cell}" font-size="10">min {fmt(lo)[:10]}</text>',
        f'<text x="{margin + n1 * cell / 2}" y="{margin + n2 * cell + 25}" font-size="12" '
        f'text-anchor="middle">{grid.axis1.name}</text>',
        f'<text x="15" y="{margin + n2 * cell / 2}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 15 {margin + n2 * cell / 2})">{grid.axis2.name}</text>',
        "</svg>",
    ]
    return "\n".join(out) + "\n"


def table_to_csv(columns, rows, meta=None):
    lines = _header(meta or {})
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(fmt(row[c]) for c in columns))
    return "\n".join(lines) + "\n"
