"""CSV/JSON writers and dependency-free SVG plots.

Outputs carry no timestamps so reruns with the same config and seed are
byte-identical.
"""

import csv
import html
import json
import math
from pathlib import Path

import numpy as np

_W, _H, _PAD = 640, 420, 60
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")


def fmt(x):
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".12g")


def provenance(command, cfg, **extra):
    fields = [f"fluxlab {command}", f"config_sha256={cfg.sha256}", f"seed={cfg.seed}"]
    fields += [f"{k}={fmt(v) if not isinstance(v, str) else v}" for k, v in extra.items()]
    return " ".join(fields)


def write_csv(path, header, rows, comment):
    path = Path(path)
    with path.open("w", newline="") as fh:
        fh.write(f"# {comment}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        obj = float(obj)
        return obj if math.isfinite(obj) else None
    return obj


def write_json(path, obj):
    path = Path(path)
    path.write_text(json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")
    return path


def _scale(lo, hi, a, b):
    if not hi > lo:
        lo, hi = lo - 0.5, hi + 0.5
    return lambda v: a + (np.asarray(v) - lo) * (b - a) / (hi - lo)


def _frame(title, xlabel, ylabel, xr, yr):
    e = html.escape
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" font-family="sans-serif" font-size="12">',
        f'<rect x="{_PAD}" y="{_PAD / 2}" width="{_W - 1.5 * _PAD}" height="{_H - 1.5 * _PAD}" fill="none" stroke="black"/>',
        f'<text x="{_W / 2}" y="18" text-anchor="middle">{e(title)}</text>',
        f'<text x="{_W / 2}" y="{_H - 12}" text-anchor="middle">{e(xlabel)}</text>',
        f'<text x="14" y="{_H / 2}" text-anchor="middle" transform="rotate(-90 14 {_H / 2})">{e(ylabel)}</text>',
        f'<text x="{_PAD}" y="{_H - _PAD + 16}" text-anchor="middle">{fmt(xr[0])[:8]}</text>',
        f'<text x="{_W - _PAD / 2}" y="{_H - _PAD + 16}" text-anchor="middle">{fmt(xr[1])[:8]}</text>',
        f'<text x="{_PAD - 4}" y="{_H - _PAD}" text-anchor="end">{fmt(yr[0])[:8]}</text>',
        f'<text x="{_PAD - 4}" y="{_PAD / 2 + 4}" text-anchor="end">{fmt(yr[1])[:8]}</text>',
    ]
    return parts


def svg_lines(path, x, series, title="", xlabel="", ylabel=""):
    """Polyline plot of each named series against x; NaNs break the line."""
    x = np.asarray(x, dtype=float)
    ys = {k: np.asarray(v, dtype=float) for k, v in series.items()}
    finite = np.concatenate([v[np.isfinite(v)] for v in ys.values()] + [np.zeros(0)])
    yr = (finite.min(), finite.max()) if finite.size else (0.0, 1.0)
    xr = (x.min(), x.max())
    sx = _scale(*xr, _PAD, _W - _PAD / 2)
    sy = _scale(*yr, _H - _PAD, _PAD / 2)
    parts = _frame(title, xlabel, ylabel, xr, yr)
    for idx, (name, y) in enumerate(ys.items()):
        color = _COLORS[idx % len(_COLORS)]
        run = []
        for xi, yi in zip(x, y):
            if np.isfinite(yi):
                run.append(f"{sx(xi):.2f},{sy(yi):.2f}")
                continue
            if len(run) > 1:
                parts.append(f'<polyline fill="none" stroke="{color}" points="{" ".join(run)}"/>')
            run = []
        if len(run) > 1:
            parts.append(f'<polyline fill="none" stroke="{color}" points="{" ".join(run)}"/>')
        parts.append(f'<text x="{_W - _PAD}" y="{_PAD / 2 + 16 * (idx + 1)}" fill="{color}" text-anchor="end">{html.escape(name)}</text>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
    return Path(path)


def svg_heatmap(path, xs, ys, z, title="", xlabel="", ylabel=""):
    """Cells z[i, j] at (xs[j], ys[i]); NaN cells are drawn grey."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    z = np.asarray(z, dtype=float)
    finite = z[np.isfinite(z)]
    lo, hi = (finite.min(), finite.max()) if finite.size else (0.0, 1.0)
    span = hi - lo or 1.0
    parts = _frame(f"{title} [{fmt(lo)[:8]}, {fmt(hi)[:8]}]", xlabel, ylabel, (xs.min(), xs.max()), (ys.min(), ys.max()))
    cw = (_W - 1.5 * _PAD) / xs.size
    ch = (_H - 1.5 * _PAD) / ys.size
    for i in range(ys.size):
        for j in range(xs.size):
            v = z[i, j]
            if np.isfinite(v):
                u = (v - lo) / span
                color = f"rgb({int(255 * u)},{int(80 + 100 * (1 - abs(2 * u - 1)))},{int(255 * (1 - u))})"
            else:
                color = "#bbbbbb"
            x = _PAD + j * cw
            y = _H - _PAD - (i + 1) * ch
            parts.append(f'<rect x="{x:.2f}" y="{y:.2f}" width="{cw:.2f}" height="{ch:.2f}" fill="{color}"/>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
    return Path(path)
