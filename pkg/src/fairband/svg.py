"""Static SVG rendering of a trade-off band.

The plot shows accuracy on the x axis and fairness violation on the y axis,
with the three audit regions shaded: above the upper envelope (sub-optimal),
between the envelopes (permissible) and below the lower envelope (unlikely).
"""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

COLORS = {
    "Suboptimal": "#f4c2d7",
    "Permissible": "#c8e6c9",
    "Unlikely": "#c5d8f2",
    "curve": "#1b5e20",
    "truth": "#000000",
    "point": "#d84315",
}

WIDTH, HEIGHT = 640, 480
MARGIN = {"left": 70, "right": 170, "top": 30, "bottom": 55}


def _step_path(psi, values, side):
    """Vertices of the step function; ``side`` is "upper" (left-continuous) or "lower" (right-continuous)."""
    pts = []
    for i, (p, v) in enumerate(zip(psi, values)):
        if i:
            prev = values[i - 1]
            pts.append((p, v if side == "upper" else prev))
        pts.append((p, v))
    return pts


def render_band(band, path=None, title: str = "", x_range=None, points=(), truth=None) -> str:
    """Return (and optionally write) an SVG document for ``band``.

    ``points`` is an iterable of ``(label, accuracy, violation)``; ``truth`` an
    optional ``(accuracy array, violation array)`` drawn as a dashed curve.
    """
    psi = np.asarray(band.psi, dtype=float)
    if x_range is None:
        accs = [p.accuracy for p in band.yoto_curve] + [p[1] for p in points]
        lo = min(accs) if accs else psi[0]
        hi = max(accs) if accs else psi[-1]
        pad = max(0.02, 0.05 * (hi - lo))
        x_range = (max(psi[0], lo - pad), min(psi[-1], hi + pad))
    x0, x1 = x_range
    if not x1 > x0:
        x0, x1 = psi[0], psi[-1]
    y0, y1 = 0.0, 1.0
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def sx(v):
        return MARGIN["left"] + (min(max(v, x0), x1) - x0) / (x1 - x0) * pw

    def sy(v):
        return MARGIN["top"] + (1.0 - (min(max(v, y0), y1) - y0) / (y1 - y0)) * ph

    def poly(pts):
        return " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)

    keep = (psi >= x0) & (psi <= x1)
    grid = np.concatenate([[x0], psi[keep], [x1]])
    upper = band.upper_at(grid)
    lower = band.lower_at(grid)
    up_pts = _step_path(grid, upper, "upper")
    lo_pts = _step_path(grid, lower, "lower")

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        # sub-optimal: everything above the upper envelope
        f'<polygon fill="{COLORS["Suboptimal"]}" points="{poly(up_pts + [(x1, y1), (x0, y1)])}"/>',
        f'<polygon fill="{COLORS["Permissible"]}" points="{poly(up_pts + lo_pts[::-1])}"/>',
        f'<polygon fill="{COLORS["Unlikely"]}" points="{poly(lo_pts + [(x1, y0), (x0, y0)])}"/>',
        f'<polyline fill="none" stroke="#555" stroke-width="1" points="{poly(up_pts)}"/>',
        f'<polyline fill="none" stroke="#555" stroke-width="1" points="{poly(lo_pts)}"/>',
    ]
    if truth is not None:
        ta, tv = (np.asarray(v, dtype=float) for v in truth)
        m = (ta >= x0) & (ta <= x1)
        order = np.argsort(ta[m])
        out.append(f'<polyline fill="none" stroke="{COLORS["truth"]}" stroke-dasharray="5,3" '
                   f'stroke-width="1.5" points="{poly(zip(ta[m][order], tv[m][order]))}"/>')
    if band.yoto_curve:
        curve = sorted((p.accuracy, p.violation) for p in band.yoto_curve)
        out.append(f'<polyline fill="none" stroke="{COLORS["curve"]}" stroke-width="2" points="{poly(curve)}"/>')
    for label, acc, viol in points:
        out.append(f'<circle cx="{sx(acc):.2f}" cy="{sy(viol):.2f}" r="4" fill="{COLORS["point"]}">'
                   f'<title>{escape(str(label))}</title></circle>')

    # axes and ticks
    bx, by = MARGIN["left"], MARGIN["top"] + ph
    out.append(f'<line x1="{bx}" y1="{by}" x2="{bx + pw}" y2="{by}" stroke="black"/>')
    out.append(f'<line x1="{bx}" y1="{MARGIN["top"]}" x2="{bx}" y2="{by}" stroke="black"/>')
    for t in np.linspace(x0, x1, 6):
        out.append(f'<line x1="{sx(t):.2f}" y1="{by}" x2="{sx(t):.2f}" y2="{by + 5}" stroke="black"/>')
        out.append(f'<text x="{sx(t):.2f}" y="{by + 18}" text-anchor="middle">{t:.3f}</text>')
    for t in np.linspace(y0, y1, 6):
        out.append(f'<line x1="{bx - 5}" y1="{sy(t):.2f}" x2="{bx}" y2="{sy(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{bx - 8}" y="{sy(t) + 4:.2f}" text-anchor="end">{t:.1f}</text>')
    out.append(f'<text x="{bx + pw / 2}" y="{HEIGHT - 12}" text-anchor="middle">accuracy</text>')
    out.append(f'<text x="18" y="{MARGIN["top"] + ph / 2}" text-anchor="middle" '
               f'transform="rotate(-90 18 {MARGIN["top"] + ph / 2})">fairness violation</text>')
    if title:
        out.append(f'<text x="{bx + pw / 2}" y="18" text-anchor="middle" font-weight="bold">{escape(title)}</text>')

    legend = [("Suboptimal", "rect"), ("Permissible", "rect"), ("Unlikely", "rect"), ("curve", "line")]
    if truth is not None:
        legend.append(("truth", "dash"))
    if points:
        legend.append(("point", "dot"))
    names = {"curve": "YOTO curve", "truth": "ground truth", "point": "baselines"}
    lx = bx + pw + 15
    for i, (key, kind) in enumerate(legend):
        ly = MARGIN["top"] + 10 + 22 * i
        if kind == "rect":
            out.append(f'<rect x="{lx}" y="{ly - 9}" width="14" height="12" fill="{COLORS[key]}" stroke="#555"/>')
        elif kind == "dot":
            out.append(f'<circle cx="{lx + 7}" cy="{ly - 3}" r="4" fill="{COLORS[key]}"/>')
        else:
            dash = ' stroke-dasharray="5,3"' if kind == "dash" else ""
            out.append(f'<line x1="{lx}" y1="{ly - 3}" x2="{lx + 14}" y2="{ly - 3}" '
                       f'stroke="{COLORS[key]}" stroke-width="2"{dash}/>')
        out.append(f'<text x="{lx + 20}" y="{ly + 1}">{names.get(key, key)}</text>')
    out.append("</svg>")
    doc = "\n".join(out) + "\n"
    if path is not None:
        Path(path).write_text(doc)
    return doc
