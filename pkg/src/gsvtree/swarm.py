"""Deterministic SVG swarm plot of per-group attributions.

No plotting dependency: the SVG is assembled from strings with fixed
float formatting, and vertical jitter comes from a hash of the seed and
point identity, so the same inputs always yield the same bytes.
"""

from __future__ import annotations

import hashlib
from typing import Sequence

from .aggregate import SwarmPoint, group_order_by_spread

# diverging colormap stops: low, mid, high
_LOW = (0x3B, 0x4C, 0xC0)
_MID = (0xF7, 0xF7, 0xF7)
_HIGH = (0xB4, 0x04, 0x26)

BAND_HEIGHT = 36
MARGIN_LEFT = 150
MARGIN_RIGHT = 30
MARGIN_TOP = 40
MARGIN_BOTTOM = 30
PLOT_WIDTH = 640
POINT_RADIUS = 3.0


def _fmt(value: float) -> str:
    return f"{value:.3f}"


def color_for(t: float) -> str:
    """Hex color on the diverging ramp for t in [0, 1]."""
    t = min(1.0, max(0.0, t))
    if t <= 0.5:
        a, b, u = _LOW, _MID, t * 2.0
    else:
        a, b, u = _MID, _HIGH, (t - 0.5) * 2.0
    rgb = tuple(round(c0 + (c1 - c0) * u) for c0, c1 in zip(a, b))
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def jitter_for(seed: int, row_id: str, group: str) -> float:
    """Stable jitter in [-1, 1] from a hash of seed and point identity."""
    digest = hashlib.sha256(f"{seed}:{row_id}:{group}".encode()).digest()
    raw = int.from_bytes(digest[:8], "big")
    return raw / float(1 << 64) * 2.0 - 1.0


def render_swarm_svg(
    points: Sequence[SwarmPoint],
    seed: int = 0,
    title: str = "Group attribution swarm",
    group_order: Sequence[str] | None = None,
) -> str:
    """Render points as one horizontal band per group.

    Horizontal position is the attribution value on a shared axis with a
    zero line; vertical position is hashed jitter within the band; fill
    encodes the normalized group value.  Bands are ordered by mean
    absolute attribution unless ``group_order`` is given.
    """
    if not points:
        raise ValueError("no points to render")
    if group_order is None:
        group_order = group_order_by_spread(points)
    else:
        group_order = list(group_order)
        present = {p.group for p in points}
        missing = present - set(group_order)
        if missing:
            raise ValueError(f"group_order omits groups: {sorted(missing)}")
    band_of = {g: i for i, g in enumerate(group_order)}

    lo = min(p.gsv for p in points)
    hi = max(p.gsv for p in points)
    lo = min(lo, 0.0)
    hi = max(hi, 0.0)
    if hi == lo:
        hi = lo + 1.0
    span = hi - lo

    width = MARGIN_LEFT + PLOT_WIDTH + MARGIN_RIGHT
    height = MARGIN_TOP + BAND_HEIGHT * len(group_order) + MARGIN_BOTTOM

    def x_of(v: float) -> float:
        return MARGIN_LEFT + (v - lo) / span * PLOT_WIDTH

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">'
    )
    out.append(f'<title>{title}</title>')
    out.append(f'<rect width="{width}" height="{height}" fill="#ffffff"/>')
    out.append(
        f'<text x="{MARGIN_LEFT}" y="24" font-family="sans-serif" '
        f'font-size="14" fill="#333333">{title}</text>'
    )
    zero_x = _fmt(x_of(0.0))
    out.append(
        f'<line x1="{zero_x}" y1="{MARGIN_TOP}" x2="{zero_x}" '
        f'y2="{height - MARGIN_BOTTOM}" stroke="#888888" '
        f'stroke-dasharray="4 3"/>'
    )
    for g, name in enumerate(group_order):
        y_mid = MARGIN_TOP + BAND_HEIGHT * g + BAND_HEIGHT / 2
        out.append(
            f'<text x="{MARGIN_LEFT - 10}" y="{_fmt(y_mid + 4)}" '
            f'font-family="sans-serif" font-size="11" fill="#333333" '
            f'text-anchor="end">{name}</text>'
        )
    for g in range(len(group_order)):
        out.append(f'<g class="swarm" data-band="{g}">')
        band = [p for p in points if band_of[p.group] == g]
        y_mid = MARGIN_TOP + BAND_HEIGHT * g + BAND_HEIGHT / 2
        amp = BAND_HEIGHT / 2 - POINT_RADIUS - 1
        for p in band:
            cy = y_mid + jitter_for(seed, p.row_id, p.group) * amp
            out.append(
                f'<circle cx="{_fmt(x_of(p.gsv))}" cy="{_fmt(cy)}" '
                f'r="{_fmt(POINT_RADIUS)}" fill="{color_for(p.color_value)}" '
                f'fill-opacity="0.85"/>'
            )
        out.append('</g>')
    out.append('</svg>')
    return "\n".join(out) + "\n"
