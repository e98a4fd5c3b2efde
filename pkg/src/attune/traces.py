"""Trust trace writers: CSV and a minimal SVG polyline plot."""

from __future__ import annotations

import os
from collections.abc import Sequence
from pathlib import Path

from .engine import TrustSample

TRACE_COLUMNS = ("t", "conf_h", "conf_e", "conf_i", "i", "p", "instant_trust", "short_term_trust")


def trace_csv(samples: Sequence[TrustSample]) -> str:
    lines = [",".join(TRACE_COLUMNS)]
    for s in samples:
        lines.append(",".join(repr(float(getattr(s, c))) for c in TRACE_COLUMNS))
    return "\n".join(lines) + "\n"


def write_trace_csv(samples: Sequence[TrustSample], path: str | os.PathLike[str]) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(trace_csv(samples))
    return path


def trace_svg(samples: Sequence[TrustSample], title: str = "", width: int = 640,
              height: int = 240, margin: int = 32) -> str:
    """Polyline of short-term trust against time on a fixed [0, 1] axis."""
    plot_w, plot_h = width - 2 * margin, height - 2 * margin
    if samples:
        t0, t1 = samples[0].t, samples[-1].t
    else:
        t0, t1 = 0.0, 1.0
    span = (t1 - t0) or 1.0

    def px(s: TrustSample) -> str:
        x = margin + plot_w * (s.t - t0) / span
        y = margin + plot_h * (1.0 - s.short_term_trust)
        return f"{x:.2f},{y:.2f}"

    points = " ".join(px(s) for s in samples)
    title = title.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    return "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="{margin}" y="{margin}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#888" stroke-width="1"/>',
        f'<text x="{margin}" y="{margin - 10}" font-family="sans-serif" font-size="12">{title}</text>',
        f'<text x="4" y="{margin + 4}" font-family="sans-serif" font-size="10">1</text>',
        f'<text x="4" y="{margin + plot_h + 4}" font-family="sans-serif" font-size="10">0</text>',
        f'<text x="{margin}" y="{height - 8}" font-family="sans-serif" font-size="10">t={t0:g}s</text>',
        f'<text x="{width - margin}" y="{height - 8}" font-family="sans-serif" font-size="10" '
        f'text-anchor="end">t={t1:g}s</text>',
        f'<polyline fill="none" stroke="#1f77b4" stroke-width="1.5" points="{points}"/>',
        "</svg>",
    ]) + "\n"


def write_trace_svg(samples: Sequence[TrustSample], path: str | os.PathLike[str],
                    title: str = "") -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(trace_svg(samples, title))
    return path
