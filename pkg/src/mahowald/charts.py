"""Adams chart extraction and rendering (TSV / JSON / SVG).

A chart is the generator census of a minimal resolution laid out in
(stem, filtration) coordinates, plus h0/h1/h2 multiplication lines read
off from Yoneda products where the target bidegree is inside the
resolution window.  All three serializations are deterministic: fixed
ordering, no timestamps, and the SVG embeds no fonts or scripts.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from typing import Optional

from .gradedmod import sphere_module
from .resolution import FreeResolution, minimal_resolution, yoneda_product

CHART_FORMAT = "chart/v1"

Dot = tuple[int, int]  # (stem, filtration)
Line = tuple[int, tuple[int, int, int], tuple[int, int, int]]


@dataclass(frozen=True)
class ChartWindow:
    stem_min: int
    stem_max: int
    s_max: int

    def contains(self, stem: int, s: int) -> bool:
        return self.stem_min <= stem <= self.stem_max and 0 <= s <= self.s_max


@dataclass
class Chart:
    window: ChartWindow
    dots: dict[Dot, list[str]] = field(default_factory=dict)
    lines: list[Line] = field(default_factory=list)

    def count(self, stem: int, s: int) -> int:
        return len(self.dots.get((stem, s), ()))

    def sorted_dots(self):
        return sorted(self.dots.items())

    # -- TSV: dot census only (diffable golden format) ---------------------

    def to_tsv(self) -> str:
        out = ["stem\tfiltration\tcount\tlabels"]
        for (stem, s), labels in self.sorted_dots():
            out.append(f"{stem}\t{s}\t{len(labels)}\t{';'.join(labels)}")
        return "\n".join(out) + "\n"

    # -- JSON: lossless ----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "format": CHART_FORMAT,
            "window": {
                "stem_min": self.window.stem_min,
                "stem_max": self.window.stem_max,
                "s_max": self.window.s_max,
            },
            "dots": [
                {"stem": stem, "filtration": s, "count": len(labels),
                 "labels": labels}
                for (stem, s), labels in self.sorted_dots()
            ],
            "lines": [
                {"h": h, "from": list(a), "to": list(b)}
                for h, a, b in sorted(self.lines)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"

    @classmethod
    def from_json_dict(cls, d: dict) -> "Chart":
        if d.get("format") != CHART_FORMAT:
            raise ValueError(f"not a {CHART_FORMAT} document")
        w = d["window"]
        chart = cls(ChartWindow(w["stem_min"], w["stem_max"], w["s_max"]))
        for row in d["dots"]:
            labels = list(row["labels"])
            if row["count"] != len(labels):
                raise ValueError("count does not match labels")
            chart.dots[(row["stem"], row["filtration"])] = labels
        chart.lines = sorted(
            (ln["h"], tuple(ln["from"]), tuple(ln["to"])) for ln in d["lines"]
        )
        return chart

    @classmethod
    def from_json(cls, text: str) -> "Chart":
        return cls.from_json_dict(json.loads(text))

    @classmethod
    def from_tsv(cls, text: str, window: ChartWindow) -> "Chart":
        lines = [ln for ln in text.splitlines() if ln]
        if not lines or lines[0].split("\t") != ["stem", "filtration", "count",
                                                 "labels"]:
            raise ValueError("bad TSV header")
        chart = cls(window)
        for ln in lines[1:]:
            stem, s, count, labels = ln.split("\t")
            parts = labels.split(";") if labels else []
            if int(count) != len(parts):
                raise ValueError(f"count mismatch in row {ln!r}")
            chart.dots[(int(stem), int(s))] = parts
        return chart


@functools.lru_cache(maxsize=1)
def _hopf_classes():
    """h0, h1, h2 on a throwaway sphere resolution, for structure lines."""
    r = minimal_resolution(sphere_module(0), 1, 4)
    return [r.ext_class(1, 1 << k, 1, name=f"h{k}") for k in range(3)]


def to_table(r: FreeResolution, window: ChartWindow,
             with_lines: bool = True) -> Chart:
    """Census of r's generators over the window, with h0/h1/h2 lines.

    Lines are computed per basis dot whenever the product bidegree is still
    inside the resolution window; counts are exactly the generator counts.
    """
    if window.s_max > r.s_max or window.stem_max + window.s_max > r.t_max:
        raise ValueError(
            f"window (stems {window.stem_min}..{window.stem_max}, "
            f"s<={window.s_max}) exceeds resolution bounds "
            f"(s_max={r.s_max}, t_max={r.t_max})"
        )
    chart = Chart(window)
    for s in range(min(window.s_max, r.s_max) + 1):
        for g in r.gens[s]:
            stem = g.t - s
            if window.stem_min <= stem <= window.stem_max:
                chart.dots.setdefault((stem, s), []).append(g.label)
    if not with_lines:
        return chart
    hopf = _hopf_classes()
    for (stem, s), labels in chart.sorted_dots():
        t = stem + s
        dim = r.ext_dim(s, t)
        for k, hk in enumerate(hopf):
            stem2, s2 = stem + (1 << k) - 1, s + 1
            if not window.contains(stem2, s2):
                continue
            if s2 > r.s_max or t + (1 << k) > r.t_max:
                continue
            for i in range(dim):
                prod = yoneda_product(r, hk, r.ext_class(s, t, 1 << i))
                for j in range(prod.coords.n):
                    if prod.coords[j]:
                        chart.lines.append(
                            (k, (stem, s, i), (stem2, s2, j))
                        )
    chart.lines.sort()
    return chart


# ---------------------------------------------------------------------- SVG

_UNIT = 24          # lattice pitch in px
_DOT_R = 3
_MARGIN = 42
_DOT_SPREAD = 8     # horizontal fan-out of multiple dots in one bidegree


def _dot_xy(window: ChartWindow, stem: int, s: int, i: int, n: int):
    x = _MARGIN + (stem - window.stem_min) * _UNIT + (2 * i - (n - 1)) * (
        _DOT_SPREAD // 2
    )
    y = _MARGIN + (window.s_max - s) * _UNIT
    return x, y


def render_svg(chart: Chart, options: Optional[dict] = None) -> str:
    """SVG 1.1 document: integer-lattice dots, vertical h0 lines, slope-1 h1
    lines, h2 lines spanning three stems.  Byte-deterministic."""
    w = chart.window
    ncols = max(w.stem_max - w.stem_min + 1, 1)
    nrows = w.s_max + 1
    width = 2 * _MARGIN + (ncols - 1) * _UNIT
    height = 2 * _MARGIN + (nrows - 1) * _UNIT
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    ax = _MARGIN - _UNIT // 2
    ay = height - _MARGIN + _UNIT // 2
    out.append(
        f'<path d="M {ax} {_MARGIN - _UNIT // 2} L {ax} {ay} '
        f'L {width - _MARGIN + _UNIT // 2} {ay}" '
        'fill="none" stroke="black" stroke-width="1"/>'
    )
    for c in range(ncols):
        x = _MARGIN + c * _UNIT
        out.append(
            f'<text x="{x}" y="{ay + 16}" font-family="monospace" '
            f'font-size="10" text-anchor="middle">{w.stem_min + c}</text>'
        )
    for srow in range(nrows):
        y = _MARGIN + (w.s_max - srow) * _UNIT
        out.append(
            f'<text x="{ax - 6}" y="{y + 3}" font-family="monospace" '
            f'font-size="10" text-anchor="end">{srow}</text>'
        )

    counts = {pos: len(labels) for pos, labels in chart.dots.items()}
    for h, (st1, s1, i), (st2, s2, j) in sorted(chart.lines):
        x1, y1 = _dot_xy(w, st1, s1, i, counts.get((st1, s1), 1))
        x2, y2 = _dot_xy(w, st2, s2, j, counts.get((st2, s2), 1))
        out.append(
            f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
            f'stroke="black" stroke-width="1" class="h{h}"/>'
        )
    for (stem, s), labels in chart.sorted_dots():
        n = len(labels)
        for i, label in enumerate(labels):
            x, y = _dot_xy(w, stem, s, i, n)
            out.append(
                f'<circle cx="{x}" cy="{y}" r="{_DOT_R}" fill="black">'
                f'<title>{label} ({stem},{s})</title></circle>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
