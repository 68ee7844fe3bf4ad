"""
Rendering charts to SVG
=======================

Charts serialize to TSV (diffable), JSON (lossless round trip), and
static SVG 1.1 — no scripts, no external fonts, byte-deterministic.
Dots sit on the integer (stem, filtration) lattice; h0 lines are
vertical, h1 lines have slope 1.
"""

import os

from mahowald import (
    Chart,
    ChartWindow,
    Field,
    minimal_resolution,
    render_svg,
    sphere_module,
    stunted_module,
    to_table,
)

out_dir = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(out_dir, exist_ok=True)

# the sphere through stem 13
r = minimal_resolution(sphere_module(0), 7, 20)
chart = to_table(r, ChartWindow(0, 13, 7))
svg = render_svg(chart)
path = os.path.join(out_dir, "sphere.svg")
with open(path, "w") as fh:
    fh.write(svg)
print(f"wrote {path} ({len(svg)} bytes, {svg.count('<circle')} dots, "
      f"{svg.count('<line')} structure lines)")

# a negative-cell chart: the real tower cut at stage one
m = stunted_module(Field.R, -1, 6)
rc = minimal_resolution(m, 5, 8)
cut = to_table(rc, ChartWindow(-1, 3, 5))
path = os.path.join(out_dir, "real_cut.svg")
with open(path, "w") as fh:
    fh.write(render_svg(cut))
print(f"wrote {path}")

# round trip through JSON is exact
assert Chart.from_json(chart.to_json()) == chart
print("JSON round trip: exact")
print()
print(chart.to_tsv()[:300] + "...")
