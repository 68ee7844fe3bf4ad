"""
The classical Adams chart of the sphere
=======================================

Build a minimal free resolution of F2 over the mod-2 Steenrod algebra and
read off the E2 chart: generator counts are Ext dimensions, the stem-0
column is the infinite h0 tower, and the h_i classes sit at (1, 2^i).
"""

from mahowald import ChartWindow, minimal_resolution, sphere_module, to_table

r = minimal_resolution(sphere_module(0), s_max=8, t_max=24)

# every level-1 generator is an indecomposable Sq^{2^i}
print("h_i positions (s=1):", sorted(g.t for g in r.gens[1]))

chart = to_table(r, ChartWindow(0, 14, 8))
print()
print("stem  filtration  classes")
for (stem, s), labels in chart.sorted_dots():
    print(f"{stem:4}  {s:10}  {', '.join(labels)}")

# the h0 tower: one dot in stem 0 at every filtration, glued by h0 lines
tower = [s for (stem, s) in chart.dots if stem == 0]
print()
print("stem-0 tower filtrations:", sorted(tower))
h0_lines = [ln for ln in chart.lines if ln[0] == 0 and ln[1][0] == 0]
print("vertical h0 lines in stem 0:", len(h0_lines))
