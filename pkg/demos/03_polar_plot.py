"""Draw a polar Y-index plot from hand-entered credit counts.

    python3 demos/03_polar_plot.py > countries.svg

Radius is j = fp + rp and angle is atan(rp / fp), so points on the dashed
diagonal split credit evenly between first and corresponding authorship.
"""

from wosideology.render import PlotSpec, render_polar
from wosideology.yindex import compute_y_index, recover_counts

COUNTS = {"USA": (253, 258), "United Kingdom": (44, 41), "Canada": (19, 20), "China": (6, 4), "Israel": (9, 8)}

ys = [compute_y_index(fp, rp, country) for country, (fp, rp) in COUNTS.items()]
for y in sorted(ys, key=lambda y: -y.j):
    # (j, h) alone is enough to get the counts back
    assert recover_counts(y.j, y.h) == (y.fp, y.rp)
print(render_polar(ys, PlotSpec(label_min_j=10), title="Y-index by country"))
