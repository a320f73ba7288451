"""Display-only geography figures.

Renders the (c2.c1, c1^3) scatter next to the guide rays c1^3 = b * c2.c1
for the bounds that matter here.  Floats appear in this module only; every
verdict elsewhere stays exact.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Sequence

GUIDE_SLOPES: tuple[tuple[Fraction, str], ...] = (
    (Fraction(4), "4"),
    (Fraction(25, 8), "25/8"),
    (Fraction(3), "3"),
    (Fraction(121, 41), "121/41"),
)


def render_geography(
    rows: Sequence[dict],
    path: str | Path,
    title: str = "Chern number geography",
) -> Path:
    """Scatter candidate classes in the (c2.c1, c1^3) plane and save the figure.

    ``rows`` are geography records with keys R, q, c2c1, c13 (rationals or
    canonical strings).  Returns the written path.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    fig, ax = plt.subplots(figsize=(7.5, 5.5))
    xs = [float(Fraction(str(row["c2c1"]))) for row in rows]
    ys = [float(Fraction(str(row["c13"]))) for row in rows]
    x_max = max(xs, default=1.0) * 1.15 + 0.5

    for slope, label in GUIDE_SLOPES:
        s = float(slope)
        ax.plot([0, x_max], [0, s * x_max], lw=0.8, ls="--", color="gray", zorder=1)
        ax.annotate(
            label,
            xy=(x_max, s * x_max),
            xytext=(-2, 2),
            textcoords="offset points",
            ha="right",
            fontsize=8,
            color="gray",
        )

    if rows:
        ax.scatter(xs, ys, s=28, color="tab:red", zorder=3)
        for row, x, y in zip(rows, xs, ys):
            tag = str(row.get("R", ""))
            if row.get("q") not in (None, ""):
                tag = f"q={row['q']} {tag}"
            ax.annotate(
                tag,
                xy=(x, y),
                xytext=(4, 4),
                textcoords="offset points",
                fontsize=8,
            )

    ax.set_xlim(0, x_max)
    ax.set_ylim(bottom=0)
    ax.set_xlabel("c2 . c1")
    ax.set_ylabel("c1 ^ 3")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
