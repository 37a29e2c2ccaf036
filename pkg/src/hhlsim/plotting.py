"""SVG convergence plots: log-scale error curves plus a resolution guide line.

Text is kept as real SVG <text> elements (not paths) so downstream tooling
can locate series labels inside the file.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

plt.rcParams["svg.fonttype"] = "none"
plt.rcParams["svg.hashsalt"] = "hhlsim"


def write_convergence_svg(
    path,
    series: dict,
    guide: float | None = None,
    x_label: str = "iteration",
    title: str = "",
    log_x: bool = False,
    markers: bool = False,
) -> None:
    """Plot median error curves; `series` maps label -> (x, y) arrays."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for label in sorted(series):
        x, y = series[label]
        ax.plot(x, y, marker="o" if markers else None, markersize=3, label=label)
    if guide is not None:
        ax.axhline(guide, color="black", linestyle="--", linewidth=1, label="resolution")
    ax.set_yscale("log")
    if log_x:
        ax.set_xscale("log")
    ax.set_xlabel(x_label)
    ax.set_ylabel("relative error")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
