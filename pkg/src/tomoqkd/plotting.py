"""Figure rendering for sweep reports.

Uses the Agg backend so files render in headless environments. The CSV
written next to the figure stays the primary artifact; the figure is a
convenience view of the same rows.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_STYLES = ("-", "--", "-.", ":")


def render_sweep_figure(rows, path, *, channel: str, parameter: str, protocols) -> None:
    """Plot raw key rate against the swept parameter, one line per protocol."""
    rows = sorted(rows, key=lambda item: item[0])
    xs = [value for value, _ in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for i, proto in enumerate(protocols):
        ys = [reports[proto].raw_rate for _, reports in rows]
        ax.plot(xs, ys, _STYLES[i % len(_STYLES)], label=proto)
    ax.axhline(0.0, color="0.6", linewidth=0.8)
    ax.set_xlabel(parameter)
    ax.set_ylabel("key rate (bits per signal)")
    ax.set_title(channel)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
