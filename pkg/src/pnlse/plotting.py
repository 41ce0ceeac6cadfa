"""Static SVG overlays of the CLI tables."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# fixed element ids and no timestamp keep reruns byte-identical
matplotlib.rcParams["svg.hashsalt"] = "pnlse"

_STYLES = ({"color": "tab:blue", "linestyle": "-"},
           {"color": "tab:red", "linestyle": "--"},
           {"color": "tab:green", "linestyle": ":"},
           {"color": "tab:gray", "linestyle": "-."})


def overlay(path, x, series, xlabel, ylabel, title=None, markers=False):
    """Write one panel with a polyline (or markers) per entry of ``series``."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for (label, values), style in zip(series.items(), _STYLES * 4):
        values = np.asarray(values, dtype=float)
        if markers:
            ax.plot(x, values, marker="o", linestyle="none", color=style["color"], label=label)
        else:
            ax.plot(x, values, label=label, **style)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
