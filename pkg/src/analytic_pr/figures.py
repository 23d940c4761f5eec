"""Figure rendering for run reports and window diagnostics.

Figures are derived telemetry written next to the delimited reports; nothing
downstream reads them back.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .windows import as_window_list

__all__ = ["save_run_figures", "save_window_figure"]


def save_run_figures(records, summary: dict, out_dir) -> list[Path]:
    """Render the standard run report pair: success rates and error spread."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cells = summary["cells"]
    labels = [f"{c['case']}\nn={c['n']}" for c in cells]
    paths = []

    fig, ax = plt.subplots(figsize=(max(4.0, 1.4 * len(cells) + 1.5), 3.6))
    xs = np.arange(len(cells))
    rates = [c["success_rate"] for c in cells]
    ax.bar(xs, rates, color="#4878a8", width=0.65)
    for x, c in zip(xs, cells):
        ax.annotate(
            f"{c['measurement_count']} meas",
            (x, 0.02),
            ha="center", va="bottom", fontsize=8, color="white", rotation=90,
        )
    ax.set_xticks(xs, labels)
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel("success rate")
    ax.set_title("trials recovered to tolerance, by cell")
    fig.tight_layout()
    p = out / "success_rate.png"
    fig.savefig(p, dpi=150)
    plt.close(fig)
    paths.append(p)

    fig, ax = plt.subplots(figsize=(max(4.0, 1.4 * len(cells) + 1.5), 3.6))
    series = []
    for c in cells:
        errs = [
            r.error
            for r in records
            if r.n == c["n"] and r.status == "ok" and r.error is not None
        ]
        series.append(np.log10(np.maximum(errs, 1e-18)) if errs else [])
    ax.boxplot(series, tick_labels=labels, whis=(1, 99))
    ax.set_ylabel("log10 up-to-sign error")
    ax.set_title("recovery error distribution (ok trials)")
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    p = out / "error_distribution.png"
    fig.savefig(p, dpi=150)
    plt.close(fig)
    paths.append(p)
    return paths


def save_window_figure(windows, path) -> Path:
    """Time-domain values and spectrum moduli of one or more windows."""
    wlist = as_window_list(windows)
    rows = len(wlist)
    fig, axes = plt.subplots(rows, 2, figsize=(9, 2.3 * rows), squeeze=False)
    for r, w in enumerate(wlist):
        t = np.arange(w.n)
        ax = axes[r][0]
        ax.plot(t, w.values.real, "o-", ms=3, lw=1, label="re")
        ax.plot(t, w.values.imag, "s--", ms=3, lw=1, label="im")
        ax.set_title(f"window {r}: time domain", fontsize=9)
        ax.legend(fontsize=7)
        ax = axes[r][1]
        ax.stem(t, np.abs(w.spectrum), basefmt=" ")
        ax.set_title(
            f"window {r}: |spectrum|  (B={w.bandlimit}, run starts {w.zero_run_start})",
            fontsize=9,
        )
    for ax in axes[-1]:
        ax.set_xlabel("index")
    fig.tight_layout()
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(p, dpi=150)
    plt.close(fig)
    return p
