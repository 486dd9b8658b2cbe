"""Rendering of census and experiment reports as figure files.

Every figure mirrors a delimited output written alongside it; the CSV is
the canonical data, the PNG is a convenience view.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from hombent.census import DensityReport


def density_figure(report: DensityReport, path) -> None:
    """Bar chart of per-term-count bent densities."""
    rows = report.rows()
    fig, ax = plt.subplots(figsize=(7, 4))
    if rows:
        ks = [row[0] for row in rows]
        densities = [row[2] / row[3] for row in rows]
        ax.bar(ks, densities, width=0.6, color="#33658a")
        ax.set_xticks(ks)
        if max(densities) / max(min(densities), 1e-300) > 1e3:
            ax.set_yscale("log")
    ax.set_xlabel("ANF terms")
    ax.set_ylabel("bent density")
    title = f"homogeneous bent density, n={report.n}, degree {report.d}"
    if report.source == "published-reference":
        title += " (published reference)"
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def batch_figure(records: list[dict], path) -> None:
    """Best-fitness traces of a batch of runs, one line per run."""
    fig, axes = plt.subplots(1, 2, figsize=(10, 4), gridspec_kw={"width_ratios": [3, 1]})
    for record in records:
        trace = record["fitness_trace"]
        xs = [point[0] for point in trace] + [record["evaluations_used"]]
        ys = [point[1] for point in trace] + [trace[-1][1]]
        axes[0].step(xs, ys, where="post", alpha=0.6)
    axes[0].set_xlabel("evaluations")
    axes[0].set_ylabel("best fitness")
    axes[0].set_title("best-so-far fitness per run")

    finals = [record["best_fitness"] for record in records]
    axes[1].boxplot([finals], tick_labels=["final"])
    axes[1].set_title(f"{sum(r['success'] for r in records)}/{len(records)} successful")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
