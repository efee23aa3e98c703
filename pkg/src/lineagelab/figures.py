"""Matplotlib renderings of bench sweeps and catalog statistics."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_STRATEGY_COLORS = {"rq": "#777777", "ccprov": "#4878cf", "csprov": "#d65f5f"}


def render_bench_figures(report: dict, out_dir) -> list[Path]:
    """Grouped bar charts of mean scan metrics per class and strategy."""
    out_dir = Path(out_dir)
    paths = []
    classes = [c for c, e in report["classes"].items() if not e.get("skipped")]
    if not classes:
        return paths
    strategies = report.get("strategies", ["rq", "ccprov", "csprov"])

    for metric, fname in (
        ("triples_recursed", "bench_triples_recursed.png"),
        ("rows_scanned", "bench_rows_scanned.png"),
    ):
        fig, ax = plt.subplots(figsize=(7, 4))
        width = 0.8 / len(strategies)
        for i, s in enumerate(strategies):
            xs = [j + i * width for j in range(len(classes))]
            ys = [report["classes"][c][s][metric]["mean"] for c in classes]
            ax.bar(xs, ys, width=width, label=s,
                   color=_STRATEGY_COLORS.get(s))
        ax.set_xticks([j + width * (len(strategies) - 1) / 2 for j in range(len(classes))])
        ax.set_xticklabels(classes)
        ax.set_yscale("log")
        ax.set_ylabel(f"mean {metric} (log scale)")
        ax.set_title(f"Lineage query cost by class: {metric}")
        ax.legend()
        fig.tight_layout()
        path = out_dir / fname
        fig.savefig(path, dpi=120)
        plt.close(fig)
        paths.append(path)
    return paths


def render_catalog_figure(stats: dict, path) -> Path:
    """Per-split set counts and largest-set sizes from a catalog-stats dict."""
    path = Path(path)
    per_split = stats.get("per_split", {})
    splits = sorted(per_split)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    ax1.bar(splits, [per_split[s]["sets"] for s in splits], color="#4878cf")
    ax1.set_ylabel("sets")
    ax1.set_title("Weakly connected sets per split")
    ax2.bar(splits, [per_split[s]["largest_set"] for s in splits], color="#d65f5f")
    ax2.axhline(stats.get("theta", 0), ls="--", color="k", lw=1, label="theta")
    ax2.set_ylabel("nodes in largest set")
    ax2.set_title("Largest set per split")
    ax2.legend()
    for ax in (ax1, ax2):
        ax.tick_params(axis="x", rotation=45)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
