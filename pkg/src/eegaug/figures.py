"""Render report figures (PNG) next to the delimited output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .protocols import ExperimentReport


def render_report_figure(report: ExperimentReport, path) -> None:
    """One figure per report: errorbar curve for grid searches, learning
    curves with CI bands, or per-class box plots."""
    protocol = report.config.get("protocol", "")
    if protocol == "gridsearch":
        _gridsearch_figure(report, path)
    elif protocol == "learning-curve":
        _learning_curve_figure(report, path)
    elif protocol == "per-class":
        _per_class_figure(report, path)
    else:
        raise ValueError(f"no figure defined for protocol {protocol!r}")


def _gridsearch_figure(report, path):
    agg = [a for a in report.aggregates()
           if a["metric"] == "bal_acc_rel_improvement"]
    mags = [a["magnitude"] for a in agg]
    means = [a["mean"] for a in agg]
    cis = [a["ci95"] for a in agg]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.errorbar(mags, means, yerr=cis, fmt="o-", capsize=3)
    ax.axhline(0.0, color="gray", lw=0.8, ls="--")
    ax.set_xlabel(f"{report.config.get('augmentation', '')} magnitude")
    ax.set_ylabel("relative balanced-accuracy improvement")
    ax.set_title("Magnitude grid search")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _learning_curve_figure(report, path):
    agg = [a for a in report.aggregates() if a["metric"] == "balanced_accuracy"]
    arms = sorted({a["augmentation"] for a in agg})
    fig, ax = plt.subplots(figsize=(6, 4))
    for arm in arms:
        points = sorted((a["fraction"], a["mean"], a["ci95"])
                        for a in agg if a["augmentation"] == arm)
        x = np.array([p[0] for p in points])
        y = np.array([p[1] for p in points])
        ci = np.array([p[2] for p in points])
        ax.plot(x, y, "o-", label=arm)
        ax.fill_between(x, y - ci, y + ci, alpha=0.2)
    ax.set_xscale("log", base=2)
    ax.set_xlabel("training-set fraction")
    ax.set_ylabel("balanced accuracy")
    ax.set_title("Learning curves")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _per_class_figure(report, path):
    by_class = {}
    for row in report.rows:
        if row.metric.startswith("f1_rel_improvement_class"):
            k = int(row.metric.rsplit("class", 1)[1])
            if np.isfinite(row.value):
                by_class.setdefault(k, []).append(row.value)
    classes = sorted(by_class)
    fig, ax = plt.subplots(figsize=(6, 4))
    if classes:
        ax.boxplot([by_class[k] for k in classes],
                   tick_labels=[f"class {k}" for k in classes])
    ax.axhline(0.0, color="gray", lw=0.8, ls="--")
    ax.set_ylabel("relative F1 improvement")
    ax.set_title("Per-class improvement")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
