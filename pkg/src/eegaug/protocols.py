"""Experiment protocols: magnitude grid search, learning curves and
per-class analysis, with CSV/JSON report emission.

Reports are pure functions of (dataset, configuration, seeds): rerunning a
protocol reproduces the same bytes, regardless of thread count.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .baseline import TrainConfig, bandpower_features, predict_features, train_baseline
from .errors import ConfigError, StratifyError
from .metrics import metrics
from .pipeline import MAGNITUDE_PARAM, Policy, single_transform_policy
from .rng import derive_key, derive_stream
from .splits import session_folds, stratified_fraction, subject_folds
from .window import Dataset

_NS_BALANCE = 4
_NS_CELL = 5


@dataclass(frozen=True)
class ReportRow:
    protocol: str
    augmentation: str
    magnitude: float | None
    fraction: float | None
    fold: int
    metric: str
    value: float


@dataclass
class ExperimentReport:
    """Per-fold metric rows plus aggregate statistics and the resolved
    configuration (audit trail; thread counts are excluded on purpose so
    parallel runs emit identical bytes)."""

    rows: list
    config: dict = field(default_factory=dict)

    def aggregates(self):
        """Mean and 95% CI (1.96 * sd / sqrt(n)) per row group."""
        groups = {}
        for row in self.rows:
            key = (row.augmentation, row.magnitude, row.fraction, row.metric)
            groups.setdefault(key, []).append(row.value)
        out = []
        for key in sorted(groups, key=_group_sort_key):
            values = np.asarray(groups[key], dtype=np.float64)
            finite = values[np.isfinite(values)]
            mean = float(finite.mean()) if len(finite) else float("nan")
            if len(finite) > 1:
                ci = float(1.96 * finite.std(ddof=1) / np.sqrt(len(finite)))
            else:
                ci = 0.0
            out.append({
                "augmentation": key[0],
                "magnitude": key[1],
                "fraction": key[2],
                "metric": key[3],
                "mean": mean,
                "ci95": ci,
                "n": int(len(finite)),
            })
        return out


def _group_sort_key(key):
    aug, mag, frac, metric = key
    return (aug, -1.0 if mag is None else mag, -1.0 if frac is None else frac,
            metric)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def write_report_csv(report: ExperimentReport, path) -> None:
    lines = ["protocol,augmentation,magnitude,fraction,fold,metric,value"]
    for r in report.rows:
        lines.append(",".join([
            r.protocol, r.augmentation, _fmt(r.magnitude), _fmt(r.fraction),
            str(r.fold), r.metric, _fmt(r.value),
        ]))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def write_report_json(report: ExperimentReport, path) -> None:
    doc = {"config": report.config, "aggregates": report.aggregates()}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _make_plan(dataset: Dataset, n_folds: int, seed: int, split: str):
    if split == "subject":
        return subject_folds(dataset, n_folds, seed)
    if split == "session":
        return session_folds(dataset)
    raise ConfigError(f"unknown split {split!r}; choose subject or session")


def _balanced_accuracy(clf, feats, labels, n_classes):
    return metrics(labels, predict_features(clf, feats), n_classes)["balanced_accuracy"]


def _rel(aug: float, base: float) -> float:
    return (aug - base) / base if base > 0 else float("nan")


def grid_search(dataset: Dataset, augmentation: str, grid, n_folds: int,
                seed: int, p_aug: float = 0.5,
                train_config: TrainConfig | None = None,
                split: str = "subject", train_windows: int | None = None,
                extra_params: dict | None = None,
                n_threads: int = 1) -> ExperimentReport:
    """Balanced-accuracy improvement of one transform over its magnitude grid.

    For every magnitude and fold, a model is trained with the transform
    applied on-the-fly (gate probability ``p_aug``) and scored on the
    untouched test fold, relative to a no-augmentation model of the same
    fold.  Emits exactly ``len(grid) * n_folds`` rows.
    """
    entry = MAGNITUDE_PARAM.get(augmentation)
    if augmentation not in MAGNITUDE_PARAM:
        raise ConfigError(f"unknown transform {augmentation!r}")
    if entry is None:
        raise ConfigError(f"{augmentation} has no magnitude to search over")
    lo, hi = entry[1]
    grid = [float(v) for v in grid]
    if any(v < lo or v > hi for v in grid):
        raise ConfigError(
            f"grid values outside the legal interval [{lo:g}, {hi:g}] of "
            f"{augmentation}"
        )
    train_config = train_config or TrainConfig()
    plan = _make_plan(dataset, n_folds, seed, split)
    n_classes = dataset.n_classes

    rows = []
    baseline_acc = {}
    for fold in range(plan.n_folds):
        train_idx, _, test_idx = plan.fold_indices(dataset, fold)
        train_d = dataset.subset(train_idx)
        if train_windows is not None and train_windows < train_d.n_windows:
            train_d = stratified_fraction(
                train_d, train_windows / train_d.n_windows,
                derive_key(seed, fold, _NS_BALANCE))
        test_feats = bandpower_features(dataset.subset(test_idx))
        test_labels = dataset.labels[test_idx]
        clf = train_baseline(train_d, seed, train_config, n_threads=n_threads)
        base = _balanced_accuracy(clf, test_feats, test_labels, n_classes)
        baseline_acc[fold] = base
        for m_idx, value in enumerate(grid):
            cell_seed = derive_key(derive_key(seed, fold, _NS_CELL), m_idx, 0)
            policy = single_transform_policy(
                augmentation, value, p_aug=p_aug, seed=cell_seed,
                extra_params=extra_params)
            clf_aug = train_baseline(train_d, seed, train_config, policy=policy,
                                     n_threads=n_threads)
            acc = _balanced_accuracy(clf_aug, test_feats, test_labels, n_classes)
            rows.append(ReportRow(
                "gridsearch", augmentation, value, None, fold,
                "bal_acc_rel_improvement", _rel(acc, base)))

    rows.sort(key=lambda r: (r.magnitude, r.fold))
    config = {
        "protocol": "gridsearch",
        "augmentation": augmentation,
        "grid": grid,
        "n_folds": plan.n_folds,
        "seed": seed,
        "p_aug": p_aug,
        "split": split,
        "train_windows": train_windows,
        "train_config": vars(train_config),
        "baseline_balanced_accuracy": {
            str(f): baseline_acc[f] for f in sorted(baseline_acc)
        },
    }
    return ExperimentReport(rows, config)


DEFAULT_FRACTIONS = tuple(2.0 ** -k for k in range(7, -1, -1))


def learning_curve(dataset: Dataset, policy: Policy, fractions=None,
                   n_folds: int = 10, label: str = "policy",
                   train_config: TrainConfig | None = None,
                   split: str = "subject",
                   n_threads: int = 1) -> ExperimentReport:
    """Balanced accuracy with and without a policy over training fractions.

    The test fold is fixed across fractions.  Emits, per (fraction, fold):
    one absolute-accuracy row for the policy arm, one for the baseline arm
    and one relative-improvement row.  ``policy.seed`` is the master seed
    for splits and subsampling.
    """
    fractions = sorted(float(f) for f in (fractions or DEFAULT_FRACTIONS))
    if not fractions or fractions[0] <= 0 or fractions[-1] > 1:
        raise ConfigError(f"fractions must lie in (0, 1], got {fractions}")
    train_config = train_config or TrainConfig()
    seed = policy.seed
    plan = _make_plan(dataset, n_folds, seed, split)
    n_classes = dataset.n_classes

    rows = []
    for fold in range(plan.n_folds):
        train_idx, _, test_idx = plan.fold_indices(dataset, fold)
        train_d = dataset.subset(train_idx)
        test_feats = bandpower_features(dataset.subset(test_idx))
        test_labels = dataset.labels[test_idx]
        for f_idx, fraction in enumerate(fractions):
            cell_seed = derive_key(derive_key(seed, fold, _NS_CELL), f_idx, 1)
            try:
                sub = (train_d if fraction == 1.0 else
                       stratified_fraction(train_d, fraction, cell_seed))
            except StratifyError:
                for arm in (label, "baseline"):
                    rows.append(ReportRow(
                        "learning-curve", arm, None, fraction, fold,
                        "stratify_error", float("nan")))
                continue
            clf_base = train_baseline(sub, seed, train_config,
                                      n_threads=n_threads)
            acc_base = _balanced_accuracy(clf_base, test_feats, test_labels,
                                          n_classes)
            clf_aug = train_baseline(
                sub, seed, train_config,
                policy=replace(policy, seed=cell_seed, epoch=0),
                n_threads=n_threads)
            acc_aug = _balanced_accuracy(clf_aug, test_feats, test_labels,
                                         n_classes)
            rows.append(ReportRow("learning-curve", label, None, fraction,
                                  fold, "balanced_accuracy", acc_aug))
            rows.append(ReportRow("learning-curve", "baseline", None, fraction,
                                  fold, "balanced_accuracy", acc_base))
            rows.append(ReportRow("learning-curve", label, None, fraction,
                                  fold, "bal_acc_rel_improvement",
                                  _rel(acc_aug, acc_base)))

    rows.sort(key=lambda r: (r.fraction, r.fold, r.augmentation, r.metric))
    config = {
        "protocol": "learning-curve",
        "label": label,
        "fractions": fractions,
        "n_folds": plan.n_folds,
        "seed": seed,
        "split": split,
        "train_config": vars(train_config),
        "policy": json.loads(_policy_doc(policy)),
    }
    return ExperimentReport(rows, config)


def _policy_doc(policy: Policy) -> str:
    from .pipeline import policy_to_json

    return policy_to_json(policy)


def balance_classes(dataset: Dataset, seed: int) -> Dataset:
    """Subsample every class down to the size of the smallest one."""
    counts = np.bincount(dataset.labels, minlength=dataset.n_classes)
    counts = counts[counts > 0]
    smallest = int(counts.min())
    keep = []
    for label in np.unique(dataset.labels):
        members = list(np.flatnonzero(dataset.labels == label))
        stream = derive_stream(seed, int(label), _NS_BALANCE)
        for i in range(len(members) - 1, 0, -1):
            j = stream.integer(i + 1)
            members[i], members[j] = members[j], members[i]
        keep.extend(members[:smallest])
    keep.sort()
    return dataset.subset(keep)


def per_class_report(dataset: Dataset, policy: Policy, n_folds: int = 10,
                     label: str = "policy",
                     train_config: TrainConfig | None = None,
                     split: str = "subject",
                     n_threads: int = 1) -> ExperimentReport:
    """Per-class F1 improvement of a policy on class-balanced data.

    Classes are subsampled to equal counts first; each fold then emits one
    F1 row per class for the policy arm, the baseline arm and the relative
    improvement (``K * n_folds`` rows per arm).
    """
    train_config = train_config or TrainConfig()
    seed = policy.seed
    balanced = balance_classes(dataset, seed)
    plan = _make_plan(balanced, n_folds, seed, split)
    n_classes = balanced.n_classes

    rows = []
    for fold in range(plan.n_folds):
        train_idx, _, test_idx = plan.fold_indices(balanced, fold)
        train_d = balanced.subset(train_idx)
        test_feats = bandpower_features(balanced.subset(test_idx))
        test_labels = balanced.labels[test_idx]
        cell_seed = derive_key(derive_key(seed, fold, _NS_CELL), 0, 2)
        clf_base = train_baseline(train_d, seed, train_config,
                                  n_threads=n_threads)
        clf_aug = train_baseline(
            train_d, seed, train_config,
            policy=replace(policy, seed=cell_seed, epoch=0),
            n_threads=n_threads)
        f1_base = metrics(test_labels, predict_features(clf_base, test_feats),
                          n_classes)["f1_per_class"]
        f1_aug = metrics(test_labels, predict_features(clf_aug, test_feats),
                         n_classes)["f1_per_class"]
        for k in range(n_classes):
            rows.append(ReportRow("per-class", label, None, None, fold,
                                  f"f1_class{k}", float(f1_aug[k])))
            rows.append(ReportRow("per-class", "baseline", None, None, fold,
                                  f"f1_class{k}", float(f1_base[k])))
            rows.append(ReportRow("per-class", label, None, None, fold,
                                  f"f1_rel_improvement_class{k}",
                                  _rel(float(f1_aug[k]), float(f1_base[k]))))

    rows.sort(key=lambda r: (r.fold, r.metric, r.augmentation))
    config = {
        "protocol": "per-class",
        "label": label,
        "n_folds": plan.n_folds,
        "n_classes": n_classes,
        "seed": seed,
        "split": split,
        "train_config": vars(train_config),
        "policy": json.loads(_policy_doc(policy)),
    }
    return ExperimentReport(rows, config)
