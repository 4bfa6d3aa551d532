"""Classification metrics: balanced accuracy and F1 scores."""

from __future__ import annotations

import numpy as np

from .errors import InputError


def confusion_matrix(y_true, y_pred, n_classes: int | None = None) -> np.ndarray:
    """Counts[i, j] = windows of true class i predicted as class j."""
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise InputError(
            f"label vectors must match, got {y_true.shape} and {y_pred.shape}"
        )
    if len(y_true) == 0:
        raise InputError("need at least one sample")
    if y_true.min() < 0 or y_pred.min() < 0:
        raise InputError("labels must be >= 0")
    if n_classes is None:
        n_classes = int(max(y_true.max(), y_pred.max())) + 1
    counts = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(counts, (y_true, y_pred), 1)
    return counts


def metrics(y_true, y_pred, n_classes: int | None = None) -> dict:
    """Balanced accuracy, per-class F1 and macro F1.

    Balanced accuracy is the mean recall over classes present in ``y_true``;
    F1 uses the 0/0 -> 0 convention.  Macro F1 averages over the classes
    present in ``y_true``.
    """
    counts = confusion_matrix(y_true, y_pred, n_classes)
    k = counts.shape[0]
    support = counts.sum(axis=1)
    predicted = counts.sum(axis=0)
    diag = np.diag(counts).astype(np.float64)

    recall = np.divide(diag, support, out=np.zeros(k), where=support > 0)
    precision = np.divide(diag, predicted, out=np.zeros(k), where=predicted > 0)
    pr_sum = precision + recall
    f1 = np.divide(2 * precision * recall, pr_sum, out=np.zeros(k),
                   where=pr_sum > 0)

    present = support > 0
    return {
        "balanced_accuracy": float(recall[present].mean()),
        "f1_per_class": f1,
        "macro_f1": float(f1[present].mean()),
    }
