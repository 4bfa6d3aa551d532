"""Subject-wise cross-validation splits and stratified subsampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParamError, SplitError, StratifyError
from .rng import derive_stream
from .window import Dataset

_NS_SPLIT = 2
_NS_STRATIFY = 3


@dataclass(frozen=True)
class FoldSplit:
    """Subject sets for one fold; train, validation and test are disjoint."""

    train_subjects: frozenset
    val_subjects: frozenset
    test_subjects: frozenset


@dataclass(frozen=True)
class SplitPlan:
    """K disjoint subject folds with per-fold validation carve-outs."""

    n_folds: int
    folds: tuple
    val_fraction: float = 0.2
    train_fraction: float = 1.0

    def fold_indices(self, dataset: Dataset, fold: int):
        """(train, val, test) window indices of ``fold``, in dataset order."""
        split = self.folds[fold]
        subj = dataset.subjects
        train = np.flatnonzero(np.isin(subj, sorted(split.train_subjects)))
        val = np.flatnonzero(np.isin(subj, sorted(split.val_subjects)))
        test = np.flatnonzero(np.isin(subj, sorted(split.test_subjects)))
        return train, val, test


def _shuffled(values, stream):
    order = list(values)
    for i in range(len(order) - 1, 0, -1):
        j = stream.integer(i + 1)
        order[i], order[j] = order[j], order[i]
    return order


def subject_folds(dataset: Dataset, n_folds: int, seed: int,
                  val_fraction: float = 0.2) -> SplitPlan:
    """Deal subjects into ``n_folds`` disjoint folds.

    Each fold serves once as the test set; 20% of the remaining subjects
    (at least one) are set aside for validation, the rest train.
    """
    subjects = sorted(int(s) for s in np.unique(dataset.subjects))
    if len(subjects) < n_folds:
        raise SplitError(
            f"{len(subjects)} subjects cannot fill {n_folds} folds"
        )
    if n_folds < 2:
        raise SplitError(f"need at least 2 folds, got {n_folds}")
    stream = derive_stream(seed, 0, _NS_SPLIT)
    shuffled = _shuffled(subjects, stream)
    fold_members = [shuffled[f::n_folds] for f in range(n_folds)]
    folds = []
    for f in range(n_folds):
        test = fold_members[f]
        remaining = [s for s in shuffled if s not in set(test)]
        n_val = max(1, int(np.floor(len(remaining) * val_fraction + 0.5)))
        val = remaining[:n_val]
        train = remaining[n_val:]
        if not train:
            raise SplitError(f"fold {f}: no training subjects left")
        folds.append(FoldSplit(frozenset(train), frozenset(val), frozenset(test)))
    return SplitPlan(n_folds, tuple(folds), val_fraction)


@dataclass(frozen=True)
class SessionPlan:
    """One fold per subject: train on session 0, test on session 1."""

    subjects: tuple

    @property
    def n_folds(self) -> int:
        return len(self.subjects)

    def fold_indices(self, dataset: Dataset, fold: int):
        subject = self.subjects[fold]
        mine = dataset.subjects == subject
        train = np.flatnonzero(mine & (dataset.sessions == 0))
        test = np.flatnonzero(mine & (dataset.sessions != 0))
        return train, np.array([], dtype=np.int64), test


def session_folds(dataset: Dataset) -> SessionPlan:
    """Within-subject session split: fold ``i`` trains on subject ``i``'s
    first session and tests on their second."""
    subjects = tuple(sorted(int(s) for s in np.unique(dataset.subjects)))
    for s in subjects:
        mine = dataset.subjects == s
        if not np.any(dataset.sessions[mine] == 0) or not np.any(
                dataset.sessions[mine] != 0):
            raise SplitError(f"subject {s} lacks windows in both sessions")
    return SessionPlan(subjects)


def stratified_fraction(dataset: Dataset, fraction: float, seed: int) -> Dataset:
    """Keep ``round(fraction * count)`` windows of every class.

    Selection is a seeded per-class subsample; the surviving windows keep
    their original order.
    """
    if not 0 < fraction <= 1:
        raise ParamError(f"fraction must be in (0, 1], got {fraction}")
    if dataset.n_windows == 0:
        raise StratifyError("cannot stratify an empty dataset")
    keep = []
    for label in np.unique(dataset.labels):
        members = np.flatnonzero(dataset.labels == label)
        n_sel = int(np.floor(fraction * len(members) + 0.5))
        if n_sel == 0:
            raise StratifyError(
                f"fraction {fraction} empties class {int(label)} "
                f"({len(members)} windows)"
            )
        stream = derive_stream(seed, int(label), _NS_STRATIFY)
        chosen = _shuffled(list(members), stream)[:n_sel]
        keep.extend(chosen)
    keep.sort()
    return dataset.subset(keep)
