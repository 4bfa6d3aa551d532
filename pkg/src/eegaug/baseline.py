"""Band-power baseline classifier.

A deliberately small, fully deterministic stand-in for a trained network:
log band-power features per channel feed a multinomial linear model fitted
by full-batch gradient descent on a class-weighted cross-entropy loss.
When a policy is supplied, the training set is re-augmented before every
optimizer pass, with the policy's epoch counter advanced each time.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import TrainError
from .pipeline import Policy, apply_policy
from .window import Dataset

#: Fixed feature bands in Hz, [low, high).
BAND_EDGES = ((0.5, 4.0), (4.0, 8.0), (8.0, 13.0), (13.0, 30.0), (30.0, 38.0))
_EPS_POWER = 1e-10


def bandpower_features(dataset: Dataset) -> np.ndarray:
    """log(eps + band power) per channel and band, shape (N, C * 5)."""
    n, c, t = dataset.data.shape
    spec = np.fft.rfft(dataset.data, axis=2)
    power = np.abs(spec) ** 2 / (t * dataset.sfreq)
    scale = np.full(power.shape[-1], 2.0)
    scale[0] = 1.0
    if t % 2 == 0:
        scale[-1] = 1.0
    power = power * scale
    freqs = np.fft.rfftfreq(t, 1.0 / dataset.sfreq)
    df = dataset.sfreq / t
    feats = np.empty((n, c, len(BAND_EDGES)))
    for b, (lo, hi) in enumerate(BAND_EDGES):
        sel = (freqs >= lo) & (freqs < hi)
        feats[:, :, b] = power[:, :, sel].sum(axis=2) * df
    return np.log(_EPS_POWER + feats).reshape(n, c * len(BAND_EDGES))


@dataclass(frozen=True)
class TrainConfig:
    """Fixed optimization budget; training is deterministic given data."""

    n_epochs: int = 120
    learning_rate: float = 1.0
    l2: float = 1e-3


@dataclass(frozen=True)
class BaselineClassifier:
    weights: np.ndarray      # (n_features, n_classes)
    bias: np.ndarray         # (n_classes,)
    feat_mean: np.ndarray
    feat_scale: np.ndarray
    n_classes: int


def _softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def train_baseline(train: Dataset, seed: int = 0,
                   config: TrainConfig | None = None,
                   policy: Policy | None = None,
                   n_threads: int = 1) -> BaselineClassifier:
    """Fit the band-power linear model.

    Parameters
    ----------
    train : Dataset
        Training windows; must contain at least two classes.
    seed : int
        Kept for interface stability; the optimizer itself is
        deterministic (zero init, full-batch updates).
    config : TrainConfig
        Iteration budget, learning rate and L2 strength.
    policy : Policy | None
        When given, the training set is re-augmented at every epoch with
        the epoch counter advanced, mimicking on-the-fly augmentation.
    """
    config = config or TrainConfig()
    labels = train.labels
    classes = np.unique(labels)
    if len(classes) < 2:
        raise TrainError(f"training set has {len(classes)} class(es), need >= 2")
    n_classes = int(labels.max()) + 1
    n = train.n_windows

    # class-balanced sample weights, normalized to sum to 1
    counts = np.bincount(labels, minlength=n_classes).astype(np.float64)
    class_w = np.zeros(n_classes)
    class_w[counts > 0] = n / (len(classes) * counts[counts > 0])
    sample_w = class_w[labels]
    sample_w = sample_w / sample_w.sum()

    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), labels] = 1.0

    # standardize on what the model actually trains on: the clean features,
    # or the first augmented pass when a policy is active
    if policy is None:
        base_feats = bandpower_features(train)
    else:
        base_feats = bandpower_features(
            apply_policy(replace(policy, epoch=0), train, n_threads=n_threads))
    feat_mean = base_feats.mean(axis=0)
    feat_scale = base_feats.std(axis=0)
    feat_scale = np.where(feat_scale < 1e-12, 1.0, feat_scale)

    n_features = len(feat_mean)
    weights = np.zeros((n_features, n_classes))
    bias = np.zeros(n_classes)

    x_base = (base_feats - feat_mean) / feat_scale
    for epoch in range(config.n_epochs):
        if policy is None or epoch == 0:
            x = x_base
        else:
            augmented = apply_policy(replace(policy, epoch=epoch), train,
                                     n_threads=n_threads)
            x = (bandpower_features(augmented) - feat_mean) / feat_scale
        probs = _softmax(x @ weights + bias)
        delta = (probs - onehot) * sample_w[:, None]
        grad_w = x.T @ delta + config.l2 * weights
        grad_b = delta.sum(axis=0)
        weights = weights - config.learning_rate * grad_w
        bias = bias - config.learning_rate * grad_b

    return BaselineClassifier(weights, bias, feat_mean, feat_scale, n_classes)


def predict(clf: BaselineClassifier, dataset: Dataset) -> np.ndarray:
    """Predicted class per window (never abstains)."""
    return predict_features(clf, bandpower_features(dataset))


def predict_features(clf: BaselineClassifier, feats: np.ndarray) -> np.ndarray:
    x = (feats - clf.feat_mean) / clf.feat_scale
    return np.argmax(x @ clf.weights + clf.bias, axis=1)
