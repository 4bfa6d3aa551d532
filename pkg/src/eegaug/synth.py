"""Synthetic dataset generator for desk-scale experiments.

Each class emits a base sinusoid at a class frequency (linearly spaced in
5..20 Hz) plus a half-amplitude first harmonic, buried in 1/f-shaped noise.
The harmonic spreads the classes over distinct band-power signatures so a
band-power classifier can separate them.  Subjects are assigned round-robin
and carry a +-0.5 Hz frequency jitter; channels are z-scored per window.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .montage import builtin_channel_names, builtin_montage
from .rng import derive_stream
from .window import Dataset

# Namespaces for the epoch slot of derive_stream, so window draws and
# subject-jitter draws never collide.
_NS_WINDOW = 0
_NS_JITTER = 1

SNR_POWER = 4.0  # sinusoid power over noise power


def class_frequencies(n_classes: int) -> np.ndarray:
    """Base frequencies, linearly spaced over 5..20 Hz."""
    if n_classes < 2:
        raise ConfigError(f"need at least 2 classes, got {n_classes}")
    return np.linspace(5.0, 20.0, n_classes)


def _pink_noise(stream, n_channels, n_samples, sfreq):
    """1/f-power noise, zero-mean, unit variance per channel."""
    n_bins = n_samples // 2 + 1
    freqs = np.fft.rfftfreq(n_samples, 1.0 / sfreq)
    shape = np.zeros(n_bins)
    nonzero = freqs > 0
    shape[nonzero] = 1.0 / np.sqrt(freqs[nonzero])
    re = stream.normal((n_channels, n_bins))
    im = stream.normal((n_channels, n_bins))
    spec = (re + 1j * im) * shape
    noise = np.fft.irfft(spec, n=n_samples, axis=1)
    std = noise.std(axis=1, keepdims=True)
    std[std == 0] = 1.0
    return noise / std


def generate_synthetic(n_classes: int, n_per_class: int, n_channels: int,
                       n_samples: int, sfreq: float, seed: int,
                       n_subjects: int | None = None) -> Dataset:
    """Deterministic synthetic dataset of labeled multichannel windows.

    Windows are ordered class-major.  Within a class, window ``j`` belongs
    to subject ``j % n_subjects`` and to session ``(j // n_subjects) % 2``.
    The default subject count is ``max(5, total_windows // 20)``.
    """
    if n_channels < 2:
        raise ConfigError(f"need at least 2 channels, got {n_channels}")
    if n_channels > len(builtin_channel_names()):
        raise ConfigError(
            f"built-in montage has {len(builtin_channel_names())} electrodes, "
            f"{n_channels} requested"
        )
    if n_per_class < 1:
        raise ConfigError("need at least one window per class")
    total = n_classes * n_per_class
    if n_subjects is None:
        n_subjects = max(5, total // 20)
    montage = builtin_montage(n_channels)
    freqs = class_frequencies(n_classes)

    # per (subject, class) frequency jitter in [-0.5, +0.5] Hz
    jitter = np.empty((n_subjects, n_classes))
    for s in range(n_subjects):
        stream = derive_stream(seed, s, _NS_JITTER)
        jitter[s] = stream.uniform(n_classes) - 0.5

    t = np.arange(n_samples) / sfreq
    data = np.empty((total, n_channels, n_samples))
    labels = np.empty(total, dtype=np.int64)
    subjects = np.empty(total, dtype=np.int64)
    sessions = np.empty(total, dtype=np.int64)

    amp = 1.0
    noise_std = np.sqrt((amp ** 2 / 2 + (amp / 2) ** 2 / 2) / SNR_POWER)
    index = 0
    for k in range(n_classes):
        for j in range(n_per_class):
            subject = j % n_subjects
            base = freqs[k] + jitter[subject, k]
            stream = derive_stream(seed, index, _NS_WINDOW)
            phases = stream.uniform((2, n_channels)) * 2.0 * np.pi
            signal = (
                amp * np.sin(2 * np.pi * base * t + phases[0][:, None])
                + (amp / 2) * np.sin(2 * np.pi * 2 * base * t + phases[1][:, None])
            )
            noise = _pink_noise(stream, n_channels, n_samples, sfreq)
            window = signal + noise_std * noise
            window -= window.mean(axis=1, keepdims=True)
            window /= window.std(axis=1, keepdims=True)
            data[index] = window
            labels[index] = k
            subjects[index] = subject
            sessions[index] = (j // n_subjects) % 2
            index += 1
    return Dataset(data, sfreq, labels, subjects, sessions, montage)
