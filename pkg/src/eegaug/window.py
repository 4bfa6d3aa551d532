"""Labeled EEG windows and the dataset container."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, ParamError
from .montage import Montage


@dataclass(frozen=True)
class EegWindow:
    """One labeled multichannel epoch.

    Parameters
    ----------
    data : ndarray of shape (C, T)
        Sample matrix, channels by time, float64.
    sfreq : float
        Sampling rate in Hz.
    label : int
        Class index, >= 0.
    channel_indices : ndarray | None
        Reference into a montage; None means channel ``c`` is montage
        channel ``c``.
    """

    data: np.ndarray
    sfreq: float
    label: int = 0
    channel_indices: np.ndarray | None = None

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 2 or data.shape[0] < 1 or data.shape[1] < 2:
            raise DataError(f"window data must be (C>=1, T>=2), got {data.shape}")
        if not np.all(np.isfinite(data)):
            raise DataError("window contains non-finite samples")
        if not self.sfreq > 0:
            raise ParamError(f"sfreq must be positive, got {self.sfreq}")
        if self.label < 0:
            raise DataError(f"label must be >= 0, got {self.label}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]

    @property
    def duration(self) -> float:
        return self.n_samples / self.sfreq

    def with_data(self, data: np.ndarray) -> "EegWindow":
        """Same metadata, new samples."""
        return EegWindow(data, self.sfreq, self.label, self.channel_indices)


@dataclass
class Dataset:
    """Ordered collection of windows sharing (C, T, sfreq) and a montage.

    Data is stored as one (N, C, T) float64 array; ``window(i)`` exposes a
    single epoch as an :class:`EegWindow`.
    """

    data: np.ndarray
    sfreq: float
    labels: np.ndarray
    subjects: np.ndarray
    sessions: np.ndarray
    montage: Montage = field(default_factory=lambda: Montage(()))

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)
        if self.data.ndim != 3:
            raise DataError(f"dataset data must be (N, C, T), got {self.data.shape}")
        n = self.data.shape[0]
        if n > 0 and (self.data.shape[1] < 1 or self.data.shape[2] < 2):
            raise DataError(f"windows must be (C>=1, T>=2), got {self.data.shape[1:]}")
        if not self.sfreq > 0:
            raise ParamError(f"sfreq must be positive, got {self.sfreq}")
        if not np.all(np.isfinite(self.data)):
            raise DataError("dataset contains non-finite samples")
        for name in ("labels", "subjects", "sessions"):
            arr = np.asarray(getattr(self, name), dtype=np.int64)
            if arr.shape != (n,):
                raise DataError(f"{name} must have shape ({n},), got {arr.shape}")
            setattr(self, name, arr)
        if n > 0 and self.labels.min() < 0:
            raise DataError("labels must be >= 0")
        if self.montage.n_channels and self.montage.n_channels != self.data.shape[1]:
            raise DataError(
                f"montage has {self.montage.n_channels} channels, "
                f"data has {self.data.shape[1]}"
            )

    @property
    def n_windows(self) -> int:
        return self.data.shape[0]

    @property
    def n_channels(self) -> int:
        return self.data.shape[1]

    @property
    def n_samples(self) -> int:
        return self.data.shape[2]

    @property
    def n_classes(self) -> int:
        return 0 if self.n_windows == 0 else int(self.labels.max()) + 1

    def window(self, i: int) -> EegWindow:
        return EegWindow(self.data[i], self.sfreq, int(self.labels[i]))

    def subset(self, indices) -> "Dataset":
        """New dataset with the selected windows, order preserved."""
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(
            self.data[idx].copy(),
            self.sfreq,
            self.labels[idx].copy(),
            self.subjects[idx].copy(),
            self.sessions[idx].copy(),
            self.montage,
        )

    def with_data(self, data: np.ndarray) -> "Dataset":
        """Same metadata, new samples."""
        return Dataset(
            data, self.sfreq, self.labels.copy(), self.subjects.copy(),
            self.sessions.copy(), self.montage,
        )

    @staticmethod
    def from_windows(windows, subjects=None, sessions=None, montage=None) -> "Dataset":
        windows = list(windows)
        if not windows:
            raise DataError("from_windows needs at least one window")
        shapes = {w.data.shape for w in windows}
        rates = {w.sfreq for w in windows}
        if len(shapes) != 1 or len(rates) != 1:
            raise DataError("all windows must share (C, T) and sfreq")
        n = len(windows)
        return Dataset(
            np.stack([w.data for w in windows]),
            windows[0].sfreq,
            np.array([w.label for w in windows], dtype=np.int64),
            np.zeros(n, dtype=np.int64) if subjects is None else subjects,
            np.zeros(n, dtype=np.int64) if sessions is None else sessions,
            montage if montage is not None else Montage(()),
        )
