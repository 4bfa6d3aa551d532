"""Window-level augmentation transforms.

Thin wrappers over :mod:`eegaug.functional` that take and return
:class:`~eegaug.window.EegWindow` and bundle per-transform parameters into
small dataclasses.  All transforms are pure: the input window is never
mutated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import functional
from .errors import MissingPositionsError, ParamError
from .montage import Montage, symmetry_permutation
from .rng import RngStream
from .window import EegWindow


@dataclass(frozen=True)
class TimeMaskParams:
    """Smooth time mask: length in seconds and sigmoid steepness (1/s).

    ``temperature = None`` defaults to ``sfreq / 4`` at application time.
    """

    mask_duration_s: float
    temperature: float | None = None

    def __post_init__(self):
        if self.mask_duration_s < 0:
            raise ParamError(f"mask duration must be >= 0, got {self.mask_duration_s}")
        if self.temperature is not None and self.temperature <= 0:
            raise ParamError(f"temperature must be > 0, got {self.temperature}")


@dataclass(frozen=True)
class FreqShiftParams:
    """Frequency shift drawn uniformly in [-max_shift, +max_shift] Hz."""

    max_shift_hz: float

    def __post_init__(self):
        if self.max_shift_hz < 0:
            raise ParamError(f"max shift must be >= 0, got {self.max_shift_hz}")


@dataclass(frozen=True)
class SurrogateParams:
    """Phase perturbations uniform in [0, max_phase]; one draw per channel
    (``independent``) or one shared draw for all (``shared``)."""

    max_phase_rad: float
    channel_mode: str = "independent"

    def __post_init__(self):
        if not 0 <= self.max_phase_rad < 2 * np.pi:
            raise ParamError(f"max phase must be in [0, 2*pi), got {self.max_phase_rad}")
        if self.channel_mode not in ("independent", "shared"):
            raise ParamError(f"unknown channel mode {self.channel_mode!r}")


@dataclass(frozen=True)
class BandstopParams:
    """Notch width in Hz; the center is drawn uniformly in ``center_range``
    and clamped so the band fits below Nyquist."""

    bandwidth_hz: float
    center_range: tuple = (0.0, 38.0)

    def __post_init__(self):
        if not 0 <= self.bandwidth_hz <= 2.0:
            raise ParamError(
                f"bandwidth must be in [0, 2] Hz, got {self.bandwidth_hz}"
            )


@dataclass(frozen=True)
class SpatialParams:
    """Magnitudes of the spatial transforms."""

    p_drop: float = 0.0
    p_shuffle: float = 0.0
    max_angle_deg: float = 0.0
    axis: str = "z"

    def __post_init__(self):
        if not 0 <= self.p_drop <= 1:
            raise ParamError(f"p_drop must be in [0, 1], got {self.p_drop}")
        if not 0 <= self.p_shuffle <= 1:
            raise ParamError(f"p_shuffle must be in [0, 1], got {self.p_shuffle}")
        if not 0 <= self.max_angle_deg <= 30:
            raise ParamError(
                f"rotation angle must be in [0, 30] degrees, got {self.max_angle_deg}"
            )
        if self.axis.lower() not in ("x", "y", "z"):
            raise ParamError(f"axis must be x|y|z, got {self.axis!r}")


def gaussian_noise(window: EegWindow, sigma: float, rng: RngStream) -> EegWindow:
    """Add white Gaussian noise, i.i.d. per channel and sample."""
    return window.with_data(functional.gaussian_noise(window.data, sigma, rng))


def smooth_time_mask(window: EegWindow, params: TimeMaskParams,
                     rng: RngStream) -> EegWindow:
    """Smoothly zero a random stretch of all channels."""
    return window.with_data(functional.smooth_time_mask_random(
        window.data, window.sfreq, params.mask_duration_s, rng,
        params.temperature))


def time_reverse(window: EegWindow) -> EegWindow:
    """Play the window backwards."""
    return window.with_data(functional.time_reverse(window.data))


def sign_flip(window: EegWindow) -> EegWindow:
    """Negate all channels."""
    return window.with_data(functional.sign_flip(window.data))


def frequency_shift(window: EegWindow, params: FreqShiftParams,
                    rng: RngStream) -> EegWindow:
    """Shift all channels' spectra by one random offset."""
    return window.with_data(functional.frequency_shift_random(
        window.data, window.sfreq, params.max_shift_hz, rng))


def ft_surrogate(window: EegWindow, params: SurrogateParams,
                 rng: RngStream) -> EegWindow:
    """Randomize Fourier phases, magnitudes untouched."""
    return window.with_data(functional.ft_surrogate(
        window.data, params.max_phase_rad, rng, params.channel_mode))


def bandstop_filter(window: EegWindow, params: BandstopParams,
                    rng: RngStream) -> EegWindow:
    """Notch a randomly centered band out of all channels."""
    return window.with_data(functional.bandstop_filter_random(
        window.data, window.sfreq, params.bandwidth_hz, rng,
        params.center_range))


def channels_symmetry(window: EegWindow, montage: Montage) -> EegWindow:
    """Swap left-hemisphere channels with their right partners."""
    perm = symmetry_permutation(montage)
    return window.with_data(functional.channels_symmetry(window.data, perm))


def channels_dropout(window: EegWindow, p_drop: float, rng: RngStream) -> EegWindow:
    """Zero channels independently with probability ``p_drop``."""
    return window.with_data(functional.channels_dropout(window.data, p_drop, rng))


def channels_shuffle(window: EegWindow, p_shuffle: float,
                     rng: RngStream) -> EegWindow:
    """Permute a random subset of channels."""
    return window.with_data(functional.channels_shuffle(window.data, p_shuffle, rng))


def sensors_rotation(window: EegWindow, montage: Montage, axis: str,
                     max_angle_deg: float, rng: RngStream) -> EegWindow:
    """Interpolate onto sensor positions rotated by a random angle."""
    if montage.n_channels != window.n_channels:
        raise MissingPositionsError(
            f"montage has {montage.n_channels} channels, window has "
            f"{window.n_channels}"
        )
    positions = montage.require_positions()
    return window.with_data(functional.sensors_rotation_random(
        window.data, positions, axis, max_angle_deg, rng))
