"""Array-level augmentation kernels.

Each transform exists in two flavors: a deterministic kernel taking every
parameter explicitly (useful for oracles and for precomputed operators) and
a ``*_random`` variant that draws its per-window parameters from an
:class:`~eegaug.rng.RngStream`.

Draw budgets are part of the contract (they keep composed policies
reproducible): noise draws ``C*T`` normals; time mask, frequency shift and
band-stop draw one uniform each; the surrogate draws its phase vector once
(shared mode) or once per channel in row order (independent mode); dropout
draws ``C`` uniforms; shuffle draws ``C`` uniforms then one per Fisher-Yates
step; rotation draws one uniform.  Zero-magnitude short-circuits that skip
the transform entirely (noise with sigma 0, band-stop with zero width)
consume no transform draws.
"""

from __future__ import annotations

import numpy as np

from . import dsp
from .errors import BandError, ParamError
from .rng import RngStream


def time_reverse(data: np.ndarray) -> np.ndarray:
    """Reverse the time axis of every channel."""
    return data[:, ::-1].copy()


def sign_flip(data: np.ndarray) -> np.ndarray:
    """Invert the sign of every channel."""
    return -data


def gaussian_noise(data: np.ndarray, sigma: float, rng: RngStream) -> np.ndarray:
    """Add i.i.d. N(0, sigma^2) noise to every sample."""
    if sigma < 0:
        raise ParamError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return data.copy()
    return data + sigma * rng.normal(data.shape)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def time_mask_profile(n_samples: int, sfreq: float, mask_duration_s: float,
                      t_cut_s: float, temperature: float | None = None) -> np.ndarray:
    """Two-sigmoid mask: ~1 outside [t_cut, t_cut + duration], ~0 inside.

    ``temperature`` is the sigmoid steepness in 1/seconds; the default
    ``sfreq / 4`` makes the transition scale four sample periods.
    """
    duration = n_samples / sfreq
    if mask_duration_s < 0 or mask_duration_s > duration:
        raise ParamError(
            f"mask duration {mask_duration_s} s outside [0, {duration} s]"
        )
    if t_cut_s < 0 or t_cut_s > duration - mask_duration_s:
        raise ParamError(f"mask onset {t_cut_s} s outside the window")
    lam = sfreq / 4.0 if temperature is None else float(temperature)
    if lam <= 0:
        raise ParamError(f"temperature must be positive, got {lam}")
    t = np.arange(n_samples) / sfreq
    return _sigmoid(lam * (t_cut_s - t)) + _sigmoid(lam * (t - t_cut_s - mask_duration_s))


def smooth_time_mask(data: np.ndarray, sfreq: float, mask_duration_s: float,
                     t_cut_s: float, temperature: float | None = None) -> np.ndarray:
    """Apply the same smooth mask to all channels (deterministic onset)."""
    mask = time_mask_profile(data.shape[1], sfreq, mask_duration_s, t_cut_s,
                             temperature)
    return data * mask


def smooth_time_mask_random(data: np.ndarray, sfreq: float, mask_duration_s: float,
                            rng: RngStream,
                            temperature: float | None = None) -> np.ndarray:
    """Mask a random stretch: onset uniform in [0, duration - mask length]."""
    duration = data.shape[1] / sfreq
    if mask_duration_s < 0 or mask_duration_s > duration:
        raise ParamError(
            f"mask duration {mask_duration_s} s outside [0, {duration} s]"
        )
    t_cut = rng.uniform() * (duration - mask_duration_s)
    return smooth_time_mask(data, sfreq, mask_duration_s, t_cut, temperature)


def frequency_shift(data: np.ndarray, sfreq: float, shift_hz: float) -> np.ndarray:
    """Translate every channel's spectrum by ``shift_hz`` via the analytic
    signal: ``Re(analytic(x) * exp(2i pi shift t))``."""
    analytic = dsp.analytic_signal(data)
    t = np.arange(data.shape[1]) / sfreq
    return np.real(analytic * np.exp(2j * np.pi * shift_hz * t))


def frequency_shift_random(data: np.ndarray, sfreq: float, max_shift_hz: float,
                           rng: RngStream) -> np.ndarray:
    """One shift per window, uniform in [-max_shift, +max_shift]."""
    if max_shift_hz < 0 or max_shift_hz >= sfreq / 4.0:
        raise ParamError(
            f"max shift must be in [0, sfreq/4) = [0, {sfreq / 4.0} Hz), "
            f"got {max_shift_hz}"
        )
    shift = (2.0 * rng.uniform() - 1.0) * max_shift_hz
    return frequency_shift(data, sfreq, shift)


def ft_surrogate(data: np.ndarray, max_phase_rad: float, rng: RngStream,
                 channel_mode: str = "independent") -> np.ndarray:
    """Randomize Fourier phases, preserving every bin magnitude.

    Each interior positive-frequency bin is advanced by a phase uniform in
    [0, max_phase]; DC and Nyquist stay untouched and conjugate bins mirror
    automatically through the one-sided transform, so the output is real.
    In ``shared`` mode one phase vector perturbs every channel; in
    ``independent`` mode each channel redraws.
    """
    if not 0 <= max_phase_rad < 2 * np.pi:
        raise ParamError(
            f"max phase must be in [0, 2*pi), got {max_phase_rad}"
        )
    if channel_mode not in ("independent", "shared"):
        raise ParamError(f"channel_mode must be independent|shared, got {channel_mode!r}")
    n_channels, t = data.shape
    n_interior = (t - 1) // 2
    spec = np.fft.rfft(data, axis=1)
    if channel_mode == "shared":
        phases = rng.uniform(n_interior) * max_phase_rad
        spec[:, 1:1 + n_interior] *= np.exp(1j * phases)
    else:
        phases = rng.uniform((n_channels, n_interior)) * max_phase_rad
        spec[:, 1:1 + n_interior] *= np.exp(1j * phases)
    return np.fft.irfft(spec, n=t, axis=1)


def bandstop_filter(data: np.ndarray, sfreq: float, bandwidth_hz: float,
                    center_hz: float) -> np.ndarray:
    """Notch out one frequency band from all channels (zero-phase FIR)."""
    max_taps = data.shape[1] // 3
    kernel = dsp.design_bandstop(center_hz, bandwidth_hz, sfreq, max_taps=max_taps)
    return dsp.apply_fir(data, kernel)


def clamp_bandstop_center(center_hz: float, bandwidth_hz: float, sfreq: float,
                          center_max_hz: float = 38.0,
                          margin_hz: float = 0.1) -> float:
    """Clamp a drawn center so the band stays strictly inside (0, sfreq/2)."""
    lo = bandwidth_hz / 2.0 + margin_hz
    hi = min(center_max_hz, sfreq / 2.0) - bandwidth_hz / 2.0 - margin_hz
    if hi < lo:
        raise BandError(
            f"bandwidth {bandwidth_hz} Hz cannot fit below "
            f"min({center_max_hz}, {sfreq / 2.0}) Hz"
        )
    return float(min(max(center_hz, lo), hi))


def bandstop_filter_random(data: np.ndarray, sfreq: float, bandwidth_hz: float,
                           rng: RngStream,
                           center_range=(0.0, 38.0)) -> np.ndarray:
    """Draw the notch center uniformly in ``center_range`` (then clamp)."""
    if bandwidth_hz < 0:
        raise ParamError(f"bandwidth must be >= 0, got {bandwidth_hz}")
    if bandwidth_hz == 0:
        return data.copy()
    lo, hi = center_range
    center = lo + rng.uniform() * (hi - lo)
    center = clamp_bandstop_center(center, bandwidth_hz, sfreq, center_max_hz=hi)
    return bandstop_filter(data, sfreq, bandwidth_hz, center)


def channels_symmetry(data: np.ndarray, permutation: np.ndarray) -> np.ndarray:
    """Apply a (left/right) row permutation."""
    return data[permutation].copy()


def channels_dropout(data: np.ndarray, p_drop: float, rng: RngStream) -> np.ndarray:
    """Zero each channel independently with probability ``p_drop``.

    ``p_drop`` is the probability of *dropping* a channel, so ``p_drop = 1``
    silences the whole window.
    """
    if not 0 <= p_drop <= 1:
        raise ParamError(f"p_drop must be in [0, 1], got {p_drop}")
    dropped = rng.uniform(data.shape[0]) < p_drop
    out = data.copy()
    out[dropped] = 0.0
    return out


def channels_shuffle(data: np.ndarray, p_shuffle: float, rng: RngStream) -> np.ndarray:
    """Permute a Bernoulli-chosen subset of rows uniformly at random.

    Rows outside the subset keep their place; rows inside are rearranged by
    a uniform permutation of the subset (Fisher-Yates).
    """
    if not 0 <= p_shuffle <= 1:
        raise ParamError(f"p_shuffle must be in [0, 1], got {p_shuffle}")
    n_channels = data.shape[0]
    chosen = np.flatnonzero(rng.uniform(n_channels) < p_shuffle)
    source = chosen.copy()
    for i in range(len(source) - 1, 0, -1):
        j = rng.integer(i + 1)
        source[i], source[j] = source[j], source[i]
    out = data.copy()
    out[chosen] = data[source]
    return out


def sensors_rotation(data: np.ndarray, positions: np.ndarray, axis: str,
                     angle_deg: float) -> np.ndarray:
    """Re-estimate potentials as if the cap were rotated by ``angle_deg``.

    Target positions are the rotated ones; the spline operator from the
    original positions is solved once and applied to all time samples.
    """
    rot = dsp.rotation(axis, angle_deg)
    targets = positions @ rot.matrix.T
    operator = dsp.spline_interpolation_matrix(positions, targets)
    return operator @ data


def sensors_rotation_random(data: np.ndarray, positions: np.ndarray, axis: str,
                            max_angle_deg: float, rng: RngStream) -> np.ndarray:
    """One angle per window, uniform in [-max_angle, +max_angle]."""
    if not 0 <= max_angle_deg <= 30:
        raise ParamError(
            f"max rotation angle must be in [0, 30] degrees, got {max_angle_deg}"
        )
    angle = (2.0 * rng.uniform() - 1.0) * max_angle_deg
    return sensors_rotation(data, positions, axis, angle)
