"""Numerical kernels: FFT, analytic signal, periodogram, FIR design,
Legendre polynomials, spherical-spline interpolation, rotations.

Everything here is a pure function of its arguments and safe to call from
multiple threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BandError, DomainError, SingularityError, SizeError

# Spherical-spline defaults: stiffness, series truncation, regularization.
# Stiffness 2 keeps the kernel well conditioned on sparse scalp montages,
# so source potentials are reproduced within ~10 * lambda; stiffer splines
# (the classic m = 4) trade that for smoother extrapolation and can be
# requested per call.
SPLINE_STIFFNESS = 2
SPLINE_TERMS = 50
SPLINE_LAMBDA = 1e-5


@dataclass(frozen=True)
class Spectrum:
    """DFT coefficients ordered DC, positive, then negative frequencies."""

    coeffs: np.ndarray
    sfreq: float = 1.0

    @property
    def n_samples(self) -> int:
        return len(self.coeffs)


def fft(x: np.ndarray, sfreq: float = 1.0) -> Spectrum:
    """Forward DFT of a real vector (any length, including primes)."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or len(x) < 2:
        raise SizeError(f"fft needs a 1-D vector with T >= 2, got shape {x.shape}")
    return Spectrum(np.fft.fft(x), sfreq)


def ifft(spectrum: Spectrum) -> np.ndarray:
    """Inverse DFT, real part."""
    if spectrum.n_samples == 0:
        raise SizeError("empty spectrum")
    return np.real(np.fft.ifft(spectrum.coeffs))


def analytic_signal(x: np.ndarray) -> np.ndarray:
    """Complex signal with the negative-frequency half of the spectrum
    zeroed: real part equals ``x``, imaginary part is its Hilbert transform.

    Uses the one-sided spectral mask [1, 2, ..., 2, 1 (Nyquist, even T),
    0, ..., 0].
    """
    x = np.asarray(x, dtype=np.float64)
    squeeze = x.ndim == 1
    if squeeze:
        x = x[None, :]
    t = x.shape[-1]
    if t < 4:
        raise SizeError(f"analytic_signal needs T >= 4, got {t}")
    spec = np.fft.fft(x, axis=-1)
    mask = np.zeros(t)
    mask[0] = 1.0
    if t % 2 == 0:
        mask[1:t // 2] = 2.0
        mask[t // 2] = 1.0
    else:
        mask[1:(t + 1) // 2] = 2.0
    out = np.fft.ifft(spec * mask, axis=-1)
    return out[0] if squeeze else out


def periodogram(x: np.ndarray, sfreq: float):
    """One-sided power spectral density.

    Returns
    -------
    freqs : ndarray
        Bin frequencies in Hz, DC to Nyquist.
    power : ndarray
        ``|X_k|**2 / (T * sfreq)``, doubled on interior bins so that
        ``sum(power) * sfreq / T`` equals the signal's mean square value.
    """
    x = np.asarray(x, dtype=np.float64)
    t = x.shape[-1]
    if t < 2:
        raise SizeError(f"periodogram needs T >= 2, got {t}")
    spec = np.fft.rfft(x, axis=-1)
    power = np.abs(spec) ** 2 / (t * sfreq)
    scale = np.full(spec.shape[-1], 2.0)
    scale[0] = 1.0
    if t % 2 == 0:
        scale[-1] = 1.0
    power = power * scale
    freqs = np.fft.rfftfreq(t, 1.0 / sfreq)
    return freqs, power


def design_bandstop(center_hz: float, width_hz: float, sfreq: float,
                    max_taps: int | None = None) -> np.ndarray:
    """Linear-phase windowed-sinc (Hamming) band-stop FIR kernel.

    The kernel is the sum of a low-pass at ``center - width/2`` and a
    high-pass (spectrally inverted low-pass) at ``center + width/2``.  The
    length is chosen so the transition width is about half the stop band,
    optionally capped at ``max_taps`` (always odd).

    Raises
    ------
    BandError
        If the stop band does not fit strictly inside (0, sfreq/2).
    """
    f_low = center_hz - width_hz / 2.0
    f_high = center_hz + width_hz / 2.0
    if width_hz <= 0:
        raise BandError(f"bandwidth must be positive, got {width_hz}")
    if f_low <= 0 or f_high >= sfreq / 2.0:
        raise BandError(
            f"band [{f_low:g}, {f_high:g}] Hz must sit strictly inside "
            f"(0, {sfreq / 2.0:g}) Hz"
        )
    # Hamming main-lobe width ~= 3.3 / L (normalized), aim at width/2.
    transition = (width_hz / 2.0) / sfreq
    n_taps = int(np.ceil(3.3 / transition))
    if max_taps is not None:
        n_taps = min(n_taps, int(max_taps))
    n_taps = max(n_taps, 5)
    if n_taps % 2 == 0:
        n_taps += 1
    half = (n_taps - 1) // 2
    # Build everything from |m| so the kernel is symmetric bit for bit.
    m = np.abs(np.arange(n_taps) - half).astype(np.float64)
    window = 0.54 + 0.46 * np.cos(np.pi * m / half)

    def lowpass(cutoff_hz):
        fc = cutoff_hz / sfreq
        h = 2.0 * fc * np.sinc(2.0 * fc * m) * window
        return h / np.sum(h)

    h = lowpass(f_low) - lowpass(f_high)
    h[half] += 1.0  # spectral inversion of the f_high low-pass
    return h


def apply_fir(x: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Zero-phase application of a symmetric odd-length FIR kernel.

    Edges are reflect-padded by half the kernel length, so the output has
    the input's length with the group delay compensated.
    """
    x = np.asarray(x, dtype=np.float64)
    h = np.asarray(h, dtype=np.float64)
    if h.ndim != 1 or len(h) % 2 == 0:
        raise SizeError(f"kernel must be 1-D with odd length, got {h.shape}")
    if x.shape[-1] <= len(h):
        raise SizeError(
            f"signal length {x.shape[-1]} must exceed kernel length {len(h)}"
        )
    half = (len(h) - 1) // 2
    squeeze = x.ndim == 1
    if squeeze:
        x = x[None, :]
    padded = np.pad(x, [(0, 0), (half, half)], mode="reflect")
    out = np.empty_like(x)
    for c in range(x.shape[0]):
        out[c] = np.convolve(padded[c], h, mode="valid")
    return out[0] if squeeze else out


def legendre_P(n: int, x):
    """Legendre polynomial P_n evaluated by the three-term recurrence."""
    if n < 0:
        raise DomainError(f"order must be >= 0, got {n}")
    x = np.asarray(x, dtype=np.float64)
    if np.any(np.abs(x) > 1.0):
        raise DomainError("legendre_P requires |x| <= 1")
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    p_curr = x.copy()
    for k in range(2, n + 1):
        p_prev, p_curr = p_curr, ((2 * k - 1) * x * p_curr - (k - 1) * p_prev) / k
    return p_curr if p_curr.ndim else float(p_curr)


def _spline_kernel(cos_angle, stiffness, n_terms):
    """g(x) = (1/4pi) sum_{n>=1} (2n+1) / (n(n+1))^m P_n(x)."""
    x = np.clip(np.asarray(cos_angle, dtype=np.float64), -1.0, 1.0)
    p_prev = np.ones_like(x)
    p_curr = x.copy()
    acc = (3.0 / 2.0 ** stiffness) * p_curr
    for n in range(2, n_terms + 1):
        p_prev, p_curr = p_curr, ((2 * n - 1) * x * p_curr - (n - 1) * p_prev) / n
        acc += (2 * n + 1) / float(n * (n + 1)) ** stiffness * p_curr
    return acc / (4.0 * np.pi)


def _check_distinct(positions):
    gram = positions @ positions.T
    np.fill_diagonal(gram, -1.0)
    if np.any(gram >= 1.0 - 1e-12):
        i, j = np.unravel_index(np.argmax(gram), gram.shape)
        raise SingularityError(f"coincident sensor positions at indices {i} and {j}")


@dataclass(frozen=True)
class SplineModel:
    """Fitted spherical spline: one coefficient per source plus an offset."""

    sources: np.ndarray
    coeffs: np.ndarray
    offset: float
    stiffness: int
    n_terms: int
    lam: float


def spline_fit(positions: np.ndarray, values: np.ndarray,
               stiffness: int = SPLINE_STIFFNESS, n_terms: int = SPLINE_TERMS,
               lam: float = SPLINE_LAMBDA) -> SplineModel:
    """Fit a spherical spline to potentials at unit-sphere positions.

    Solves the bordered system ``[[G + lam*I, 1], [1^T, 0]] [c; c0] = [v; 0]``
    with ``G_ij = g(cos angle(p_i, p_j))``.
    """
    positions = np.asarray(positions, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    n = positions.shape[0]
    if n < 3:
        raise SingularityError(f"need at least 3 source positions, got {n}")
    _check_distinct(positions)
    gram = _spline_kernel(positions @ positions.T, stiffness, n_terms)
    system = np.zeros((n + 1, n + 1))
    system[:n, :n] = gram + lam * np.eye(n)
    system[:n, n] = 1.0
    system[n, :n] = 1.0
    rhs = np.concatenate([values, [0.0]])
    try:
        sol = np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularityError(f"spline system is singular: {exc}") from exc
    return SplineModel(positions, sol[:n], float(sol[n]), stiffness, n_terms, lam)


def spline_eval(model: SplineModel, targets: np.ndarray) -> np.ndarray:
    """Evaluate a fitted spline at unit-sphere target positions."""
    targets = np.asarray(targets, dtype=np.float64)
    cross = _spline_kernel(targets @ model.sources.T, model.stiffness, model.n_terms)
    return model.offset + cross @ model.coeffs


def spline_interpolation_matrix(sources: np.ndarray, targets: np.ndarray,
                                stiffness: int = SPLINE_STIFFNESS,
                                n_terms: int = SPLINE_TERMS,
                                lam: float = SPLINE_LAMBDA) -> np.ndarray:
    """Matrix ``W`` such that ``W @ v`` equals ``spline_eval`` of the spline
    fitted to source potentials ``v``, for every ``v`` at once.

    Fitting is linear in the potentials, so one solve against the identity
    covers all time samples of a window.
    """
    sources = np.asarray(sources, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    n = sources.shape[0]
    if n < 3:
        raise SingularityError(f"need at least 3 source positions, got {n}")
    _check_distinct(sources)
    gram = _spline_kernel(sources @ sources.T, stiffness, n_terms)
    system = np.zeros((n + 1, n + 1))
    system[:n, :n] = gram + lam * np.eye(n)
    system[:n, n] = 1.0
    system[n, :n] = 1.0
    rhs = np.zeros((n + 1, n))
    rhs[:n, :] = np.eye(n)
    try:
        sol = np.linalg.solve(system, rhs)  # rows: coefficients, then offset
    except np.linalg.LinAlgError as exc:
        raise SingularityError(f"spline system is singular: {exc}") from exc
    cross = _spline_kernel(targets @ sources.T, stiffness, n_terms)
    return cross @ sol[:n, :] + sol[n, :]


_AXES = {"x": 0, "y": 1, "z": 2}


@dataclass(frozen=True)
class RotationMatrix:
    """Right-handed rotation about a head-frame axis."""

    matrix: np.ndarray
    axis: str
    angle_deg: float


def rotation(axis: str, angle_deg: float) -> RotationMatrix:
    """Rotation about X (ear-to-ear), Y (back-to-nose) or Z (up)."""
    ax = axis.lower()
    if ax not in _AXES:
        raise DomainError(f"axis must be one of X, Y, Z, got {axis!r}")
    theta = np.deg2rad(angle_deg)
    c, s = np.cos(theta), np.sin(theta)
    if ax == "x":
        mat = np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
    elif ax == "y":
        mat = np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    else:
        mat = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    return RotationMatrix(mat, ax, float(angle_deg))
