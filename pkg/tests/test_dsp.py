"""FFT, analytic signal and periodogram against brute-force oracles."""

import numpy as np
import pytest

from eegaug import dsp
from eegaug.errors import SizeError
from eegaug.rng import derive_stream


def dft_direct(x):
    """O(T^2) direct DFT sum; the independent oracle for every FFT check."""
    x = np.asarray(x, dtype=np.float64)
    t = len(x)
    n = np.arange(t)
    return np.array([np.sum(x * np.exp(-2j * np.pi * k * n / t)) for k in range(t)])


def test_fft_dc_only():
    spec = dsp.fft(np.array([1.0, 1.0, 1.0, 1.0]))
    assert np.allclose(spec.coeffs, [4, 0, 0, 0], atol=1e-12)


def test_fft_impulse():
    spec = dsp.fft(np.array([1.0, 0.0, 0.0, 0.0]))
    assert np.allclose(spec.coeffs, [1, 1, 1, 1], atol=1e-12)


@pytest.mark.parametrize("t", [13, 17, 101])
def test_fft_matches_direct_dft_on_odd_lengths(t):
    rng = derive_stream(11, t)
    x = rng.normal(t)
    assert np.allclose(dsp.fft(x).coeffs, dft_direct(x), rtol=1e-9, atol=1e-9)


@pytest.mark.parametrize("t", list(range(2, 66)) + [97, 128, 251, 1000, 1024])
def test_fft_roundtrip_and_parseval(t):
    rng = derive_stream(5, t)
    x = rng.normal(t)
    spec = dsp.fft(x)
    back = dsp.ifft(spec)
    assert np.allclose(back, x, rtol=1e-9, atol=1e-12)
    # Parseval: sum x^2 == (1/T) sum |X|^2
    assert np.isclose(np.sum(x ** 2), np.sum(np.abs(spec.coeffs) ** 2) / t,
                      rtol=1e-9)


def test_fft_roundtrip_and_parseval_all_lengths_to_1024():
    # one batch pass over every length, primes included
    stream = derive_stream(71, 0)
    for t in range(2, 1025):
        x = stream.normal(t)
        spec = dsp.fft(x)
        assert np.allclose(dsp.ifft(spec), x, rtol=1e-9, atol=1e-12), t
        assert np.isclose(np.sum(x ** 2), np.sum(np.abs(spec.coeffs) ** 2) / t,
                          rtol=1e-9), t


def test_fft_rejects_scalars_and_empty():
    with pytest.raises(SizeError):
        dsp.fft(np.array([]))
    with pytest.raises(SizeError):
        dsp.fft(np.array([1.0]))


def test_spectrum_conjugate_symmetry_for_real_input():
    x = derive_stream(3, 0).normal(64)
    coeffs = dsp.fft(x).coeffs
    for k in range(1, 32):
        assert np.isclose(coeffs[k], np.conj(coeffs[64 - k]), rtol=1e-9)


def test_analytic_signal_cosine_gives_complex_exponential():
    t = np.arange(256) / 64.0
    x = np.cos(2 * np.pi * 5 * t)
    a = dsp.analytic_signal(x)
    assert np.allclose(a.real, x, atol=1e-9)
    # interior: imaginary part is the quadrature sine
    expected = np.sin(2 * np.pi * 5 * t)
    assert np.max(np.abs(a.imag[8:-8] - expected[8:-8])) < 1e-6


def test_analytic_signal_constant_input():
    a = dsp.analytic_signal(np.full(32, 2.5))
    assert np.allclose(a.real, 2.5, atol=1e-12)
    assert np.max(np.abs(a.imag)) < 1e-12


@pytest.mark.parametrize("t", [16, 17, 100, 101])
def test_analytic_signal_negative_frequencies_vanish(t):
    x = derive_stream(9, t).normal(t)
    a = dsp.analytic_signal(x)
    spec = np.fft.fft(a)
    negative = spec[(t + 2) // 2 if t % 2 == 0 else (t + 1) // 2:]
    total = np.sum(np.abs(spec) ** 2)
    assert np.sum(np.abs(negative) ** 2) / total < 1e-18


def test_analytic_signal_size_guard():
    with pytest.raises(SizeError):
        dsp.analytic_signal(np.array([1.0, 2.0, 3.0]))


def test_periodogram_peak_at_bin_frequency():
    sfreq = 64.0
    t = np.arange(128) / sfreq
    x = np.sin(2 * np.pi * 8.0 * t)  # exactly bin 16
    freqs, power = dsp.periodogram(x, sfreq)
    assert freqs[np.argmax(power)] == pytest.approx(8.0)


@pytest.mark.parametrize("t", [64, 65, 250, 251])
def test_periodogram_parseval(t):
    x = derive_stream(21, t).normal(t)
    freqs, power = dsp.periodogram(x, 100.0)
    df = 100.0 / t
    # integral of the PSD equals the mean square value (variance + DC power)
    assert np.isclose(np.sum(power) * df, np.mean(x ** 2), rtol=1e-9)


def test_periodogram_white_noise_is_flat_in_octave_bands():
    sfreq = 200.0
    x = derive_stream(33, 0).normal(100_000)
    freqs, power = dsp.periodogram(x, sfreq)
    bands = [(f, 2 * f) for f in (1.0, 2.0, 4.0, 8.0, 16.0, 32.0)]
    means = []
    for lo, hi in bands:
        sel = (freqs >= lo) & (freqs < hi)
        means.append(power[sel].mean())
    level = np.mean(means)
    for m in means:
        # within +-3 dB of the average octave level
        assert abs(10 * np.log10(m / level)) < 3.0


def test_rotation_basics():
    assert np.allclose(dsp.rotation("z", 0.0).matrix, np.eye(3), atol=1e-15)
    r = dsp.rotation("z", 90.0).matrix
    assert np.allclose(r @ [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], atol=1e-12)
    for axis in "xyz":
        a = dsp.rotation(axis, 37.5).matrix
        b = dsp.rotation(axis, -37.5).matrix
        assert np.allclose(a @ b, np.eye(3), atol=1e-12)
        assert np.allclose(a.T @ a, np.eye(3), atol=1e-12)
        assert np.isclose(np.linalg.det(a), 1.0, atol=1e-12)


def test_rotation_is_right_handed_about_each_axis():
    # x cross y = z and cyclic permutations, rotated by +90 degrees
    assert np.allclose(dsp.rotation("x", 90).matrix @ [0, 1, 0], [0, 0, 1],
                       atol=1e-12)
    assert np.allclose(dsp.rotation("y", 90).matrix @ [0, 0, 1], [1, 0, 0],
                       atol=1e-12)
    assert np.allclose(dsp.rotation("z", 90).matrix @ [1, 0, 0], [0, 1, 0],
                       atol=1e-12)
