"""Time-domain transforms: noise, smooth mask, reversal, sign flip."""

import numpy as np
import pytest
from scipy import stats

from eegaug import dsp, functional, transforms
from eegaug.errors import ParamError
from eegaug.rng import derive_stream
from eegaug.window import EegWindow


def random_window(c=2, t=256, sfreq=64.0, seed=0):
    data = derive_stream(seed, 0, 99).normal((c, t))
    return EegWindow(data, sfreq)


def periodograms(data, sfreq):
    return dsp.periodogram(data, sfreq)[1]


def assert_psd_preserved(a, b, sfreq, rtol=1e-9):
    pa, pb = periodograms(a, sfreq), periodograms(b, sfreq)
    assert np.allclose(pa, pb, rtol=rtol, atol=0.0)


# ---------------------------------------------------------------- noise

def test_noise_zero_sigma_is_bitwise_identity():
    w = random_window()
    out = transforms.gaussian_noise(w, 0.0, derive_stream(1, 0, 0))
    assert np.array_equal(out.data, w.data)


def test_noise_variance_matches_sigma():
    # 2x3000 window, sigma 0.12: the sample variance of (out - in) must sit
    # in the 99% chi-square interval for n = 6000 draws
    sigma = 0.12
    n = 6000
    lo = sigma ** 2 * stats.chi2.ppf(0.005, n - 1) / (n - 1)
    hi = sigma ** 2 * stats.chi2.ppf(0.995, n - 1) / (n - 1)
    assert 0.0137 < lo < hi < 0.0151  # the frozen interval brackets ours
    w = random_window(c=2, t=3000, sfreq=100.0)
    out = transforms.gaussian_noise(w, sigma, derive_stream(5, 3, 0))
    var = np.var(out.data - w.data, ddof=1)
    assert 0.0137 <= var <= 0.0151


def test_noise_moments_at_one_million_samples():
    # 99% intervals: normal for the mean, chi-square for the variance
    sigma, n = 0.7, 1_000_000
    w = EegWindow(np.zeros((10, n // 10)), 100.0)
    out = transforms.gaussian_noise(w, sigma, derive_stream(77, 0, 0))
    delta = out.data - w.data
    mean_bound = 2.576 * sigma / np.sqrt(n)
    assert abs(delta.mean()) <= mean_bound
    lo = sigma ** 2 * stats.chi2.ppf(0.005, n - 1) / (n - 1)
    hi = sigma ** 2 * stats.chi2.ppf(0.995, n - 1) / (n - 1)
    assert lo <= np.var(delta, ddof=1) <= hi


def test_noise_is_deterministic_per_stream():
    w = random_window()
    a = transforms.gaussian_noise(w, 0.3, derive_stream(7, 11, 2))
    b = transforms.gaussian_noise(w, 0.3, derive_stream(7, 11, 2))
    assert np.array_equal(a.data, b.data)


def test_noise_rejects_negative_sigma():
    with pytest.raises(ParamError):
        transforms.gaussian_noise(random_window(), -0.1, derive_stream(0, 0, 0))


def test_noise_mean_and_variance_invariant_under_channel_permutation():
    # the noise field itself cannot be permutation-equivariant (it is i.i.d.
    # per channel and sample), but its statistics are
    w = random_window(c=4, t=2000)
    perm = np.array([2, 0, 3, 1])
    a = functional.gaussian_noise(w.data, 0.2, derive_stream(3, 0, 0))
    b = functional.gaussian_noise(w.data[perm], 0.2, derive_stream(3, 0, 0))
    assert np.isclose(np.var(a - w.data), np.var(b - w.data[perm]), rtol=0.1)


# ------------------------------------------------------------ time mask

def test_mask_zero_duration_is_exact_identity():
    w = random_window()
    out = transforms.smooth_time_mask(
        w, transforms.TimeMaskParams(0.0), derive_stream(2, 0, 0))
    # sigmoid(x) + sigmoid(-x) == 1, so the mask is exactly one everywhere
    assert np.allclose(out.data, w.data, rtol=1e-3, atol=0.0)
    profile = functional.time_mask_profile(256, 64.0, 0.0, 1.0)
    assert np.allclose(profile, 1.0, atol=1e-12)


def test_mask_interior_tail_mass():
    """Constant input measures the mask directly; bounds derived from the
    sigmoid tail sum(exp(-lam d)) over the interior."""
    sfreq, t = 100.0, 3000  # 30 s window
    duration_s, t_cut = 2.0, 14.0
    lam = sfreq / 4.0
    data = np.ones((1, t))
    out = functional.smooth_time_mask(data, sfreq, duration_s, t_cut)
    times = np.arange(t) / sfreq
    for margin, bound in ((3.0 / lam, 3e-3), (8.0 / lam, 1e-3)):
        interior = (times > t_cut + margin) & (times < t_cut + duration_s - margin)
        assert interior.sum() > 50
        assert np.mean(np.abs(out[0, interior])) <= bound


def test_mask_far_samples_unchanged_within_5pct():
    sfreq = 128.0
    w = random_window(c=3, t=512, sfreq=sfreq)
    lam = sfreq / 4.0
    t_cut = 1.0
    out = functional.smooth_time_mask(w.data, sfreq, 0.5, t_cut)
    times = np.arange(512) / sfreq
    far = (times < t_cut - 3.0 / lam) | (times > t_cut + 0.5 + 3.0 / lam)
    ratio = out[:, far] / w.data[:, far]
    assert np.all(np.abs(ratio - 1.0) < 0.05)


def test_mask_values_bounded():
    profile = functional.time_mask_profile(1000, 100.0, 2.0, 3.0)
    assert np.all(profile > 0.0)
    assert np.all(profile <= 1.0 + 1e-9)


def test_mask_shared_across_channels_and_permutation_equivariant():
    w = random_window(c=4, t=300, sfreq=100.0)
    perm = np.array([3, 1, 0, 2])
    params = transforms.TimeMaskParams(1.0)
    a = transforms.smooth_time_mask(w, params, derive_stream(9, 4, 0))
    b = transforms.smooth_time_mask(
        EegWindow(w.data[perm], w.sfreq), params, derive_stream(9, 4, 0))
    assert np.array_equal(a.data[perm], b.data)


def test_mask_duration_longer_than_window_rejected():
    w = random_window(t=100, sfreq=100.0)  # 1 s window
    with pytest.raises(ParamError):
        transforms.smooth_time_mask(
            w, transforms.TimeMaskParams(2.0), derive_stream(0, 0, 0))


def test_mask_onset_distribution_stays_in_range():
    sfreq, t = 50.0, 500
    w = random_window(c=1, t=t, sfreq=sfreq)
    for i in range(50):
        out = transforms.smooth_time_mask(
            w, transforms.TimeMaskParams(4.0), derive_stream(1, i, 0))
        # masked region must lie inside the window: edges stay near 1
        assert abs(out.data[0, 0] - w.data[0, 0]) < 0.6 * abs(w.data[0, 0]) + 1e-6


# ------------------------------------------------------- involutions

def test_time_reverse_example_and_involution():
    w = EegWindow(np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]), 10.0)
    out = transforms.time_reverse(w)
    assert np.array_equal(out.data, [[3.0, 2.0, 1.0], [6.0, 5.0, 4.0]])
    assert np.array_equal(transforms.time_reverse(out).data, w.data)


def test_sign_flip_example_and_involution():
    w = EegWindow(np.array([[1.0, -2.0]]), 10.0)
    out = transforms.sign_flip(w)
    assert np.array_equal(out.data, [[-1.0, 2.0]])
    assert np.array_equal(transforms.sign_flip(out).data, w.data)


@pytest.mark.parametrize("t", [256, 257, 911])
def test_reverse_and_flip_preserve_periodograms(t):
    w = random_window(c=3, t=t, sfreq=100.0, seed=t)
    for out in (transforms.time_reverse(w), transforms.sign_flip(w)):
        assert_psd_preserved(w.data, out.data, w.sfreq)


def test_reverse_and_flip_commute_with_channel_permutation():
    w = random_window(c=5, t=128)
    perm = np.array([4, 2, 0, 1, 3])
    assert np.array_equal(functional.time_reverse(w.data)[perm],
                          functional.time_reverse(w.data[perm]))
    assert np.array_equal(functional.sign_flip(w.data)[perm],
                          functional.sign_flip(w.data[perm]))
