"""Spatial transforms: symmetry, dropout, shuffle, sensor rotation."""

import itertools

import numpy as np
import pytest

from eegaug import dsp, functional, transforms
from eegaug.errors import MissingPositionsError, ParamError
from eegaug.montage import Montage, builtin_montage, symmetry_permutation
from eegaug.rng import derive_stream
from eegaug.window import EegWindow


def random_window(c, t=64, sfreq=64.0, seed=0):
    return EegWindow(derive_stream(seed, 0, 42).normal((c, t)), sfreq)


def smooth_window(montage, t=64, sfreq=64.0):
    """Window whose spatial profile is a smooth dipole field, with a
    low-frequency temporal modulation."""
    pole = np.array([0.25, 0.35, 0.9])
    pole /= np.linalg.norm(pole)
    profile = montage.positions @ pole
    times = np.arange(t) / sfreq
    carrier = 1.0 + 0.5 * np.sin(2 * np.pi * 4.0 * times)
    return EegWindow(np.outer(profile, carrier), sfreq)


# -------------------------------------------------------------- symmetry

def test_symmetry_swaps_pairs_keeps_midline():
    m = Montage(("C3", "C4", "Cz"))
    w = EegWindow(np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]]), 10.0)
    out = transforms.channels_symmetry(w, m)
    assert np.array_equal(out.data, [[2.0, 2.0], [1.0, 1.0], [3.0, 3.0]])
    again = transforms.channels_symmetry(out, m)
    assert np.array_equal(again.data, w.data)


def test_symmetry_on_full_montage_is_pairwise():
    m = builtin_montage(22)
    perm = symmetry_permutation(m)
    w = random_window(22)
    out = transforms.channels_symmetry(w, m)
    assert np.array_equal(out.data, w.data[perm])


# --------------------------------------------------------------- dropout

def test_dropout_zero_probability_identity():
    w = random_window(4)
    out = transforms.channels_dropout(w, 0.0, derive_stream(1, 0, 0))
    assert np.array_equal(out.data, w.data)


def test_dropout_probability_one_silences_everything():
    w = random_window(4)
    out = transforms.channels_dropout(w, 1.0, derive_stream(1, 0, 0))
    assert np.all(out.data == 0.0)


def test_dropout_kept_channels_bitwise_intact():
    w = random_window(8)
    out = transforms.channels_dropout(w, 0.5, derive_stream(3, 5, 0))
    for c in range(8):
        row = out.data[c]
        assert np.all(row == 0.0) or np.array_equal(row, w.data[c])


def test_dropout_empirical_rate():
    # 1e5 two-channel windows at p_drop = 0.4: 99% binomial interval
    p, n_windows, c = 0.4, 100_000, 2
    data = np.ones((c, 2))
    dropped = 0
    for i in range(n_windows):
        out = functional.channels_dropout(data, p, derive_stream(12, i, 0))
        dropped += int(np.sum(out[:, 0] == 0.0))
    rate = dropped / (n_windows * c)
    assert 0.394 <= rate <= 0.406


def test_dropout_validates_probability():
    with pytest.raises(ParamError):
        functional.channels_dropout(np.ones((2, 4)), 1.5, derive_stream(0, 0, 0))


# --------------------------------------------------------------- shuffle

def test_shuffle_zero_probability_identity():
    w = random_window(5)
    out = transforms.channels_shuffle(w, 0.0, derive_stream(2, 0, 0))
    assert np.array_equal(out.data, w.data)


def test_shuffle_preserves_row_multiset():
    w = random_window(6)
    out = transforms.channels_shuffle(w, 0.7, derive_stream(9, 1, 0))
    rows_in = {w.data[c].tobytes() for c in range(6)}
    rows_out = {out.data[c].tobytes() for c in range(6)}
    assert rows_in == rows_out


def test_shuffle_unselected_rows_stay_in_place():
    data = np.arange(12.0).reshape(6, 2)
    out = functional.channels_shuffle(data, 0.4, derive_stream(4, 2, 0))
    moved = [c for c in range(6) if not np.array_equal(out[c], data[c])]
    # moved rows are a permutation among themselves
    assert sorted(out[moved].flatten()) == sorted(data[moved].flatten())


def test_shuffle_uniform_over_s3():
    # p = 1, C = 3: each of the 6 permutations within 1/6 +- 0.01
    data = np.array([[0.0], [1.0], [2.0]])
    counts = {p: 0 for p in itertools.permutations((0.0, 1.0, 2.0))}
    n = 100_000
    for i in range(n):
        out = functional.channels_shuffle(data, 1.0, derive_stream(77, i, 0))
        counts[tuple(out[:, 0])] += 1
    for c in counts.values():
        assert abs(c / n - 1 / 6) <= 0.01


# -------------------------------------------------------------- rotation

def test_rotation_zero_angle_is_identity_within_spline_tolerance():
    m = builtin_montage(22)
    w = smooth_window(m)
    out = transforms.sensors_rotation(w, m, "y", 0.0, derive_stream(5, 0, 0))
    tol = 10 * 1e-5 * np.max(np.abs(w.data))
    assert np.max(np.abs(out.data - w.data)) <= tol


def test_rotation_constant_field_stays_constant():
    m = builtin_montage(22)
    data = np.full((22, 32), 3.5)
    out = functional.sensors_rotation(data, m.positions, "z", 20.0)
    assert np.allclose(out, 3.5, atol=1e-6)


def test_rotation_round_trip_small_error():
    m = builtin_montage(22)
    w = smooth_window(m)
    fwd = functional.sensors_rotation(w.data, m.positions, "y", 12.0)
    rotated_positions = m.positions @ dsp.rotation("y", 12.0).matrix.T
    back = functional.sensors_rotation(fwd, rotated_positions, "y", -12.0)
    rms_err = np.sqrt(np.mean((back - w.data) ** 2))
    rms_sig = np.sqrt(np.mean(w.data ** 2))
    assert rms_err / rms_sig < 0.05


def test_rotation_linear_in_potentials():
    m = builtin_montage(10)
    a = derive_stream(1, 0, 0).normal((10, 16))
    b = derive_stream(2, 0, 0).normal((10, 16))
    alpha, beta = 0.6, -1.7
    combo = functional.sensors_rotation(alpha * a + beta * b, m.positions, "x", 9.0)
    parts = (alpha * functional.sensors_rotation(a, m.positions, "x", 9.0)
             + beta * functional.sensors_rotation(b, m.positions, "x", 9.0))
    assert np.allclose(combo, parts, rtol=1e-9, atol=1e-9)


def test_rotation_error_shrinks_with_angle():
    m = builtin_montage(22)
    w = smooth_window(m)
    errors = []
    for angle in (16.0, 8.0, 4.0, 2.0, 0.0):
        out = functional.sensors_rotation(w.data, m.positions, "y", angle)
        errors.append(np.max(np.abs(out - w.data)))
    assert all(a >= b - 1e-12 for a, b in zip(errors, errors[1:]))


def test_rotation_requires_positions():
    m = Montage(("Q1", "Q2"))  # not in the built-in table
    w = random_window(2)
    with pytest.raises(MissingPositionsError):
        transforms.sensors_rotation(w, m, "z", 10.0, derive_stream(0, 0, 0))


def test_rotation_angle_guard():
    m = builtin_montage(6)
    w = random_window(6)
    with pytest.raises(ParamError):
        transforms.sensors_rotation(w, m, "z", 45.0, derive_stream(0, 0, 0))


def test_rotation_draws_are_deterministic():
    m = builtin_montage(8)
    w = smooth_window(builtin_montage(8))
    a = transforms.sensors_rotation(w, m, "x", 15.0, derive_stream(3, 2, 1))
    b = transforms.sensors_rotation(w, m, "x", 15.0, derive_stream(3, 2, 1))
    assert np.array_equal(a.data, b.data)
