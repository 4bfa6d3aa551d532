"""Policy engine: gating, composition, determinism, presets."""

import math

import numpy as np
import pytest

from eegaug.errors import ConfigError
from eegaug.montage import Montage, builtin_montage
from eegaug.pipeline import (AugmentSpec, Policy, TRANSFORM_NAMES, apply_policy,
                             policy_from_json, policy_to_json, preset,
                             single_transform_policy, validate_policy)
from eegaug.rng import derive_stream
from eegaug.window import Dataset


def small_dataset(n=8, c=2, t=32, sfreq=64.0, seed=3):
    data = derive_stream(seed, 0, 7).normal((n, c, t))
    return Dataset(data, sfreq, np.arange(n) % 2, np.arange(n) % 4,
                   np.zeros(n, dtype=np.int64), builtin_montage(c))


def test_thirteen_transforms_registered():
    assert len(TRANSFORM_NAMES) == 13


def test_zero_probability_policy_is_identity():
    d = small_dataset()
    policy = Policy(tuple(AugmentSpec(n, {}, 0.0) for n in
                          ("time-reverse", "sign-flip")), seed=5)
    out = apply_policy(policy, d)
    assert np.array_equal(out.data, d.data)


def test_involution_through_policy():
    d = small_dataset()
    policy = single_transform_policy("time-reverse", p_aug=1.0, seed=11)
    once = apply_policy(policy, d)
    twice = apply_policy(policy, once)
    assert np.array_equal(twice.data, d.data)
    assert not np.array_equal(once.data, d.data)


def test_gate_rate_over_many_windows():
    n = 100_000
    data = derive_stream(1, 0, 13).normal((n, 1, 8))
    d = Dataset(data, 32.0, np.zeros(n, dtype=np.int64),
                np.zeros(n, dtype=np.int64), np.zeros(n, dtype=np.int64),
                Montage(("Cz",)))
    policy = single_transform_policy("time-reverse", p_aug=0.5, seed=2024)
    out = apply_policy(policy, d)
    changed = np.any(out.data != d.data, axis=(1, 2))
    rate = changed.mean()
    assert 0.494 <= rate <= 0.506


def test_parallel_determinism():
    d = small_dataset(n=64, c=4, t=128)
    policy = preset("sleep", seed=9)
    serial = apply_policy(policy, d, n_threads=1)
    for workers in (2, 4, 8):
        parallel = apply_policy(policy, d, n_threads=workers)
        assert np.array_equal(serial.data, parallel.data)


def test_epoch_changes_draws_not_metadata():
    d = small_dataset(n=32)
    p0 = single_transform_policy("gaussian-noise", 0.3, seed=4, epoch=0)
    p1 = single_transform_policy("gaussian-noise", 0.3, seed=4, epoch=1)
    a, b = apply_policy(p0, d), apply_policy(p1, d)
    assert not np.array_equal(a.data, b.data)
    assert np.array_equal(a.labels, b.labels)
    assert np.array_equal(a.subjects, b.subjects)
    assert a.data.shape == b.data.shape


def test_input_dataset_never_mutated():
    # 4 channels for the rotations, 4 s windows for the 1.6 s mask
    d = small_dataset(c=4, t=256)
    snapshot = d.data.copy()
    apply_policy(preset("bci", seed=3), d)
    assert np.array_equal(d.data, snapshot)


def test_rotation_needs_three_channels():
    d = small_dataset(c=2, t=256)
    policy = single_transform_policy("sensors-rotation-z", 10.0, seed=2)
    with pytest.raises(ConfigError):
        apply_policy(policy, d)


def test_appending_a_spec_preserves_earlier_randomness():
    d = small_dataset(n=16)
    lone = Policy((AugmentSpec("gaussian-noise", {"sigma": 0.2}, 1.0),), seed=6)
    extended = Policy(
        (AugmentSpec("gaussian-noise", {"sigma": 0.2}, 1.0),
         AugmentSpec("sign-flip", {}, 0.0)),
        seed=6)
    assert np.array_equal(apply_policy(lone, d).data,
                          apply_policy(extended, d).data)


def test_index_offset_matches_slice_of_batch():
    d = small_dataset(n=10)
    policy = single_transform_policy("gaussian-noise", 0.5, p_aug=1.0, seed=21)
    whole = apply_policy(policy, d)
    tail = apply_policy(policy, d.subset(range(6, 10)), index_offset=6)
    assert np.array_equal(whole.data[6:], tail.data)


def test_policy_json_round_trip():
    policy = preset("bci", seed=77, epoch=3)
    back = policy_from_json(policy_to_json(policy))
    assert back == policy


def test_policy_json_rejects_garbage():
    with pytest.raises(ConfigError):
        policy_from_json("{\"specs\": [{\"name\": \"nope\"}]}")
    with pytest.raises(ConfigError):
        policy_from_json("not json")


def test_preset_values_match_published_best_magnitudes():
    sleep = {s.name: s.params for s in preset("sleep").specs}
    bci = {s.name: s.params for s in preset("bci").specs}
    assert sleep["gaussian-noise"]["sigma"] == 0.12
    assert bci["gaussian-noise"]["sigma"] == 0.16
    assert sleep["smooth-time-mask"]["mask_duration_s"] == 2.0
    assert bci["smooth-time-mask"]["mask_duration_s"] == 1.6
    assert sleep["bandstop-filter"]["bandwidth_hz"] == 1.2
    assert bci["bandstop-filter"]["bandwidth_hz"] == 0.4
    assert sleep["ft-surrogate"]["max_phase_rad"] == 0.9 * math.pi
    assert bci["ft-surrogate"]["max_phase_rad"] == 0.9 * math.pi
    assert sleep["frequency-shift"]["max_shift_hz"] == 0.3
    assert bci["frequency-shift"]["max_shift_hz"] == 2.7
    assert sleep["channels-dropout"]["p_drop"] == 0.4
    assert bci["channels-dropout"]["p_drop"] == 1.0
    assert sleep["channels-shuffle"]["p_shuffle"] == 0.8
    assert bci["channels-shuffle"]["p_shuffle"] == 0.1
    assert sleep["sensors-rotation-x"]["max_angle_deg"] == 25.0
    assert sleep["sensors-rotation-y"]["max_angle_deg"] == 9.0
    assert sleep["sensors-rotation-z"]["max_angle_deg"] == 30.0
    assert bci["sensors-rotation-x"]["max_angle_deg"] == 3.0
    assert bci["sensors-rotation-y"]["max_angle_deg"] == 12.0
    assert bci["sensors-rotation-z"]["max_angle_deg"] == 3.0
    for policy in (preset("sleep"), preset("bci")):
        assert len(policy.specs) == 13
        assert all(s.p_aug == 0.5 for s in policy.specs)


def test_unknown_preset_rejected():
    with pytest.raises(ConfigError):
        preset("moonshot")


def test_validation_happens_before_any_window():
    d = small_dataset(sfreq=64.0)
    bad_shift = single_transform_policy("frequency-shift", 20.0, seed=1)
    with pytest.raises(ConfigError):
        validate_policy(bad_shift, d)
    with pytest.raises(ConfigError):
        apply_policy(bad_shift, d)
    # symmetry on an unpairable montage
    d_bad = Dataset(d.data, d.sfreq, d.labels, d.subjects, d.sessions,
                    Montage(("A1z", "B2")))
    with pytest.raises(ConfigError):
        apply_policy(single_transform_policy("channels-symmetry", seed=0), d_bad)


def test_mask_longer_than_window_rejected_upfront():
    d = small_dataset(t=32, sfreq=64.0)  # half-second windows
    policy = single_transform_policy("smooth-time-mask", 2.0, seed=5)
    with pytest.raises(ConfigError):
        apply_policy(policy, d)


def test_unknown_transform_rejected():
    with pytest.raises(ConfigError):
        AugmentSpec("zap", {}, 0.5)
    with pytest.raises(ConfigError):
        AugmentSpec("time-reverse", {}, 1.5)
