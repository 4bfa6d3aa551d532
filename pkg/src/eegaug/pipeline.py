"""Stochastic augmentation policies and their deterministic batch execution.

A :class:`Policy` is an ordered list of :class:`AugmentSpec`, each applied
to a window with its own probability ``p_aug``.  Window ``i`` of a dataset
draws from the stream ``(seed, i, epoch)``: first one gate uniform per spec
(in order), then the transform's internal draws when the gate fires.  The
gate draw always happens, so the realized randomness of a spec never
depends on whether later specs exist.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import functional
from .errors import ConfigError, EegAugError
from .montage import symmetry_permutation
from .rng import derive_stream
from .window import Dataset

#: Transform names, grouped as 4 time + 3 frequency + 6 spatial = 13.
TRANSFORM_NAMES = (
    "gaussian-noise", "smooth-time-mask", "time-reverse", "sign-flip",
    "frequency-shift", "ft-surrogate", "bandstop-filter",
    "channels-symmetry", "channels-dropout", "channels-shuffle",
    "sensors-rotation-x", "sensors-rotation-y", "sensors-rotation-z",
)

#: Magnitude parameter and default search interval per transform (None for
#: the parameter-free transforms).  Intervals are the documented search
#: ranges; where a transform tolerates more (noise sigma), validation is
#: looser than the interval.
MAGNITUDE_PARAM = {
    "gaussian-noise": ("sigma", (0.0, 0.2)),
    "smooth-time-mask": ("mask_duration_s", (0.0, 2.0)),
    "time-reverse": None,
    "sign-flip": None,
    "frequency-shift": ("max_shift_hz", (0.0, 3.0)),
    "ft-surrogate": ("max_phase_rad", (0.0, 2.0 * math.pi)),
    "bandstop-filter": ("bandwidth_hz", (0.0, 2.0)),
    "channels-symmetry": None,
    "channels-dropout": ("p_drop", (0.0, 1.0)),
    "channels-shuffle": ("p_shuffle", (0.0, 1.0)),
    "sensors-rotation-x": ("max_angle_deg", (0.0, 30.0)),
    "sensors-rotation-y": ("max_angle_deg", (0.0, 30.0)),
    "sensors-rotation-z": ("max_angle_deg", (0.0, 30.0)),
}


@dataclass(frozen=True)
class AugmentSpec:
    """One named transform with magnitude parameters and gate probability."""

    name: str
    params: dict
    p_aug: float = 0.5

    def __post_init__(self):
        if self.name not in TRANSFORM_NAMES:
            raise ConfigError(f"unknown transform {self.name!r}")
        if not 0 <= self.p_aug <= 1:
            raise ConfigError(f"p_aug must be in [0, 1], got {self.p_aug}")
        object.__setattr__(self, "params", dict(self.params))


@dataclass(frozen=True)
class Policy:
    """Ordered augmentation specs plus the master seed and epoch counter."""

    specs: tuple
    seed: int = 0
    epoch: int = 0

    def __post_init__(self):
        object.__setattr__(self, "specs", tuple(self.specs))


def policy_to_json(policy: Policy) -> str:
    doc = {
        "seed": int(policy.seed),
        "epoch": int(policy.epoch),
        "specs": [
            {"name": s.name, "params": s.params, "p_aug": s.p_aug}
            for s in policy.specs
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def policy_from_json(text: str) -> Policy:
    try:
        doc = json.loads(text)
        specs = tuple(
            AugmentSpec(s["name"], s.get("params", {}), float(s.get("p_aug", 0.5)))
            for s in doc["specs"]
        )
        return Policy(specs, int(doc.get("seed", 0)), int(doc.get("epoch", 0)))
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise ConfigError(f"malformed policy JSON: {exc}") from exc


# Best magnitudes per task.  The rotation entries are (x, y, z) angles.
_PRESETS = {
    "sleep": {
        "gaussian-noise": {"sigma": 0.12},
        "smooth-time-mask": {"mask_duration_s": 2.0},
        "bandstop-filter": {"bandwidth_hz": 1.2},
        "ft-surrogate": {"max_phase_rad": 0.9 * math.pi, "channel_mode": "independent"},
        "frequency-shift": {"max_shift_hz": 0.3},
        "channels-dropout": {"p_drop": 0.4},
        "channels-shuffle": {"p_shuffle": 0.8},
        "sensors-rotation-x": {"max_angle_deg": 25.0},
        "sensors-rotation-y": {"max_angle_deg": 9.0},
        "sensors-rotation-z": {"max_angle_deg": 30.0},
    },
    "bci": {
        "gaussian-noise": {"sigma": 0.16},
        "smooth-time-mask": {"mask_duration_s": 1.6},
        "bandstop-filter": {"bandwidth_hz": 0.4},
        "ft-surrogate": {"max_phase_rad": 0.9 * math.pi, "channel_mode": "shared"},
        "frequency-shift": {"max_shift_hz": 2.7},
        "channels-dropout": {"p_drop": 1.0},
        "channels-shuffle": {"p_shuffle": 0.1},
        "sensors-rotation-x": {"max_angle_deg": 3.0},
        "sensors-rotation-y": {"max_angle_deg": 12.0},
        "sensors-rotation-z": {"max_angle_deg": 3.0},
    },
}


def preset(name: str, seed: int = 0, epoch: int = 0) -> Policy:
    """Policy with the task's best magnitude for all 13 transforms.

    ``name`` is ``sleep`` or ``bci``; every spec uses ``p_aug = 0.5``.
    """
    if name not in _PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(_PRESETS)}")
    table = _PRESETS[name]
    specs = []
    for transform in TRANSFORM_NAMES:
        specs.append(AugmentSpec(transform, table.get(transform, {}), 0.5))
    return Policy(tuple(specs), seed, epoch)


def preset_names():
    return tuple(sorted(_PRESETS))


def single_transform_policy(name: str, magnitude: float | None = None,
                            p_aug: float = 0.5, seed: int = 0, epoch: int = 0,
                            extra_params: dict | None = None) -> Policy:
    """Policy holding one spec, with the magnitude bound to its parameter."""
    entry = MAGNITUDE_PARAM.get(name)
    if entry is None and name not in MAGNITUDE_PARAM:
        raise ConfigError(f"unknown transform {name!r}")
    params = dict(extra_params or {})
    if magnitude is not None:
        if entry is None:
            raise ConfigError(f"{name} has no magnitude parameter")
        params[entry[0]] = magnitude
    return Policy((AugmentSpec(name, params, p_aug),), seed, epoch)


class _Runner:
    """Per-spec applier with static context resolved once per dataset."""

    def __init__(self, spec: AugmentSpec, dataset: Dataset):
        self.spec = spec
        p = spec.params
        name = spec.name
        sfreq = dataset.sfreq
        duration = dataset.n_samples / sfreq
        try:
            if name == "gaussian-noise":
                sigma = float(p.get("sigma", 0.0))
                if sigma < 0:
                    raise ConfigError(f"sigma must be >= 0, got {sigma}")
                self.apply = lambda data, rng: functional.gaussian_noise(
                    data, sigma, rng)
            elif name == "smooth-time-mask":
                dur = float(p.get("mask_duration_s", 0.0))
                temp = p.get("temperature")
                if not 0 <= dur <= duration:
                    raise ConfigError(
                        f"mask duration {dur} s outside [0, {duration} s] for "
                        f"{dataset.n_samples} samples at {sfreq} Hz"
                    )
                self.apply = lambda data, rng: functional.smooth_time_mask_random(
                    data, sfreq, dur, rng, temp)
            elif name == "time-reverse":
                self.apply = lambda data, rng: functional.time_reverse(data)
            elif name == "sign-flip":
                self.apply = lambda data, rng: functional.sign_flip(data)
            elif name == "frequency-shift":
                max_shift = float(p.get("max_shift_hz", 0.0))
                if not 0 <= max_shift < sfreq / 4.0:
                    raise ConfigError(
                        f"max shift {max_shift} Hz outside [0, sfreq/4 = "
                        f"{sfreq / 4.0} Hz)"
                    )
                self.apply = lambda data, rng: functional.frequency_shift_random(
                    data, sfreq, max_shift, rng)
            elif name == "ft-surrogate":
                max_phase = float(p.get("max_phase_rad", 0.0))
                mode = p.get("channel_mode", "independent")
                if not 0 <= max_phase < 2 * math.pi:
                    raise ConfigError(f"max phase {max_phase} outside [0, 2*pi)")
                if mode not in ("independent", "shared"):
                    raise ConfigError(f"unknown channel mode {mode!r}")
                self.apply = lambda data, rng: functional.ft_surrogate(
                    data, max_phase, rng, mode)
            elif name == "bandstop-filter":
                width = float(p.get("bandwidth_hz", 0.0))
                rng_range = tuple(p.get("center_range", (0.0, 38.0)))
                if not 0 <= width <= 2.0:
                    raise ConfigError(f"bandwidth {width} Hz outside [0, 2]")
                if width > 0:
                    functional.clamp_bandstop_center(0.0, width, sfreq,
                                                     center_max_hz=rng_range[1])
                self.apply = lambda data, rng: functional.bandstop_filter_random(
                    data, sfreq, width, rng, rng_range)
            elif name == "channels-symmetry":
                perm = symmetry_permutation(dataset.montage)
                self.apply = lambda data, rng: functional.channels_symmetry(
                    data, perm)
            elif name == "channels-dropout":
                p_drop = float(p.get("p_drop", 0.0))
                if not 0 <= p_drop <= 1:
                    raise ConfigError(f"p_drop {p_drop} outside [0, 1]")
                self.apply = lambda data, rng: functional.channels_dropout(
                    data, p_drop, rng)
            elif name == "channels-shuffle":
                p_shuffle = float(p.get("p_shuffle", 0.0))
                if not 0 <= p_shuffle <= 1:
                    raise ConfigError(f"p_shuffle {p_shuffle} outside [0, 1]")
                self.apply = lambda data, rng: functional.channels_shuffle(
                    data, p_shuffle, rng)
            elif name.startswith("sensors-rotation-"):
                axis = name[-1]
                max_angle = float(p.get("max_angle_deg", 0.0))
                if not 0 <= max_angle <= 30:
                    raise ConfigError(f"max angle {max_angle} outside [0, 30]")
                positions = dataset.montage.require_positions()
                if len(positions) < 3:
                    raise ConfigError(
                        f"sensor rotation needs >= 3 channels, dataset has "
                        f"{len(positions)}"
                    )
                self.apply = lambda data, rng: functional.sensors_rotation_random(
                    data, positions, axis, max_angle, rng)
            else:  # pragma: no cover - guarded by AugmentSpec
                raise ConfigError(f"unknown transform {name!r}")
        except EegAugError as exc:
            raise ConfigError(f"spec {name!r}: {exc}") from exc


def validate_policy(policy: Policy, dataset: Dataset):
    """Resolve every spec against the dataset, raising ConfigError early."""
    return [_Runner(spec, dataset) for spec in policy.specs]


def apply_policy(policy: Policy, dataset: Dataset, n_threads: int = 1,
                 index_offset: int = 0) -> Dataset:
    """Apply a policy to every window; deterministic for any thread count.

    Window ``i`` derives the stream ``(policy.seed, index_offset + i,
    policy.epoch)``; the offset lets callers augment a slice of a larger
    batch with the indices it would have had in place.  Labels, subjects,
    sessions and ordering are preserved.
    """
    runners = validate_policy(policy, dataset)
    out = np.empty_like(dataset.data)

    def run(i: int):
        stream = derive_stream(policy.seed, index_offset + i, policy.epoch)
        data = dataset.data[i]
        touched = False
        for runner in runners:
            gate = stream.uniform()
            if gate < runner.spec.p_aug:
                data = runner.apply(data, stream)
                touched = True
        out[i] = data if touched else dataset.data[i]

    n = dataset.n_windows
    if n_threads > 1 and n > 1:
        chunk = max(1, -(-n // n_threads))
        ranges = [range(s, min(s + chunk, n)) for s in range(0, n, chunk)]
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            list(pool.map(lambda r: [run(i) for i in r], ranges))
    else:
        for i in range(n):
            run(i)
    return dataset.with_data(out)
