"""eegaug: deterministic EEG data-augmentation transforms, a stochastic
policy engine, and a desk-scale evaluation harness."""

from . import dsp, errors, functional, metrics, transforms
from .eabf import read_dataset, read_header, write_dataset
from .montage import (Montage, builtin_montage, montage_from_csv,
                      symmetric_pairs)
from .pipeline import (AugmentSpec, Policy, apply_policy, policy_from_json,
                       policy_to_json, preset, preset_names,
                       single_transform_policy)
from .rng import RngStream, derive_key, derive_stream
from .synth import generate_synthetic
from .splits import session_folds, stratified_fraction, subject_folds
from .baseline import TrainConfig, predict, train_baseline
from .protocols import (ExperimentReport, grid_search, learning_curve,
                        per_class_report, write_report_csv, write_report_json)
from .window import Dataset, EegWindow

__version__ = "0.1.0"

__all__ = [
    "AugmentSpec", "Dataset", "EegWindow", "ExperimentReport", "Montage",
    "Policy", "RngStream", "TrainConfig", "apply_policy", "builtin_montage",
    "derive_key", "derive_stream", "dsp", "errors", "functional",
    "generate_synthetic", "grid_search", "learning_curve", "metrics",
    "montage_from_csv", "per_class_report", "policy_from_json",
    "policy_to_json", "predict", "preset", "preset_names", "read_dataset",
    "read_header", "session_folds", "single_transform_policy",
    "stratified_fraction", "subject_folds", "symmetric_pairs", "train_baseline",
    "transforms", "write_dataset", "write_report_csv", "write_report_json",
]
