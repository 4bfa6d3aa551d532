"""Command-line front end.

Subcommands: ``synth``, ``augment``, ``gridsearch``, ``learning-curve``,
``per-class``, ``inspect``.  Exit codes: 0 success, 1 usage error, 2 data
or configuration error.  Report commands write CSV plus a JSON aggregate
(carrying the fully resolved configuration and seeds) and, unless
``--no-figures`` is given, a PNG figure next to the CSV.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import eabf, pipeline, protocols, synth
from .baseline import TrainConfig
from .errors import EegAugError
from .figures import render_report_figure

USAGE_EXIT = 1
DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _default_threads() -> int:
    env = os.environ.get("EEGAUG_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _add_threads(parser):
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: EEGAUG_THREADS or all cores)")


def _resolve_threads(args) -> int:
    return args.threads if args.threads else _default_threads()


def _add_policy_source(parser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--preset", choices=pipeline.preset_names(),
                       help="built-in best-value policy")
    group.add_argument("--policy", metavar="JSON_PATH",
                       help="policy JSON file")


def _load_policy(args) -> tuple[pipeline.Policy, str]:
    epoch_flag = getattr(args, "epoch", None)
    if args.preset:
        policy = pipeline.preset(args.preset, seed=args.seed,
                                 epoch=epoch_flag if epoch_flag is not None else 0)
        return policy, args.preset
    with open(args.policy) as fh:
        policy = pipeline.policy_from_json(fh.read())
    # CLI flags take precedence over the policy file
    epoch = epoch_flag if epoch_flag is not None else policy.epoch
    policy = pipeline.Policy(policy.specs, args.seed, epoch)
    return policy, "policy"


def build_parser() -> _Parser:
    parser = _Parser(prog="eegaug",
                     description="Deterministic EEG augmentation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", parents=[], help="generate a synthetic dataset")
    p.add_argument("--classes", type=int, default=4)
    p.add_argument("--per-class", type=int, default=100)
    p.add_argument("--channels", type=int, default=22)
    p.add_argument("--samples", type=int, default=384)
    p.add_argument("--sfreq", type=float, default=128.0)
    p.add_argument("--subjects", type=int, default=None)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("augment", help="apply a policy to an EABF dataset")
    p.add_argument("-i", "--input", required=True)
    _add_policy_source(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--epoch", type=int, default=None,
                   help="overrides the policy file's epoch (default 0)")
    p.add_argument("--index-offset", type=int, default=0,
                   help="added to window indices when deriving streams")
    p.add_argument("-o", "--output", required=True)
    _add_threads(p)

    p = sub.add_parser("gridsearch", help="magnitude grid search")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--aug", required=True, choices=pipeline.TRANSFORM_NAMES)
    p.add_argument("--min", type=float, required=True)
    p.add_argument("--max", type=float, required=True)
    p.add_argument("--points", type=int, default=11)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--p-aug", type=float, default=0.5)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--split", choices=("subject", "session"), default="subject")
    p.add_argument("--train-windows", type=int, default=None,
                   help="subsample each training split to about this many windows")
    p.add_argument("--epochs", type=int, default=None,
                   help="optimizer passes for the baseline model")
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("-o", "--output", required=True, help="CSV path")
    _add_threads(p)

    p = sub.add_parser("learning-curve", help="accuracy vs training fraction")
    p.add_argument("-i", "--input", required=True)
    _add_policy_source(p)
    p.add_argument("--fractions", default=None,
                   help="comma-separated fractions in (0, 1]; default 8 dyadic steps 2^-7..1")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--split", choices=("subject", "session"), default="subject")
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("-o", "--output", required=True, help="CSV path")
    _add_threads(p)

    p = sub.add_parser("per-class", help="per-class F1 improvement on balanced data")
    p.add_argument("-i", "--input", required=True)
    _add_policy_source(p)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--split", choices=("subject", "session"), default="subject")
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("-o", "--output", required=True, help="CSV path")
    _add_threads(p)

    p = sub.add_parser("inspect", help="print an EABF header")
    p.add_argument("input")

    return parser


def _train_config(args) -> TrainConfig:
    if getattr(args, "epochs", None):
        return TrainConfig(n_epochs=args.epochs)
    return TrainConfig()


def _report_paths(csv_path):
    stem, _ = os.path.splitext(csv_path)
    return stem + ".json", stem + ".png"


def _emit_report(report, args):
    protocols.write_report_csv(report, args.output)
    json_path, png_path = _report_paths(args.output)
    protocols.write_report_json(report, json_path)
    if not getattr(args, "no_figures", False):
        render_report_figure(report, png_path)


def _cmd_synth(args):
    dataset = synth.generate_synthetic(
        args.classes, args.per_class, args.channels, args.samples, args.sfreq,
        args.seed, n_subjects=args.subjects)
    eabf.write_dataset(dataset, args.output)
    print(f"wrote {args.output}: {dataset.n_windows} windows, "
          f"{dataset.n_channels} channels, {dataset.n_samples} samples at "
          f"{dataset.sfreq:g} Hz")


def _cmd_augment(args):
    dataset = eabf.read_dataset(args.input)
    policy, _ = _load_policy(args)
    out = pipeline.apply_policy(policy, dataset,
                                n_threads=_resolve_threads(args),
                                index_offset=args.index_offset)
    eabf.write_dataset(out, args.output)
    print(f"wrote {args.output}")


def _cmd_gridsearch(args):
    dataset = eabf.read_dataset(args.input)
    if args.points < 1:
        raise EegAugError(f"--points must be >= 1, got {args.points}")
    step = (args.max - args.min) / (args.points - 1) if args.points > 1 else 0.0
    grid = [args.min + step * i for i in range(args.points)]
    report = protocols.grid_search(
        dataset, args.aug, grid, args.folds, args.seed, p_aug=args.p_aug,
        train_config=_train_config(args), split=args.split,
        train_windows=args.train_windows, n_threads=_resolve_threads(args))
    _emit_report(report, args)
    print(f"wrote {args.output}: {len(report.rows)} rows")


def _cmd_learning_curve(args):
    dataset = eabf.read_dataset(args.input)
    policy, label = _load_policy(args)
    fractions = None
    if args.fractions:
        fractions = [float(v) for v in args.fractions.split(",")]
    report = protocols.learning_curve(
        dataset, policy, fractions, args.folds, label=label,
        train_config=_train_config(args), split=args.split,
        n_threads=_resolve_threads(args))
    _emit_report(report, args)
    print(f"wrote {args.output}: {len(report.rows)} rows")


def _cmd_per_class(args):
    dataset = eabf.read_dataset(args.input)
    policy, label = _load_policy(args)
    report = protocols.per_class_report(
        dataset, policy, args.folds, label=label,
        train_config=_train_config(args), split=args.split,
        n_threads=_resolve_threads(args))
    _emit_report(report, args)
    print(f"wrote {args.output}: {len(report.rows)} rows")


def _cmd_inspect(args):
    header = eabf.read_header(args.input)
    print(json.dumps(header, indent=2, sort_keys=True))


_COMMANDS = {
    "synth": _cmd_synth,
    "augment": _cmd_augment,
    "gridsearch": _cmd_gridsearch,
    "learning-curve": _cmd_learning_curve,
    "per-class": _cmd_per_class,
    "inspect": _cmd_inspect,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _COMMANDS[args.command](args)
    except EegAugError as exc:
        print(f"eegaug: error: {exc}", file=sys.stderr)
        return DATA_EXIT
    return 0


if __name__ == "__main__":
    sys.exit(main())
