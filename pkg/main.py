"""
ClipBridge command-line entry point.
Run with: python main.py <command> [flags]

  synth       write a synthetic bundle (H_s, H_f, F, V, labels, clip index)
  train-low   train the frame->video GAN, write its checkpoint and V_f
  train-high  train the video->image-frame GAN, write its checkpoint, H_v and H_t
  pipeline    both levels, clip averaging and evaluation in one go
  eval        fit the source classifier and score target features
  compare     full model vs. its two ablations over several seeds

Errors are printed as one line `error:<kind>: <message>` and exit with code 2.
"""

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

import yaml

from config import (
    ABLATIONS,
    ARCHITECTURES,
    DEFAULT_BATCH_SIZE,
    DEFAULT_CLASSIFIER_ITERATIONS,
    DEFAULT_CLASSIFIER_L2,
    DEFAULT_CLASSIFIER_TOL,
    DEFAULT_ITERATIONS,
    DEFAULT_LAMBDA1,
    DEFAULT_LAMBDA2,
    DEFAULT_LAMBDA3,
    DEFAULT_LAMBDA4,
    DEFAULT_LR_HIGH,
    DEFAULT_LR_LOW,
    DEFAULT_REG_WEIGHT,
    DEFAULT_SEED,
    HT_FILE,
    HV_FILE,
    METRICS_FILE,
    VF_FILE,
    TrainConfig,
)
from core.errors import TransferError
from features import SynthSpec, load_bundle, read_features, read_labels, save_bundle, synthesize, write_features
from store import load_level, save_level, save_result, write_metrics
from training import (
    average_clips,
    build_level,
    compare_variants,
    evaluate_transfer,
    generate,
    run_ablation,
    summarize_variants,
    train_gan,
)
from training.architectures import resolve_preset
from utils import format_metric, format_shape

logger = logging.getLogger("clipbridge")


# ---------------------------------------------------------------------------
# Flags
# ---------------------------------------------------------------------------

def _add_train_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lambda1", type=float, default=DEFAULT_LAMBDA1, help="low-level adversarial weight")
    p.add_argument("--lambda2", type=float, default=DEFAULT_LAMBDA2, help="low-level CORAL weight")
    p.add_argument("--lambda3", type=float, default=DEFAULT_LAMBDA3, help="high-level adversarial weight")
    p.add_argument("--lambda4", type=float, default=DEFAULT_LAMBDA4, help="high-level CORAL weight")
    p.add_argument("--reg-weight", type=float, default=DEFAULT_REG_WEIGHT, help="weight regularizer coefficient")
    p.add_argument("--lr-low", type=float, default=DEFAULT_LR_LOW)
    p.add_argument("--lr-high", type=float, default=DEFAULT_LR_HIGH)
    p.add_argument("--batch", type=int, default=DEFAULT_BATCH_SIZE)
    p.add_argument("--iters", "--iterations", dest="iters", type=int, default=DEFAULT_ITERATIONS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--ablation", choices=ABLATIONS, default='full')
    p.add_argument("--architecture", choices=ARCHITECTURES, default='auto')
    _add_classifier_flags(p)
    p.add_argument("--progress", action="store_true", help="show a progress bar while training")


def _add_classifier_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--classifier-iters", type=int, default=DEFAULT_CLASSIFIER_ITERATIONS)
    p.add_argument("--classifier-tol", type=float, default=DEFAULT_CLASSIFIER_TOL)
    p.add_argument("--classifier-l2", type=float, default=DEFAULT_CLASSIFIER_L2)


def _config_from_args(args: argparse.Namespace) -> TrainConfig:
    cfg = TrainConfig(
        classifier_iterations=args.classifier_iters,
        classifier_tol=args.classifier_tol,
        classifier_l2=args.classifier_l2,
    )
    if hasattr(args, 'iters'):
        cfg = replace(
            cfg,
            lambda1=args.lambda1, lambda2=args.lambda2, lambda3=args.lambda3, lambda4=args.lambda4,
            reg_weight=args.reg_weight,
            lr_low=args.lr_low, lr_high=args.lr_high, batch_size=args.batch, iterations=args.iters,
            seed=args.seed, ablation=args.ablation, architecture=args.architecture,
        )
    return cfg.validate()


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_synth(args: argparse.Namespace) -> int:
    spec = SynthSpec(
        n_classes=args.classes,
        videos_per_class=args.videos_per_class,
        clips_per_video=(args.clips_min, args.clips_max),
        sources_per_class=args.sources_per_class,
        d_f=args.d_f,
        d_v=args.d_v,
        d_h=args.d_h,
        latent_dim=args.latent_dim,
        noise=args.noise,
        seed=args.seed,
    )
    bundle = synthesize(spec)
    save_bundle(bundle, args.out)
    print(f"H_s={format_shape(bundle.H_s)} H_f={format_shape(bundle.H_f)} "
          f"F={format_shape(bundle.F)} V={format_shape(bundle.V)} videos={bundle.clip_index.n_videos}")
    return 0


def cmd_train_low(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    bundle = load_bundle(args.data)
    dims = bundle.dims
    level = build_level('low', dims['d_f'], dims['d_v'], cfg, resolve_preset(cfg.architecture, dims))
    level, report = train_gan(level, bundle.F.values, bundle.V.values, cfg, progress=args.progress)
    out = Path(args.out)
    save_level(level, out / "low")
    report.to_csv(out / "report_low.csv")
    write_features(out / VF_FILE, generate(level, bundle.F.values))
    return 0


def cmd_train_high(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    bundle = load_bundle(args.data)
    dims = bundle.dims
    if args.vf:
        V_f = read_features(args.vf, "V_f").values
    else:
        V_f = generate(load_level(args.low), bundle.F.values)
    level = build_level('high', dims['d_v'], dims['d_h'], cfg, resolve_preset(cfg.architecture, dims))
    level, report = train_gan(level, V_f, bundle.H_f.values, cfg, progress=args.progress)
    H_v = generate(level, bundle.V.values)
    out = Path(args.out)
    save_level(level, out / "high")
    report.to_csv(out / "report_high.csv")
    write_features(out / HV_FILE, H_v)
    write_features(out / HT_FILE, average_clips(H_v, bundle.clip_index))
    return 0


def cmd_pipeline(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    bundle = load_bundle(args.data)
    result = run_ablation(bundle, cfg, cfg.ablation, progress=args.progress)
    save_result(result, args.out)
    if result.accuracy is not None:
        print(f"accuracy={format_metric(result.accuracy)}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    H_s = read_features(args.hs, "H_s").values
    H_t = read_features(args.ht, "H_t").values
    acc = evaluate_transfer(H_s, read_labels(args.labels_s), H_t, read_labels(args.labels_t), cfg)
    print(f"accuracy={format_metric(acc)}")
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    bundle = load_bundle(args.data)
    table = compare_variants(bundle, cfg, args.seeds)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    table.to_csv(out / "variants.csv", index=False, float_format='%.6f')
    summary = summarize_variants(table)
    write_metrics(out / METRICS_FILE, {f"accuracy_{row.variant}": row.mean for row in summary.itertuples()})
    for row in summary.itertuples():
        print(f"{row.variant}: accuracy={format_metric(row.mean)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="clipbridge", description="Two-level conditional GAN image-to-video transfer")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write a synthetic bundle")
    p.add_argument("--classes", type=int, default=3)
    p.add_argument("--videos-per-class", type=int, default=20)
    p.add_argument("--clips-min", type=int, default=5)
    p.add_argument("--clips-max", type=int, default=10)
    p.add_argument("--sources-per-class", type=int, default=30)
    p.add_argument("--d-f", type=int, default=6)
    p.add_argument("--d-v", type=int, default=4)
    p.add_argument("--d-h", type=int, default=5)
    p.add_argument("--latent-dim", type=int, default=3)
    p.add_argument("--noise", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train-low", help="train the frame->video GAN")
    p.add_argument("--data", required=True, help="bundle directory")
    _add_train_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train_low)

    p = sub.add_parser("train-high", help="train the video->image-frame GAN")
    p.add_argument("--data", required=True, help="bundle directory")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--low", help="low-level checkpoint directory used to generate V_f")
    src.add_argument("--vf", help="precomputed V_f feature file")
    _add_train_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train_high)

    p = sub.add_parser("pipeline", help="run both levels, averaging and evaluation")
    p.add_argument("--data", required=True, help="bundle directory")
    _add_train_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("eval", help="score target features with the source classifier")
    p.add_argument("--hs", required=True)
    p.add_argument("--labels-s", required=True)
    p.add_argument("--ht", required=True)
    p.add_argument("--labels-t", required=True)
    _add_classifier_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compare", help="full model vs. ablations over seeds")
    p.add_argument("--data", required=True, help="bundle directory")
    _add_train_flags(p)
    p.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2, 3, 4])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except TransferError as e:
        print(f"error:{e.kind}: {e}", file=sys.stderr)
    except yaml.YAMLError as e:
        print(f"error:parse_error: {e}", file=sys.stderr)
    except OSError as e:
        where = f"{e.filename}: " if e.filename else ""
        print(f"error:io: {where}{e.strerror or e}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
