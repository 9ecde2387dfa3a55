"""
Two-level pipeline
Trains the frame->video GAN, then the video->image-frame GAN, projects the real
clip features into the image-frame space and averages clips into videos.
"""

import logging
from dataclasses import dataclass, replace
from typing import Dict, Iterable, Optional

import numpy as np
import pandas as pd

from config import ABLATIONS, TrainConfig
from core.errors import BadSpec, InvalidClipIndex, ShapeMismatch
from core.linalg import as_matrix
from features.base import ClipIndex, DomainBundle, FeatureMatrix
from .architectures import resolve_preset
from .classifier import accuracy, check_label_sets, fit_classifier
from .gan_trainer import GanLevel, TrainReport, build_level, generate, train_gan

logger = logging.getLogger(__name__)


@dataclass
class PipelineResult:
    H_t: FeatureMatrix
    H_s: FeatureMatrix
    labels_s: np.ndarray
    V_f: FeatureMatrix
    H_v: FeatureMatrix
    low: GanLevel
    high: GanLevel
    report_low: TrainReport
    report_high: TrainReport
    labels_t: Optional[np.ndarray] = None
    accuracy: Optional[float] = None
    baseline_accuracy: Optional[float] = None       # classifier on mean-of-H_f per video
    frame_score_accuracy: Optional[float] = None    # per-frame scores averaged per video

    def metrics(self) -> Dict[str, float]:
        out = {}
        for key in ('accuracy', 'baseline_accuracy', 'frame_score_accuracy'):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out


def average_clips(H_v, idx: ClipIndex) -> np.ndarray:
    """Row j of the result is the mean of the rows of H_v owned by video j."""
    H_v = as_matrix(H_v, "H_v")
    if idx.n_clips != H_v.shape[0]:
        raise InvalidClipIndex(f"clip index covers {idx.n_clips} rows, matrix has {H_v.shape[0]}")
    ids = idx.video_ids
    if ids.min() < 0 or ids.max() >= idx.n_videos:
        raise InvalidClipIndex(f"video ids must lie in [0, {idx.n_videos})")
    counts = idx.counts()
    if np.any(counts == 0):
        raise InvalidClipIndex(f"videos {np.flatnonzero(counts == 0).tolist()} own no clips")
    sums = np.zeros((idx.n_videos, H_v.shape[1]))
    # unbuffered add accumulates in row order
    np.add.at(sums, ids, H_v)
    return sums / counts[:, None]


def evaluate_transfer(H_s, y_s, H_t, y_t, cfg: TrainConfig) -> float:
    """Fit the classifier on the source, return its accuracy on the target rows."""
    H_s = as_matrix(H_s, "H_s")
    H_t = as_matrix(H_t, "H_t")
    if H_s.shape[1] != H_t.shape[1]:
        raise ShapeMismatch(f"source features have d={H_s.shape[1]}, target features have d={H_t.shape[1]}")
    check_label_sets(y_s, y_t)
    clf = fit_classifier(H_s, y_s, cfg.classifier_iterations, cfg.classifier_tol, cfg.classifier_l2)
    return accuracy(clf.predict(H_t), y_t)


def evaluate_frame_scores(H_s, y_s, H_f, idx: ClipIndex, y_t, cfg: TrainConfig) -> float:
    """
    Image-only protocol: classify every target frame with the source classifier,
    average the class probabilities over each video's frames, take the argmax.
    """
    H_s = as_matrix(H_s, "H_s")
    H_f = as_matrix(H_f, "H_f")
    if H_s.shape[1] != H_f.shape[1]:
        raise ShapeMismatch(f"source features have d={H_s.shape[1]}, frame features have d={H_f.shape[1]}")
    check_label_sets(y_s, y_t)
    clf = fit_classifier(H_s, y_s, cfg.classifier_iterations, cfg.classifier_tol, cfg.classifier_l2)
    scores = average_clips(clf.predict_proba(H_f), idx)
    return accuracy(np.argmax(scores, axis=1), y_t)


def _check_shape(name: str, m: np.ndarray, rows: int, cols: int) -> None:
    if m.shape != (rows, cols):
        raise ShapeMismatch(f"{name} has shape {m.shape}, expected ({rows}, {cols})")


def run_pipeline(bundle: DomainBundle, cfg: TrainConfig,
                 low: Optional[GanLevel] = None, high: Optional[GanLevel] = None,
                 progress: bool = False) -> PipelineResult:
    """
    1. train the low level on (F -> V) and compute V_f = G_l(F)
    2. train the high level on (V_f -> H_f) and compute H_v = G_h(V) on the real clips
    3. average H_v per video into H_t
    Pre-built levels may be passed in place of freshly initialized ones.
    """
    cfg.validate()
    bundle.validate()
    dims = bundle.dims
    n_v, n_t = bundle.F.n_rows, bundle.clip_index.n_videos
    preset = resolve_preset(cfg.architecture, dims)
    if low is None:
        low = build_level('low', dims['d_f'], dims['d_v'], cfg, preset)
    if high is None:
        high = build_level('high', dims['d_v'], dims['d_h'], cfg, preset)
    logger.info("pipeline: preset=%s ablation=%s n_v=%d n_t=%d dims=%s",
                preset, cfg.ablation, n_v, n_t, dims)

    low, report_low = train_gan(low, bundle.F.values, bundle.V.values, cfg, progress=progress)
    V_f = generate(low, bundle.F.values)
    _check_shape("V_f", V_f, n_v, dims['d_v'])

    high, report_high = train_gan(high, V_f, bundle.H_f.values, cfg, progress=progress)
    # training pairs use generated V_f, inference projects the real clip features V
    H_v = generate(high, bundle.V.values)
    _check_shape("H_v", H_v, n_v, dims['d_h'])

    H_t = average_clips(H_v, bundle.clip_index)
    _check_shape("H_t", H_t, n_t, dims['d_h'])

    result = PipelineResult(
        H_t=FeatureMatrix(H_t, "H_t"),
        H_s=bundle.H_s,
        labels_s=bundle.labels_s,
        V_f=FeatureMatrix(V_f, "V_f"),
        H_v=FeatureMatrix(H_v, "H_v"),
        low=low,
        high=high,
        report_low=report_low,
        report_high=report_high,
        labels_t=bundle.labels_t,
    )
    if bundle.labels_t is not None:
        Hs, ys, yt = bundle.H_s.values, bundle.labels_s, bundle.labels_t
        result.accuracy = evaluate_transfer(Hs, ys, H_t, yt, cfg)
        result.baseline_accuracy = evaluate_transfer(
            Hs, ys, average_clips(bundle.H_f.values, bundle.clip_index), yt, cfg)
        result.frame_score_accuracy = evaluate_frame_scores(
            Hs, ys, bundle.H_f.values, bundle.clip_index, yt, cfg)
        logger.info("transfer accuracy %.4f (no adaptation %.4f, frame scores %.4f)",
                    result.accuracy, result.baseline_accuracy, result.frame_score_accuracy)
    return result


def run_ablation(bundle: DomainBundle, cfg: TrainConfig, variant: str, **kwargs) -> PipelineResult:
    """run_pipeline with one loss term switched off at both levels."""
    if variant not in ABLATIONS:
        raise BadSpec(f"variant must be one of {ABLATIONS}, got {variant!r}")
    return run_pipeline(bundle, replace(cfg, ablation=variant), **kwargs)


def compare_variants(bundle: DomainBundle, cfg: TrainConfig, seeds: Iterable[int],
                     variants=ABLATIONS) -> pd.DataFrame:
    """
    Accuracy of each variant over several seeds, one row per (variant, seed).
    Needs target labels.
    """
    if bundle.labels_t is None:
        raise BadSpec("comparing variants needs target labels")
    rows = []
    for seed in seeds:
        for variant in variants:
            result = run_ablation(bundle, replace(cfg, seed=int(seed)), variant)
            rows.append({
                'variant': variant,
                'seed': int(seed),
                'accuracy': result.accuracy,
                'baseline_accuracy': result.baseline_accuracy,
            })
            logger.info("variant=%s seed=%d accuracy=%.4f", variant, seed, result.accuracy)
    return pd.DataFrame(rows, columns=['variant', 'seed', 'accuracy', 'baseline_accuracy'])


def summarize_variants(table: pd.DataFrame) -> pd.DataFrame:
    """Mean and std of accuracy per variant, in the order the variants first appear."""
    order = list(dict.fromkeys(table['variant']))
    summary = table.groupby('variant', sort=False)['accuracy'].agg(['mean', 'std', 'count'])
    return summary.reindex(order).reset_index()
