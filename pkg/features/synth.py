"""
Synthetic two-domain bundle with a known ground truth.

Every observed space is a fixed random linear image of one latent space:
  class prototype  ->  video latent  ->  clip latents
  F = Z A_f^T + noise,  V = Z A_v^T + noise,  H_f = Z A_h^T + noise
Source images are drawn around the same prototypes and pushed through A_h,
so H_s and H_f share a space by construction and an exact V -> H map exists.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .base import ClipIndex, DomainBundle, FeatureMatrix, SynthSpec

logger = logging.getLogger(__name__)


@dataclass
class SynthTruth:
    prototypes: np.ndarray     # C × k
    A_f: np.ndarray            # d_f × k
    A_v: np.ndarray            # d_v × k
    A_h: np.ndarray            # d_h × k
    clip_latents: np.ndarray   # n_v × k
    source_latents: np.ndarray # n_s × k

    def video_to_image_map(self) -> np.ndarray:
        """M with H = V @ M for noiseless data (d_v × d_h)."""
        return np.linalg.pinv(self.A_v).T @ self.A_h.T


def _prototypes(rng: np.random.Generator, n_classes: int, latent_dim: int, separation: float) -> np.ndarray:
    protos = rng.standard_normal((n_classes, latent_dim))
    diffs = protos[:, None, :] - protos[None, :, :]
    dist = np.sqrt(np.sum(diffs * diffs, axis=-1))
    min_dist = dist[np.triu_indices(n_classes, k=1)].min()
    return protos * (separation / min_dist)


def synthesize_with_truth(spec: SynthSpec) -> Tuple[DomainBundle, SynthTruth]:
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    k = spec.latent_dim

    protos = _prototypes(rng, spec.n_classes, k, spec.separation)
    A_f = rng.standard_normal((spec.d_f, k)) / np.sqrt(k)
    A_v = rng.standard_normal((spec.d_v, k)) / np.sqrt(k)
    A_h = rng.standard_normal((spec.d_h, k)) / np.sqrt(k)

    lo, hi = spec.clips_per_video
    clip_latents, video_ids, labels_t = [], [], []
    video = 0
    for c in range(spec.n_classes):
        for _ in range(spec.videos_per_class):
            centre = protos[c] + spec.video_spread * rng.standard_normal(k)
            n_clips = int(rng.integers(lo, hi + 1))
            clip_latents.append(centre + spec.clip_spread * rng.standard_normal((n_clips, k)))
            video_ids.extend([video] * n_clips)
            labels_t.append(c)
            video += 1
    Z = np.vstack(clip_latents)

    labels_s = np.repeat(np.arange(spec.n_classes), spec.sources_per_class)
    Z_s = protos[labels_s] + spec.video_spread * rng.standard_normal((labels_s.size, k))

    def observe(latents: np.ndarray, A: np.ndarray) -> np.ndarray:
        return latents @ A.T + spec.noise * rng.standard_normal((latents.shape[0], A.shape[0]))

    bundle = DomainBundle(
        H_s=FeatureMatrix(observe(Z_s, A_h), "H_s"),
        labels_s=labels_s,
        H_f=FeatureMatrix(observe(Z, A_h), "H_f"),
        F=FeatureMatrix(observe(Z, A_f), "F"),
        V=FeatureMatrix(observe(Z, A_v), "V"),
        clip_index=ClipIndex.from_ids(video_ids),
        labels_t=np.asarray(labels_t, dtype=np.int64),
    ).validate()
    truth = SynthTruth(protos, A_f, A_v, A_h, Z, Z_s)
    logger.info("synthesized %d classes, %d videos, %d clips, %d source images",
                spec.n_classes, video, Z.shape[0], labels_s.size)
    return bundle, truth


def synthesize(spec: SynthSpec) -> DomainBundle:
    bundle, _ = synthesize_with_truth(spec)
    return bundle
