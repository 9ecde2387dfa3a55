"""
Records shared by the readers, the synthesizer and the pipeline.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from core.errors import BadSpec, InvalidClipIndex, ShapeMismatch
from core.linalg import as_matrix


@dataclass
class FeatureMatrix:
    values: np.ndarray   # n × d, float64
    domain: str = ""     # e.g. 'H_s', 'F', 'V'

    def __post_init__(self):
        self.values = as_matrix(self.values, self.domain or "features")

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]


@dataclass
class ClipIndex:
    """video_ids[k] is the video that clip row k belongs to."""
    video_ids: np.ndarray
    n_videos: int

    @classmethod
    def from_ids(cls, ids) -> "ClipIndex":
        """
        Build and validate: ids must be nonnegative integers and every video id
        in [0, max] must own at least one clip.
        """
        video_ids = np.asarray(ids, dtype=np.int64)
        if video_ids.ndim != 1 or video_ids.size == 0:
            raise InvalidClipIndex("clip index must be a non-empty list of video ids")
        if video_ids.min() < 0:
            raise InvalidClipIndex(f"negative video id {int(video_ids.min())}")
        n_videos = int(video_ids.max()) + 1
        counts = np.bincount(video_ids, minlength=n_videos)
        missing = np.flatnonzero(counts == 0)
        if missing.size:
            raise InvalidClipIndex(f"video ids {missing.tolist()} own no clips")
        return cls(video_ids=video_ids, n_videos=n_videos)

    @property
    def n_clips(self) -> int:
        return int(self.video_ids.size)

    def clips_of(self, video: int) -> np.ndarray:
        return np.flatnonzero(self.video_ids == video)

    def counts(self) -> np.ndarray:
        return np.bincount(self.video_ids, minlength=self.n_videos)


@dataclass
class DomainBundle:
    """
    Everything the pipeline consumes.
      H_s: source image features (n_s × d_h) with labels_s
      H_f: target frame features in the shared image-frame space (n_v × d_h)
      F:   target frame features (n_v × d_f)
      V:   target clip features (n_v × d_v)
    H_f, F and V are row-aligned: row k of each describes clip k.
    """
    H_s: FeatureMatrix
    labels_s: np.ndarray
    H_f: FeatureMatrix
    F: FeatureMatrix
    V: FeatureMatrix
    clip_index: ClipIndex
    labels_t: Optional[np.ndarray] = None

    @property
    def n_classes(self) -> int:
        return int(self.labels_s.max()) + 1

    @property
    def dims(self) -> dict:
        return {'d_f': self.F.n_cols, 'd_v': self.V.n_cols, 'd_h': self.H_f.n_cols}

    def validate(self) -> "DomainBundle":
        n_v = self.F.n_rows
        if self.V.n_rows != n_v or self.H_f.n_rows != n_v:
            raise ShapeMismatch(
                f"F, V and H_f must share their row count, got {n_v}, {self.V.n_rows}, {self.H_f.n_rows}")
        if self.H_s.n_cols != self.H_f.n_cols:
            raise ShapeMismatch(f"H_s has {self.H_s.n_cols} columns, H_f has {self.H_f.n_cols}")
        if self.clip_index.n_clips != n_v:
            raise InvalidClipIndex(f"clip index covers {self.clip_index.n_clips} rows, bundle has {n_v} clips")
        labels = np.asarray(self.labels_s)
        if labels.shape != (self.H_s.n_rows,):
            raise ShapeMismatch(f"{labels.size} source labels for {self.H_s.n_rows} source rows")
        if labels.min() < 0:
            raise BadSpec("source labels must be nonnegative")
        missing = np.flatnonzero(np.bincount(labels, minlength=self.n_classes) == 0)
        if missing.size:
            raise BadSpec(f"classes {missing.tolist()} have no source samples")
        if self.labels_t is not None and np.asarray(self.labels_t).shape != (self.clip_index.n_videos,):
            raise ShapeMismatch(
                f"{np.asarray(self.labels_t).size} target labels for {self.clip_index.n_videos} videos")
        return self


@dataclass(frozen=True)
class SynthSpec:
    n_classes: int = 3
    videos_per_class: int = 20
    clips_per_video: Tuple[int, int] = (5, 10)   # inclusive range
    sources_per_class: int = 30
    d_f: int = 6
    d_v: int = 4
    d_h: int = 5
    latent_dim: int = 3
    separation: float = 1.0     # minimum distance between class prototypes
    noise: float = 0.05         # observation noise (sigma)
    video_spread: float = 0.15  # video latent around its class prototype
    clip_spread: float = 0.05   # clip latent around its video latent
    seed: int = 0

    def validate(self) -> "SynthSpec":
        lo, hi = self.clips_per_video
        problems: List[str] = []
        if self.n_classes < 2:
            problems.append(f"n_classes must be >= 2, got {self.n_classes}")
        if self.videos_per_class < 1 or self.sources_per_class < 1:
            problems.append("videos_per_class and sources_per_class must be >= 1")
        if lo < 1 or hi < lo:
            problems.append(f"clips_per_video must satisfy 1 <= lo <= hi, got {self.clips_per_video}")
        if min(self.d_f, self.d_v, self.d_h) < 1:
            problems.append("feature dims must be >= 1")
        if not 1 <= self.latent_dim <= min(self.d_f, self.d_v, self.d_h):
            problems.append(f"latent_dim must be in [1, min(d_f, d_v, d_h)], got {self.latent_dim}")
        if min(self.noise, self.video_spread, self.clip_spread) < 0 or self.separation <= 0:
            problems.append("noise and spreads must be >= 0 and separation > 0")
        if problems:
            raise BadSpec("; ".join(problems))
        return self
