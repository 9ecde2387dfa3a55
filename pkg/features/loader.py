"""
Bundle Loader
Reads and writes the seven files that make up a DomainBundle directory.
"""

import logging
from pathlib import Path
from typing import Union

from config import CLIPS_FILE, F_FILE, HF_FILE, HS_FILE, LABELS_S_FILE, LABELS_T_FILE, V_FILE
from .base import DomainBundle
from .hgf import read_features, write_features
from .text import read_clip_index, read_labels, write_clip_index, write_labels

logger = logging.getLogger(__name__)


def load_bundle(directory: Union[str, Path]) -> DomainBundle:
    """
    Load H_s, H_f, F, V, source labels and the clip index from directory.
    Target labels are optional and only used for evaluation.
    """
    directory = Path(directory)
    labels_t_path = directory / LABELS_T_FILE
    bundle = DomainBundle(
        H_s=read_features(directory / HS_FILE, "H_s"),
        labels_s=read_labels(directory / LABELS_S_FILE),
        H_f=read_features(directory / HF_FILE, "H_f"),
        F=read_features(directory / F_FILE, "F"),
        V=read_features(directory / V_FILE, "V"),
        clip_index=read_clip_index(directory / CLIPS_FILE),
        labels_t=read_labels(labels_t_path) if labels_t_path.exists() else None,
    ).validate()
    logger.info("loaded bundle from %s: n_s=%d, n_v=%d, n_t=%d, dims=%s",
                directory, bundle.H_s.n_rows, bundle.F.n_rows, bundle.clip_index.n_videos, bundle.dims)
    return bundle


def save_bundle(bundle: DomainBundle, directory: Union[str, Path]) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    write_features(directory / HS_FILE, bundle.H_s)
    write_features(directory / HF_FILE, bundle.H_f)
    write_features(directory / F_FILE, bundle.F)
    write_features(directory / V_FILE, bundle.V)
    write_labels(directory / LABELS_S_FILE, bundle.labels_s)
    if bundle.labels_t is not None:
        write_labels(directory / LABELS_T_FILE, bundle.labels_t)
    write_clip_index(directory / CLIPS_FILE, bundle.clip_index)
    logger.info("wrote bundle to %s", directory)
