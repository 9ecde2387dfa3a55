"""
Feature files, bundles and the synthetic generator
"""

from .base import ClipIndex, DomainBundle, FeatureMatrix, SynthSpec
from .hgf import read_features, write_features
from .text import read_clip_index, read_labels, write_clip_index, write_labels
from .synth import synthesize, synthesize_with_truth
from .loader import load_bundle, save_bundle

__all__ = [
    'ClipIndex',
    'DomainBundle',
    'FeatureMatrix',
    'SynthSpec',
    'read_features',
    'write_features',
    'read_labels',
    'write_labels',
    'read_clip_index',
    'write_clip_index',
    'synthesize',
    'synthesize_with_truth',
    'load_bundle',
    'save_bundle',
]
