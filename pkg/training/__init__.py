"""
GAN training, the two-level pipeline and transfer evaluation
"""

from .gan_trainer import GanLevel, TrainRecord, TrainReport, build_level, generate, train_gan
from .classifier import fit_classifier
from .pipeline import (
    PipelineResult,
    average_clips,
    compare_variants,
    evaluate_frame_scores,
    evaluate_transfer,
    run_ablation,
    run_pipeline,
    summarize_variants,
)

__all__ = [
    'GanLevel',
    'TrainRecord',
    'TrainReport',
    'build_level',
    'generate',
    'train_gan',
    'fit_classifier',
    'PipelineResult',
    'average_clips',
    'compare_variants',
    'evaluate_frame_scores',
    'evaluate_transfer',
    'run_ablation',
    'run_pipeline',
    'summarize_variants',
]
