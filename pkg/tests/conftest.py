import numpy as np
import pytest

from config import TrainConfig
from features import SynthSpec, synthesize


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def small_spec():
    return SynthSpec(n_classes=3, videos_per_class=4, clips_per_video=(2, 4),
                     sources_per_class=10, d_f=6, d_v=4, d_h=5, seed=3)


@pytest.fixture
def small_bundle(small_spec):
    return synthesize(small_spec)


@pytest.fixture
def quick_cfg():
    return TrainConfig(iterations=20, batch_size=8, lr_low=1e-3, lr_high=1e-3,
                       architecture='desk', classifier_iterations=300)
