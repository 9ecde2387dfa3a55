"""
Network presets read from architectures.yaml.
"""

import os
from functools import lru_cache
from typing import Dict, List, Tuple

import yaml

from config import ARCHITECTURES_FILE
from core.errors import BadSpec
from core.mlp import LINEAR, LayerSpec, build_specs

_PRESETS_PATH = os.path.join(os.path.dirname(__file__), '..', ARCHITECTURES_FILE)


@lru_cache(maxsize=None)
def load_presets(path: str = _PRESETS_PATH) -> Dict[str, dict]:
    with open(path) as f:
        data = yaml.safe_load(f)
    if not isinstance(data, dict) or not data:
        raise BadSpec(f"{path}: no architecture presets found")
    return data


def resolve_preset(name: str, dims: Dict[str, int]) -> str:
    """'auto' picks 'large' when the bundle has its feature dims, 'desk' otherwise."""
    if name != 'auto':
        if name not in load_presets():
            raise BadSpec(f"unknown architecture preset {name!r}")
        return name
    large_dims = load_presets().get('large', {}).get('dims', {})
    return 'large' if large_dims and all(dims.get(k) == v for k, v in large_dims.items()) else 'desk'


def _widths(hidden: List, out_dim: int) -> List[int]:
    return [out_dim if w == 'out' else int(w) for w in hidden]


def level_specs(level: str, cond_dim: int, sample_dim: int, preset: str) -> Tuple[List[LayerSpec], List[LayerSpec]]:
    """
    (generator specs, discriminator specs) for one level.
    The generator maps cond_dim -> sample_dim; the discriminator sees the
    condition and the sample side by side and emits one linear score.
    """
    presets = load_presets()
    if preset not in presets:
        raise BadSpec(f"unknown architecture preset {preset!r}")
    arch = presets[preset]
    key = 'low_generator' if level == 'low' else 'high_generator'
    g_dims = [cond_dim] + _widths(arch[key], sample_dim) + [sample_dim]
    d_dims = [cond_dim + sample_dim] + _widths(arch['discriminator'], sample_dim) + [1]
    return build_specs(g_dims, LINEAR), build_specs(d_dims, LINEAR)
