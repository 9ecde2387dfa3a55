"""
Persistence layer for ClipBridge runs.
Network checkpoints, trained levels and pipeline outputs on disk.

  <net>/manifest.yaml            seed + ordered layer specs
  <net>/layer_<i>_weights.hgf    out_dim × in_dim
  <net>/layer_<i>_bias.hgf       1 × out_dim
  <level>/level.yaml             level tag and loss weights
  <level>/generator/, <level>/discriminator/
"""

import logging
from pathlib import Path
from typing import Dict, Union

import yaml

from config import HS_FILE, HT_FILE, HV_FILE, METRICS_FILE, VF_FILE
from core.errors import BadSpec, ParseError
from core.mlp import Layer, LayerSpec, MlpNetwork
from features.hgf import read_features, write_features
from training.gan_trainer import GanLevel
from utils import format_metric

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

MANIFEST_FILE = "manifest.yaml"
LEVEL_FILE = "level.yaml"


def save_network(net: MlpNetwork, directory: PathLike) -> None:
    """Write a network checkpoint (single precision on disk)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = {
        'seed': int(net.seed),
        'layers': [
            {'in_dim': s.in_dim, 'out_dim': s.out_dim, 'activation': s.activation}
            for s in net.specs
        ],
    }
    for i, layer in enumerate(net.layers):
        write_features(directory / f"layer_{i}_weights.hgf", layer.weights)
        write_features(directory / f"layer_{i}_bias.hgf", layer.bias[None, :])
    with open(directory / MANIFEST_FILE, 'w') as f:
        yaml.safe_dump(manifest, f, sort_keys=False)


def load_network(directory: PathLike) -> MlpNetwork:
    directory = Path(directory)
    with open(directory / MANIFEST_FILE) as f:
        manifest = yaml.safe_load(f)
    if not isinstance(manifest, dict) or not manifest.get('layers'):
        raise ParseError(f"{directory / MANIFEST_FILE}: missing layer list")
    try:
        seed = int(manifest.get('seed', 0))
    except (TypeError, ValueError) as e:
        raise ParseError(f"{directory / MANIFEST_FILE}: bad seed ({e!r})") from e
    layers = []
    for i, entry in enumerate(manifest['layers']):
        try:
            spec = LayerSpec(int(entry['in_dim']), int(entry['out_dim']), str(entry['activation']))
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"{directory / MANIFEST_FILE}: layer {i} entry is malformed ({e!r})") from e
        spec.validate()
        weights = read_features(directory / f"layer_{i}_weights.hgf").values
        bias = read_features(directory / f"layer_{i}_bias.hgf").values
        if weights.shape != (spec.out_dim, spec.in_dim) or bias.shape != (1, spec.out_dim):
            raise BadSpec(f"{directory}: layer {i} files do not match manifest {spec}")
        layers.append(Layer(weights, bias[0].copy(), spec.activation))
    return MlpNetwork(layers=layers, seed=seed)


def save_level(level: GanLevel, directory: PathLike) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    save_network(level.generator, directory / "generator")
    save_network(level.discriminator, directory / "discriminator")
    with open(directory / LEVEL_FILE, 'w') as f:
        yaml.safe_dump({
            'level': level.level,
            'lambda_adv': float(level.lambda_adv),
            'lambda_coral': float(level.lambda_coral),
        }, f, sort_keys=False)
    logger.info("saved %s level checkpoint to %s", level.level, directory)


def load_level(directory: PathLike) -> GanLevel:
    directory = Path(directory)
    with open(directory / LEVEL_FILE) as f:
        meta = yaml.safe_load(f)
    if not isinstance(meta, dict) or 'level' not in meta:
        raise ParseError(f"{directory / LEVEL_FILE}: missing level tag")
    try:
        lambda_adv, lambda_coral = float(meta['lambda_adv']), float(meta['lambda_coral'])
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"{directory / LEVEL_FILE}: bad loss weights ({e!r})") from e
    return GanLevel(
        generator=load_network(directory / "generator"),
        discriminator=load_network(directory / "discriminator"),
        level=str(meta['level']),
        lambda_adv=lambda_adv,
        lambda_coral=lambda_coral,
    ).validate()


def write_metrics(path: PathLike, metrics: Dict[str, float]) -> None:
    """One `key=value` line per metric, accuracy first."""
    with open(path, 'w') as f:
        for key, value in metrics.items():
            f.write(f"{key}={format_metric(value)}\n")


def read_metrics(path: PathLike) -> Dict[str, float]:
    metrics = {}
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            key, sep, value = line.partition('=')
            if not sep:
                raise ParseError(f"{Path(path).name}: expected key=value, got {line!r}", line=lineno)
            metrics[key] = float(value)
    return metrics


def save_result(result, directory: PathLike) -> None:
    """Features, checkpoints, loss reports and metrics of one pipeline run."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    write_features(directory / HT_FILE, result.H_t)
    write_features(directory / HS_FILE, result.H_s)
    write_features(directory / VF_FILE, result.V_f)
    write_features(directory / HV_FILE, result.H_v)
    save_level(result.low, directory / "low")
    save_level(result.high, directory / "high")
    result.report_low.to_csv(directory / "report_low.csv")
    result.report_high.to_csv(directory / "report_high.csv")
    metrics = result.metrics()
    if metrics:
        write_metrics(directory / METRICS_FILE, metrics)
    logger.info("saved pipeline outputs to %s", directory)
