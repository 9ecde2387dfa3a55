import numpy as np
import pytest
import yaml

from core.errors import BadSpec, ParseError
from core.mlp import build_specs, init_network
from store import load_level, load_network, read_metrics, save_level, save_network, write_metrics
from training import build_level


def test_network_checkpoint_round_trip(tmp_path):
    net = init_network(build_specs([4, 6, 2]), seed=3)
    save_network(net, tmp_path / "net")
    back = load_network(tmp_path / "net")
    assert back.specs == net.specs
    assert back.seed == 3
    for a, b in zip(net.layers, back.layers):
        np.testing.assert_array_equal(b.weights, a.weights.astype(np.float32))
        np.testing.assert_array_equal(b.bias, a.bias.astype(np.float32))

    manifest = yaml.safe_load((tmp_path / "net" / "manifest.yaml").read_text())
    assert manifest['layers'][0] == {'in_dim': 4, 'out_dim': 6, 'activation': 'relu'}


def test_manifest_must_match_layer_files(tmp_path):
    save_network(init_network(build_specs([3, 2]), seed=0), tmp_path)
    path = tmp_path / "manifest.yaml"
    manifest = yaml.safe_load(path.read_text())
    manifest['layers'][0]['out_dim'] = 5
    path.write_text(yaml.safe_dump(manifest))
    with pytest.raises(BadSpec):
        load_network(tmp_path)

    path.write_text("seed: 0\n")
    with pytest.raises(ParseError):
        load_network(tmp_path)


@pytest.mark.parametrize("entry", [
    {'in_dim': 3, 'activation': 'linear'},
    {'in_dim': 'three', 'out_dim': 2, 'activation': 'linear'},
    {'in_dim': None, 'out_dim': 2, 'activation': 'linear'},
])
def test_malformed_manifest_entry_is_a_parse_error(tmp_path, entry):
    save_network(init_network(build_specs([3, 2]), seed=0), tmp_path)
    path = tmp_path / "manifest.yaml"
    manifest = yaml.safe_load(path.read_text())
    manifest['layers'][0] = entry
    path.write_text(yaml.safe_dump(manifest))
    with pytest.raises(ParseError, match="layer 0"):
        load_network(tmp_path)


def test_malformed_level_weights_are_a_parse_error(tmp_path, quick_cfg):
    save_level(build_level('low', 3, 2, quick_cfg, 'desk'), tmp_path / "low")
    path = tmp_path / "low" / "level.yaml"
    meta = yaml.safe_load(path.read_text())
    del meta['lambda_coral']
    path.write_text(yaml.safe_dump(meta))
    with pytest.raises(ParseError):
        load_level(tmp_path / "low")


def test_level_checkpoint_round_trip(tmp_path, quick_cfg):
    level = build_level('high', 4, 5, quick_cfg, 'desk')
    save_level(level, tmp_path / "high")
    back = load_level(tmp_path / "high")
    assert back.level == 'high'
    assert (back.lambda_adv, back.lambda_coral) == (level.lambda_adv, level.lambda_coral)
    assert back.cond_dim == 4 and back.sample_dim == 5
    np.testing.assert_allclose(back.generator.layers[0].weights, level.generator.layers[0].weights, rtol=1e-6)


def test_metrics_file(tmp_path):
    write_metrics(tmp_path / "metrics.txt", {'accuracy': 0.91666666, 'baseline_accuracy': 0.5})
    assert (tmp_path / "metrics.txt").read_text() == "accuracy=0.9167\nbaseline_accuracy=0.5000\n"
    assert read_metrics(tmp_path / "metrics.txt") == {'accuracy': 0.9167, 'baseline_accuracy': 0.5}

    (tmp_path / "bad.txt").write_text("accuracy 0.9\n")
    with pytest.raises(ParseError):
        read_metrics(tmp_path / "bad.txt")
