"""
Feed-forward networks with analytic backpropagation.
Used for both generators and both discriminators of the two GAN levels.
"""

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from .errors import BadSpec, ShapeMismatch, TraceMismatch
from .linalg import as_matrix

RELU = "relu"
LINEAR = "linear"
_ACTIVATIONS = (RELU, LINEAR)


@dataclass(frozen=True)
class LayerSpec:
    in_dim: int
    out_dim: int
    activation: str = RELU   # 'relu' | 'linear'

    def validate(self) -> None:
        if self.in_dim < 1 or self.out_dim < 1:
            raise BadSpec(f"layer dims must be >= 1, got {self.in_dim}->{self.out_dim}")
        if self.activation not in _ACTIVATIONS:
            raise BadSpec(f"unknown activation {self.activation!r}")


@dataclass
class Layer:
    weights: np.ndarray     # out_dim × in_dim
    bias: np.ndarray        # out_dim
    activation: str

    @property
    def spec(self) -> LayerSpec:
        out_dim, in_dim = self.weights.shape
        return LayerSpec(in_dim, out_dim, self.activation)


@dataclass
class MlpNetwork:
    layers: List[Layer]
    seed: int = 0

    @property
    def in_dim(self) -> int:
        return self.layers[0].weights.shape[1]

    @property
    def out_dim(self) -> int:
        return self.layers[-1].weights.shape[0]

    @property
    def specs(self) -> List[LayerSpec]:
        return [layer.spec for layer in self.layers]

    def param_count(self) -> int:
        return sum(layer.weights.size + layer.bias.size for layer in self.layers)

    def copy(self) -> "MlpNetwork":
        return MlpNetwork(
            layers=[Layer(l.weights.copy(), l.bias.copy(), l.activation) for l in self.layers],
            seed=self.seed,
        )

    def all_finite(self) -> bool:
        return all(
            np.all(np.isfinite(l.weights)) and np.all(np.isfinite(l.bias))
            for l in self.layers
        )

    def equals(self, other: "MlpNetwork") -> bool:
        """Bitwise parameter equality."""
        if len(self.layers) != len(other.layers):
            return False
        return all(
            a.activation == b.activation
            and np.array_equal(a.weights, b.weights)
            and np.array_equal(a.bias, b.bias)
            for a, b in zip(self.layers, other.layers)
        )


@dataclass
class LayerGrad:
    weights: np.ndarray
    bias: np.ndarray


@dataclass
class ForwardTrace:
    """Per-layer inputs and pre-activations of one forward pass."""
    inputs: List[np.ndarray] = field(default_factory=list)
    pre_activations: List[np.ndarray] = field(default_factory=list)

    @property
    def batch_size(self) -> int:
        return self.inputs[0].shape[0] if self.inputs else 0


def _check_chain(specs: Sequence[LayerSpec]) -> None:
    if not specs:
        raise BadSpec("a network needs at least one layer")
    for spec in specs:
        spec.validate()
    for i, (a, b) in enumerate(zip(specs, specs[1:])):
        if a.out_dim != b.in_dim:
            raise BadSpec(f"layer {i} out_dim {a.out_dim} does not chain into layer {i + 1} in_dim {b.in_dim}")


def build_specs(dims: Sequence[int], final_activation: str = LINEAR) -> List[LayerSpec]:
    """
    Turn a width list like [2048, 1024, 1024, 1024, 512] into chained LayerSpecs.
    Hidden layers are rectified, the last layer uses final_activation.
    """
    if len(dims) < 2:
        raise BadSpec(f"need at least input and output dims, got {list(dims)}")
    specs = []
    for i, (d_in, d_out) in enumerate(zip(dims, dims[1:])):
        last = i == len(dims) - 2
        specs.append(LayerSpec(int(d_in), int(d_out), final_activation if last else RELU))
    return specs


def init_network(specs: Sequence[LayerSpec], seed: int) -> MlpNetwork:
    """He-scaled normal weights (std = sqrt(2/in_dim)), zero biases, fully determined by seed."""
    _check_chain(specs)
    rng = np.random.default_rng(seed)
    layers = []
    for spec in specs:
        std = np.sqrt(2.0 / spec.in_dim)
        weights = rng.standard_normal((spec.out_dim, spec.in_dim)) * std
        layers.append(Layer(weights, np.zeros(spec.out_dim), spec.activation))
    return MlpNetwork(layers=layers, seed=seed)


def zeros_network(specs: Sequence[LayerSpec]) -> MlpNetwork:
    """All-zero parameters; only meant for tests and degenerate baselines."""
    _check_chain(specs)
    layers = [
        Layer(np.zeros((s.out_dim, s.in_dim)), np.zeros(s.out_dim), s.activation)
        for s in specs
    ]
    return MlpNetwork(layers=layers, seed=0)


def forward(net: MlpNetwork, X) -> Tuple[np.ndarray, ForwardTrace]:
    X = as_matrix(X, "X")
    if X.shape[1] != net.in_dim:
        raise ShapeMismatch(f"network expects {net.in_dim} input columns, got {X.shape[1]}")
    trace = ForwardTrace()
    a = X
    for layer in net.layers:
        trace.inputs.append(a)
        z = a @ layer.weights.T + layer.bias
        trace.pre_activations.append(z)
        a = np.maximum(z, 0.0) if layer.activation == RELU else z
    return a, trace


def backward(net: MlpNetwork, trace: ForwardTrace, dL_dY) -> Tuple[List[LayerGrad], np.ndarray]:
    """
    Gradients of a scalar loss with respect to every weight, bias and the input batch,
    given dL/dY for the output of the forward pass recorded in trace.
    The rectifier derivative at exactly 0 is 0.
    """
    if len(trace.inputs) != len(net.layers):
        raise TraceMismatch(f"trace has {len(trace.inputs)} layers, network has {len(net.layers)}")
    for i, (layer, a_in, z) in enumerate(zip(net.layers, trace.inputs, trace.pre_activations)):
        out_dim, in_dim = layer.weights.shape
        if a_in.shape[1] != in_dim or z.shape[1] != out_dim or z.shape[0] != trace.batch_size:
            raise TraceMismatch(f"trace layer {i} shapes {a_in.shape}/{z.shape} do not fit weights {layer.weights.shape}")
    expected = (trace.batch_size, net.out_dim)
    delta = np.asarray(dL_dY, dtype=np.float64)
    if delta.shape != expected:
        raise TraceMismatch(f"dL_dY shape {delta.shape} does not match output shape {expected}")

    grads: List[LayerGrad] = [None] * len(net.layers)
    for i in range(len(net.layers) - 1, -1, -1):
        layer = net.layers[i]
        z = trace.pre_activations[i]
        if layer.activation == RELU:
            delta = delta * (z > 0.0)
        grads[i] = LayerGrad(weights=delta.T @ trace.inputs[i], bias=delta.sum(axis=0))
        delta = delta @ layer.weights
    return grads, delta
