"""
Adam optimizer over MlpNetwork parameters.
One AdamState per network; generator and discriminator keep separate states.
"""

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from .errors import ShapeMismatch
from .mlp import Layer, LayerGrad, MlpNetwork

BETA1 = 0.9
BETA2 = 0.999
EPSILON = 1e-8


@dataclass
class AdamState:
    lr: float
    beta1: float = BETA1
    beta2: float = BETA2
    eps: float = EPSILON
    t: int = 0
    # per layer: (weights moment, bias moment); empty until the first step
    m: List[Tuple[np.ndarray, np.ndarray]] = field(default_factory=list)
    v: List[Tuple[np.ndarray, np.ndarray]] = field(default_factory=list)

    def copy(self) -> "AdamState":
        return AdamState(
            lr=self.lr, beta1=self.beta1, beta2=self.beta2, eps=self.eps, t=self.t,
            m=[(w.copy(), b.copy()) for w, b in self.m],
            v=[(w.copy(), b.copy()) for w, b in self.v],
        )


def _check_shapes(net: MlpNetwork, grads: Sequence[LayerGrad], state: AdamState) -> None:
    if len(grads) != len(net.layers):
        raise ShapeMismatch(f"got gradients for {len(grads)} layers, network has {len(net.layers)}")
    for i, (layer, g) in enumerate(zip(net.layers, grads)):
        if g.weights.shape != layer.weights.shape or g.bias.shape != layer.bias.shape:
            raise ShapeMismatch(f"layer {i}: gradient shapes {g.weights.shape}/{g.bias.shape} "
                                f"vs parameters {layer.weights.shape}/{layer.bias.shape}")
    if state.m:
        if len(state.m) != len(net.layers):
            raise ShapeMismatch("Adam state does not match the network layer count")
        for i, (layer, (mw, mb)) in enumerate(zip(net.layers, state.m)):
            if mw.shape != layer.weights.shape or mb.shape != layer.bias.shape:
                raise ShapeMismatch(f"layer {i}: Adam moments do not match parameter shapes")


def _update(p: np.ndarray, g: np.ndarray, m: np.ndarray, v: np.ndarray, st: AdamState,
            bc1: float, bc2: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    m = st.beta1 * m + (1.0 - st.beta1) * g
    v = st.beta2 * v + (1.0 - st.beta2) * (g * g)
    m_hat = m / bc1
    v_hat = v / bc2
    return p - st.lr * m_hat / (np.sqrt(v_hat) + st.eps), m, v


def adam_step(net: MlpNetwork, grads: Sequence[LayerGrad], state: AdamState) -> Tuple[MlpNetwork, AdamState]:
    """
    One bias-corrected Adam update. Returns a new network and a new state;
    the inputs are left untouched. A fresh state is AdamState(lr=...) with no moments yet.
    """
    _check_shapes(net, grads, state)

    t = state.t + 1
    bc1 = 1.0 - state.beta1 ** t
    bc2 = 1.0 - state.beta2 ** t
    m_prev = state.m or [(np.zeros_like(l.weights), np.zeros_like(l.bias)) for l in net.layers]
    v_prev = state.v or [(np.zeros_like(l.weights), np.zeros_like(l.bias)) for l in net.layers]

    layers, m_new, v_new = [], [], []
    for layer, g, (mw, mb), (vw, vb) in zip(net.layers, grads, m_prev, v_prev):
        w, mw, vw = _update(layer.weights, g.weights, mw, vw, state, bc1, bc2)
        b, mb, vb = _update(layer.bias, g.bias, mb, vb, state, bc1, bc2)
        layers.append(Layer(w, b, layer.activation))
        m_new.append((mw, mb))
        v_new.append((vw, vb))

    new_state = AdamState(lr=state.lr, beta1=state.beta1, beta2=state.beta2, eps=state.eps,
                          t=t, m=m_new, v=v_new)
    return MlpNetwork(layers=layers, seed=net.seed), new_state
