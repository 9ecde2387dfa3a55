"""
Scalar objectives of the two GAN levels, each returned with its analytic gradients.

  coral_loss          (1/(4d^2)) * ||cov(real) - cov(generated)||_F^2
  lsgan_d_loss        least-squares discriminator loss, targets real=1 / fake=0
  lsgan_g_loss        least-squares generator loss, target 1
  reg_loss            sum of unsquared Frobenius norms of the weight matrices
  combined_objective  lambda_adv * adv + lambda_coral * coral + reg
"""

from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import numpy as np

from .errors import DegenerateSample, EmptyBatch, ShapeMismatch
from .linalg import as_matrix, covariance
from .mlp import MlpNetwork


@dataclass
class LossValue:
    value: float
    grads: Dict[str, object] = field(default_factory=dict)


def _centered(X: np.ndarray) -> np.ndarray:
    return X - X.mean(axis=0, keepdims=True)


def coral_loss(real, generated) -> LossValue:
    real = as_matrix(real, "real")
    generated = as_matrix(generated, "generated")
    if real.shape[1] != generated.shape[1]:
        raise ShapeMismatch(f"coral_loss: real has {real.shape[1]} columns, generated has {generated.shape[1]}")
    for name, X in (("real", real), ("generated", generated)):
        if X.shape[0] < 2:
            raise DegenerateSample(f"coral_loss: {name} needs at least 2 rows, got {X.shape[0]}")

    d = real.shape[1]
    diff = covariance(real) - covariance(generated)
    coef = 1.0 / (4.0 * d * d)
    value = coef * float(np.sum(diff * diff))

    # dL/dE_real = 2*coef*diff (symmetric); d cov / dX contracts to (2/(n-1)) * Xc @ G
    g_cov = 2.0 * coef * diff
    grad_real = (2.0 / (real.shape[0] - 1)) * _centered(real) @ g_cov
    grad_gen = -(2.0 / (generated.shape[0] - 1)) * _centered(generated) @ g_cov
    return LossValue(value, {"real": grad_real, "generated": grad_gen})


def _column(x, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.shape[1] != 1:
        raise ShapeMismatch(f"{name} must be an n×1 column, got shape {x.shape}")
    if x.shape[0] == 0:
        raise EmptyBatch(f"{name} has no rows")
    return x


def lsgan_d_loss(d_real, d_fake) -> LossValue:
    d_real = _column(d_real, "d_real")
    d_fake = _column(d_fake, "d_fake")
    value = 0.5 * float(np.mean((d_real - 1.0) ** 2)) + 0.5 * float(np.mean(d_fake ** 2))
    return LossValue(value, {
        "d_real": (d_real - 1.0) / d_real.shape[0],
        "d_fake": d_fake / d_fake.shape[0],
    })


def lsgan_g_loss(d_fake) -> LossValue:
    d_fake = _column(d_fake, "d_fake")
    value = 0.5 * float(np.mean((d_fake - 1.0) ** 2))
    return LossValue(value, {"d_fake": (d_fake - 1.0) / d_fake.shape[0]})


def reg_loss(nets: Sequence[MlpNetwork]) -> LossValue:
    """
    Sum of ||W||_F over every layer of every network (biases excluded).
    grads["weights"][k][i] is the gradient for layer i of nets[k]; zero where ||W|| = 0.
    """
    value = 0.0
    per_net: List[List[np.ndarray]] = []
    for net in nets:
        layer_grads = []
        for layer in net.layers:
            norm = float(np.sqrt(np.sum(layer.weights * layer.weights)))
            value += norm
            if norm > 0.0:
                layer_grads.append(layer.weights / norm)
            else:
                layer_grads.append(np.zeros_like(layer.weights))
        per_net.append(layer_grads)
    return LossValue(value, {"weights": per_net})


def _scaled(g, w: float):
    if isinstance(g, (list, tuple)):
        return [_scaled(item, w) for item in g]
    return w * g


def combined_objective(level: str, adv: LossValue, coral: LossValue, reg: LossValue, cfg) -> LossValue:
    """
    Full generator objective of one level: lambda_adv*adv + lambda_coral*coral + reg_weight*reg.
    The coefficients come from cfg.loss_weights(level), which applies the ablation switch,
    and cfg.reg_weight (1.0 unless overridden).
    Gradients are returned under "adv.<key>", "coral.<key>" and "reg.<key>", already scaled.
    """
    w_adv, w_coral = cfg.loss_weights(level)
    w_reg = cfg.reg_weight
    value = w_adv * adv.value + w_coral * coral.value + w_reg * reg.value
    grads: Dict[str, object] = {}
    for key, g in adv.grads.items():
        grads[f"adv.{key}"] = w_adv * g
    for key, g in coral.grads.items():
        grads[f"coral.{key}"] = w_coral * g
    for key, g in reg.grads.items():
        grads[f"reg.{key}"] = _scaled(g, w_reg)
    return LossValue(value, grads)
