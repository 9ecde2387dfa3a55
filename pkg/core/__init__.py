"""
Numerical core: matrices, networks, losses, optimizer.
"""

from .errors import TransferError
from .linalg import covariance, frobenius_norm
from .mlp import LayerSpec, MlpNetwork, backward, build_specs, forward, init_network, zeros_network
from .losses import LossValue, coral_loss, lsgan_d_loss, lsgan_g_loss, reg_loss, combined_objective
from .optim import AdamState, adam_step

__all__ = [
    'TransferError',
    'covariance',
    'frobenius_norm',
    'LayerSpec',
    'MlpNetwork',
    'backward',
    'build_specs',
    'forward',
    'init_network',
    'zeros_network',
    'LossValue',
    'coral_loss',
    'lsgan_d_loss',
    'lsgan_g_loss',
    'reg_loss',
    'combined_objective',
    'AdamState',
    'adam_step',
]
