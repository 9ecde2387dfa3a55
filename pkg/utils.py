"""
Utility functions for ClipBridge
"""

import numpy as np


def format_metric(value: float) -> str:
    """
    Format an accuracy-like value with 4 decimal places

    Args:
        value: fraction in [0, 1]

    Returns:
        String such as "0.9533"
    """
    return f"{float(value):.4f}"


def format_shape(m) -> str:
    """'n×d' for a matrix or FeatureMatrix."""
    shape = m.shape if hasattr(m, 'shape') else np.asarray(m).shape
    return "×".join(str(s) for s in shape)
