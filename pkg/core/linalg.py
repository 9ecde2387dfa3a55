"""
Dense real-matrix helpers.
Matrices are 2-D float64 numpy arrays in C (row-major) order.
"""

import numpy as np

from .errors import DegenerateSample, NonFiniteValue, ShapeMismatch


def as_matrix(x, name: str = "matrix") -> np.ndarray:
    """
    Coerce x to a C-ordered float64 2-D array.

    Raises ShapeMismatch for anything that is not 2-D, NonFiniteValue for NaN/Inf.
    """
    arr = np.ascontiguousarray(x, dtype=np.float64)
    if arr.ndim != 2:
        raise ShapeMismatch(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteValue(f"{name} contains NaN or Inf")
    return arr


def covariance(X) -> np.ndarray:
    """
    Sample covariance of the rows of X (cols × cols), normalized by n-1.

    Computed as (1/(n-1)) * Xc^T Xc with Xc the column-centered data, which is
    algebraically the same as (1/(n-1)) * (X^T X - (1/n)(1^T X)^T (1^T X)).
    """
    X = as_matrix(X, "X")
    n = X.shape[0]
    if n < 2:
        raise DegenerateSample(f"covariance needs at least 2 rows, got {n}")
    Xc = X - X.mean(axis=0, keepdims=True)
    E = Xc.T @ Xc / (n - 1)
    # exact symmetry, round-off in the product can leave ulp-level skew
    return (E + E.T) * 0.5


def matmul(A, B) -> np.ndarray:
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    if A.shape[1] != B.shape[0]:
        raise ShapeMismatch(f"matmul: {A.shape} @ {B.shape} is not conformable")
    return A @ B


def transpose(A) -> np.ndarray:
    return np.ascontiguousarray(as_matrix(A, "A").T)


def add(A, B) -> np.ndarray:
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    if A.shape != B.shape:
        raise ShapeMismatch(f"add: {A.shape} + {B.shape}")
    return A + B


def scale(A, s: float) -> np.ndarray:
    return as_matrix(A, "A") * float(s)


def frobenius_norm(A) -> float:
    A = as_matrix(A, "A")
    return float(np.sqrt(np.sum(A * A)))


def hstack(A, B) -> np.ndarray:
    """Concatenate along the feature axis; row counts must agree."""
    if A.shape[0] != B.shape[0]:
        raise ShapeMismatch(f"hstack: row counts {A.shape[0]} and {B.shape[0]} differ")
    return np.ascontiguousarray(np.hstack([A, B]))
