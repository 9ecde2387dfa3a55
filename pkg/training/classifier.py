"""
Source-domain classifier: multinomial logistic regression fit by full-batch
gradient descent on standardized features.
"""

import logging
from dataclasses import dataclass

import numpy as np

from core.errors import ClassMismatch, EmptyDataset, ShapeMismatch
from core.linalg import as_matrix

logger = logging.getLogger(__name__)


@dataclass
class SoftmaxClassifier:
    weights: np.ndarray   # d × C
    bias: np.ndarray      # C
    mean: np.ndarray      # d, source feature mean
    scale: np.ndarray     # d, source feature std (1 where constant)
    iterations: int = 0

    @property
    def n_classes(self) -> int:
        return self.weights.shape[1]

    def _standardize(self, X: np.ndarray) -> np.ndarray:
        X = as_matrix(X, "features")
        if X.shape[1] != self.weights.shape[0]:
            raise ShapeMismatch(f"classifier was fit on {self.weights.shape[0]} features, got {X.shape[1]}")
        return (X - self.mean) / self.scale

    def predict_proba(self, X) -> np.ndarray:
        return _softmax(self._standardize(X) @ self.weights + self.bias)

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.predict_proba(X), axis=1)


def _softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def fit_classifier(X, y, iterations: int, tol: float, l2: float) -> SoftmaxClassifier:
    """
    Minimize mean cross-entropy + (l2/2)*||W||^2 from a zero start with step 1/L,
    L an upper bound on the gradient's Lipschitz constant. Stops when the
    gradient's max-abs entry drops below tol or after `iterations` steps.
    Deterministic: no randomness is involved.
    """
    X = as_matrix(X, "source features")
    y = np.asarray(y, dtype=np.int64)
    n, d = X.shape
    if n == 0:
        raise EmptyDataset("no source samples to fit the classifier on")
    if y.shape != (n,):
        raise ShapeMismatch(f"{y.size} labels for {n} source rows")
    n_classes = int(y.max()) + 1

    mean = X.mean(axis=0)
    scale = X.std(axis=0)
    scale[scale == 0.0] = 1.0
    Z = (X - mean) / scale
    Y = np.zeros((n, n_classes))
    Y[np.arange(n), y] = 1.0

    # softmax cross-entropy Hessian is bounded by 1/2 * Z^T Z / n
    lipschitz = 0.5 * (np.linalg.norm(Z, 2) ** 2) / n + l2
    step = 1.0 / max(lipschitz, 1e-12)

    W = np.zeros((d, n_classes))
    b = np.zeros(n_classes)
    it = 0
    for it in range(1, iterations + 1):
        P = _softmax(Z @ W + b)
        residual = (P - Y) / n
        gW = Z.T @ residual + l2 * W
        gb = residual.sum(axis=0)
        W -= step * gW
        b -= step * gb
        if max(np.abs(gW).max(), np.abs(gb).max()) < tol:
            break
    logger.debug("classifier fit: %d samples, %d classes, %d iterations", n, n_classes, it)
    return SoftmaxClassifier(W, b, mean, scale, it)


def check_label_sets(y_source, y_target) -> None:
    """Target labels may only use classes that occur in the source labels."""
    unseen = sorted(set(np.asarray(y_target).tolist()) - set(np.asarray(y_source).tolist()))
    if unseen:
        raise ClassMismatch(f"target labels contain classes absent from source: {unseen}")


def accuracy(predicted, labels) -> float:
    predicted = np.asarray(predicted)
    labels = np.asarray(labels)
    if predicted.shape != labels.shape:
        raise ShapeMismatch(f"{predicted.size} predictions for {labels.size} labels")
    if labels.size == 0:
        raise EmptyDataset("no target samples to evaluate")
    return float(np.mean(predicted == labels))
