import numpy as np
import pytest

from core.errors import DegenerateSample, NonFiniteValue, ShapeMismatch
from core.linalg import add, covariance, frobenius_norm, matmul, scale, transpose


def literal_covariance(X):
    """(1/(n-1)) * (X^T X - (1/n) (1^T X)^T (1^T X)), written out term by term."""
    n = X.shape[0]
    ones = np.ones((n, 1))
    s = ones.T @ X
    return (X.T @ X - (s.T @ s) / n) / (n - 1)


def two_pass_covariance(X):
    Xc = X - X.mean(axis=0)
    return Xc.T @ Xc / (X.shape[0] - 1)


def test_covariance_hand_value():
    E = covariance([[1.0, 2.0], [3.0, 4.0]])
    np.testing.assert_allclose(E, [[2.0, 2.0], [2.0, 2.0]], atol=1e-12)


def test_covariance_identical_rows_is_zero():
    X = np.tile([[0.3, -1.2, 5.0]], (6, 1))
    np.testing.assert_array_equal(covariance(X), np.zeros((3, 3)))


def test_covariance_needs_two_rows():
    with pytest.raises(DegenerateSample):
        covariance([[1.0, 2.0]])


def test_covariance_rejects_nan():
    with pytest.raises(NonFiniteValue):
        covariance([[1.0, np.nan], [0.0, 1.0]])


@pytest.mark.parametrize("seed", range(20))
def test_covariance_properties(seed):
    rng = np.random.default_rng(seed)
    n, d = rng.integers(2, 20), rng.integers(1, 10)
    X = rng.standard_normal((n, d)) * rng.uniform(0.1, 3.0)
    E = covariance(X)

    assert np.max(np.abs(E - E.T)) <= 1e-12
    oracle = two_pass_covariance(X)
    assert np.linalg.norm(E - oracle) <= 1e-10 * max(np.linalg.norm(oracle), 1e-300)
    np.testing.assert_allclose(E, literal_covariance(X), rtol=1e-8, atol=1e-10)

    c = rng.standard_normal(d) * 10
    np.testing.assert_allclose(covariance(X + c), E, atol=1e-9)
    np.testing.assert_allclose(covariance(X[rng.permutation(n)]), E, atol=1e-12)


def test_frobenius_norm_values(rng):
    assert frobenius_norm([[3.0, 4.0]]) == pytest.approx(5.0, abs=1e-12)
    assert frobenius_norm(np.zeros((3, 2))) == 0.0
    X = rng.standard_normal((4, 5))
    assert frobenius_norm(X) ** 2 == pytest.approx(np.sum(X ** 2), rel=1e-12)


def test_matmul_identity_and_shapes(rng):
    X = rng.standard_normal((3, 4))
    np.testing.assert_array_equal(matmul(np.eye(3), X), X)
    with pytest.raises(ShapeMismatch):
        matmul(X, X)
    with pytest.raises(ShapeMismatch):
        add(X, X.T)
    np.testing.assert_array_equal(transpose(X), X.T)
    np.testing.assert_array_equal(scale(X, 2.0), 2.0 * X)
