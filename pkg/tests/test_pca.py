import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from afpsrc.pca import fit_pca, project, project_batch, reconstruct


def test_two_point_dataset():
    m = fit_pca(np.array([[0.0, 0.0], [2.0, 2.0]]))
    np.testing.assert_allclose(m.mean, [1, 1])
    np.testing.assert_allclose(m.components[:, 0], [2**-0.5, 2**-0.5], atol=1e-12)
    # sample covariance uses n - 1, so the spread of +-(1, 1) gives 4
    np.testing.assert_allclose(m.eigenvalues, [4.0, 0.0], atol=1e-12)
    np.testing.assert_allclose(project(m, [2.0, 2.0], 1), [np.sqrt(2)], atol=1e-12)


def test_identical_rows():
    X = np.tile([0.1, 0.7, 0.3], (5, 1))
    m = fit_pca(X)
    assert np.all(m.eigenvalues == 0)
    for k in (1, 2, 3):
        assert np.all(project_batch(m, X, k) == 0)


def test_reconstruction_random(rng):
    X = rng.standard_normal((10, 6))
    m = fit_pca(X)
    np.testing.assert_allclose(reconstruct(m, project_batch(m, X, 6)), X, atol=1e-8)


def test_mean_projects_to_zero(rng):
    m = fit_pca(rng.standard_normal((8, 5)))
    for k in range(1, 6):
        np.testing.assert_allclose(project(m, m.mean, k), 0, atol=1e-15)


def test_wide_matrix_gets_full_basis(rng):
    X = rng.standard_normal((4, 9))
    m = fit_pca(X)
    assert m.components.shape == (9, 9)
    np.testing.assert_allclose(m.components.T @ m.components, np.eye(9), atol=1e-8)
    assert np.all(m.eigenvalues[3:] < 1e-12)
    assert m.rank_bound == 3
    x = rng.standard_normal(9)
    np.testing.assert_allclose(reconstruct(m, project(m, x, 9)), x, atol=1e-8)


@pytest.mark.parametrize("bad", [np.zeros((1, 3)), np.array([[1.0, np.nan], [0, 1]]), np.zeros(3)])
def test_fit_errors(bad):
    with pytest.raises(ValueError):
        fit_pca(bad)


def test_project_errors(rng):
    m = fit_pca(rng.standard_normal((5, 3)))
    with pytest.raises(ValueError):
        project(m, np.zeros(3), 0)
    with pytest.raises(ValueError):
        project(m, np.zeros(3), 4)
    with pytest.raises(ValueError):
        project(m, np.zeros(2), 1)


def test_model_is_read_only(rng):
    m = fit_pca(rng.standard_normal((5, 3)))
    with pytest.raises(ValueError):
        m.components[0, 0] = 1.0


matrices = st.tuples(st.integers(2, 30), st.integers(1, 30)).flatmap(
    lambda nd: arrays(np.float64, nd, elements=st.floats(-100, 100, allow_subnormal=False))
)


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_invariants(X):
    m = fit_pca(X)
    V = m.components
    d = X.shape[1]
    np.testing.assert_allclose(V.T @ V, np.eye(d), atol=1e-8)
    assert np.all(np.diff(m.eigenvalues) <= 1e-9 * max(1.0, m.eigenvalues[0]))
    assert np.all(m.eigenvalues >= 0)
    # largest-magnitude entry of every component is positive
    top = V[np.argmax(np.abs(V), axis=0), np.arange(d)]
    assert np.all(top > 0)
    tr = np.trace(np.atleast_2d(np.cov(X, rowvar=False)))
    assert abs(m.eigenvalues.sum() - tr) <= 1e-8 * max(1.0, tr)
    Z = project_batch(m, X, d)
    scale = max(1.0, np.abs(X).max())
    np.testing.assert_allclose(reconstruct(m, Z), X, atol=1e-8 * scale)
    var = Z.var(axis=0, ddof=1)
    assert np.all(np.diff(var) <= 1e-8 * max(1.0, var.max()))


@settings(max_examples=50, deadline=None)
@given(matrices)
def test_full_projection_is_isometry(X):
    m = fit_pca(X)
    Z = project_batch(m, X, X.shape[1])
    dX = np.linalg.norm(X[:, None] - X[None], axis=2)
    dZ = np.linalg.norm(Z[:, None] - Z[None], axis=2)
    np.testing.assert_allclose(dZ, dX, atol=1e-8 * max(1.0, dX.max()))


def test_fit_is_deterministic(rng):
    X = rng.standard_normal((30, 12))
    a, b = fit_pca(X), fit_pca(X.copy())
    for f in ("mean", "components", "eigenvalues"):
        assert getattr(a, f).tobytes() == getattr(b, f).tobytes()
