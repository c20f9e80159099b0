"""Covariance PCA with deterministic component signs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PcaModel:
    """Fitted principal components.

    ``components`` is d x d with orthonormal columns sorted by descending
    eigenvalue. Eigenvalues are those of the sample covariance (n - 1
    denominator) of the training matrix.
    """

    mean: np.ndarray
    components: np.ndarray
    eigenvalues: np.ndarray
    n_samples: int

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    @property
    def rank_bound(self) -> int:
        return min(self.n_samples - 1, self.dim)


def _fix_signs(V: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[idx, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def fit_pca(X) -> PcaModel:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("X must be a 2-D matrix")
    n, d = X.shape
    if n < 2:
        raise ValueError(f"PCA needs at least 2 samples, got {n}")
    if d < 1:
        raise ValueError("PCA needs at least 1 feature")
    if not np.all(np.isfinite(X)):
        raise ValueError("X contains non-finite entries")
    mean = X.mean(axis=0)
    Xc = X - mean
    # full_matrices gives the null-space completion when n <= d
    _, s, Vt = np.linalg.svd(Xc, full_matrices=True)
    eig = np.zeros(d)
    r = s.shape[0]
    eig[:r] = s**2 / (n - 1)
    V = np.ascontiguousarray(_fix_signs(Vt.T))
    for arr in (mean, V, eig):
        arr.setflags(write=False)
    return PcaModel(mean=mean, components=V, eigenvalues=eig, n_samples=n)


def _check_k(model: PcaModel, k: int) -> None:
    if not 1 <= k <= model.dim:
        raise ValueError(f"k must be in [1, {model.dim}], got {k}")


def project(model: PcaModel, x, k: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.dim,):
        raise ValueError(f"expected a vector of dimension {model.dim}, got shape {x.shape}")
    _check_k(model, k)
    return model.components[:, :k].T @ (x - model.mean)


def project_batch(model: PcaModel, X, k: int) -> np.ndarray:
    """Project rows of X onto the top-k components (n x k)."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.dim:
        raise ValueError(f"expected an n x {model.dim} matrix, got shape {X.shape}")
    _check_k(model, k)
    return (X - model.mean) @ model.components[:, :k]


def reconstruct(model: PcaModel, z) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    k = z.shape[-1]
    return model.mean + z @ model.components[:, :k].T
