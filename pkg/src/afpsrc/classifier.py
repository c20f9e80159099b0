"""Sparse representation classification over a two-class training dictionary.

A probe is coded against the unit-normalized training columns; the class
whose columns alone reconstruct it best wins.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .encoding import Encoding
from .pca import PcaModel, fit_pca, project_batch
from .seqio import AFP, NON_AFP
from .sparse import DEFAULT_MAX_ITER, DEFAULT_TOL, fista_batch, lipschitz

CLASSES = (AFP, NON_AFP)
# residual gap treated as a tie, resolved towards class 1
TIE_TOL = 1e-9
BATCH_SIZE = 1024


@dataclass(frozen=True)
class SolverParams:
    """Penalty is ``lam_rel * max|T^T t|`` for each probe t."""

    lam_rel: float = 1e-4
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER

    def __post_init__(self):
        if not (np.isfinite(self.lam_rel) and self.lam_rel >= 0):
            raise ValueError(f"lambda must be a finite nonnegative number, got {self.lam_rel}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be positive, got {self.max_iter}")


@dataclass(frozen=True)
class Dictionary:
    columns: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        if self.columns.ndim != 2 or self.columns.shape[1] != self.labels.shape[0]:
            raise ValueError("columns and labels disagree in size")
        if np.any(np.diff(self.labels) < 0):
            raise ValueError("labels must list class 1 columns before class 2 columns")
        for c in CLASSES:
            if not np.any(self.labels == c):
                raise ValueError(f"dictionary has no columns for class {c}")

    @property
    def p(self) -> int:
        return self.columns.shape[0]

    @property
    def m(self) -> int:
        return self.columns.shape[1]


@dataclass
class Classification:
    label: int
    residuals: tuple[float, float]
    omega: np.ndarray
    scores: tuple[float, float]
    converged: bool
    iterations: int


@dataclass
class BatchClassification:
    labels: np.ndarray
    residuals: np.ndarray
    scores: np.ndarray
    omega: np.ndarray
    converged: np.ndarray
    iterations: np.ndarray

    def __len__(self):
        return self.labels.shape[0]

    def __getitem__(self, i) -> Classification:
        return Classification(
            label=int(self.labels[i]),
            residuals=(float(self.residuals[i, 0]), float(self.residuals[i, 1])),
            omega=self.omega[i],
            scores=(float(self.scores[i, 0]), float(self.scores[i, 1])),
            converged=bool(self.converged[i]),
            iterations=int(self.iterations[i]),
        )


@dataclass(frozen=True)
class SrcModel:
    pca: PcaModel
    dictionary: Dictionary
    k: int
    encoding: Encoding
    solver: SolverParams = SolverParams()

    def __post_init__(self):
        if self.dictionary.p != self.k:
            raise ValueError(f"dictionary has {self.dictionary.p} rows but k = {self.k}")


def normalize_rows(V: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(V, axis=1)
    bad = np.flatnonzero(norms == 0)
    if bad.size:
        raise ValueError(f"zero-norm sample(s) at index {bad.tolist()}")
    return V / norms[:, None]


def build_dictionary(samples, labels) -> Dictionary:
    """Stack samples as unit-norm columns, class 1 first, input order kept within a class."""
    V = np.asarray(samples, dtype=np.float64)
    y = np.asarray(labels)
    if V.ndim != 2 or V.shape[0] != y.shape[0]:
        raise ValueError("need one label per sample row")
    if not np.all(np.isin(y, CLASSES)):
        raise ValueError("labels must be 1 or 2")
    order = np.concatenate([np.flatnonzero(y == c) for c in CLASSES])
    cols = normalize_rows(V[order]).T
    cols = np.ascontiguousarray(cols)
    lab = y[order].astype(np.int8)
    cols.setflags(write=False)
    lab.setflags(write=False)
    return Dictionary(cols, lab)


def delta_mask(omega, dictionary: Dictionary, c: int) -> np.ndarray:
    if c not in CLASSES:
        raise ValueError(f"class must be 1 or 2, got {c!r}")
    omega = np.asarray(omega)
    if omega.shape[-1] != dictionary.m:
        raise ValueError("coefficient vector length does not match the dictionary")
    return np.where(dictionary.labels == c, omega, 0.0)


def decide(r1, r2):
    return np.where(r1 <= r2 + TIE_TOL, AFP, NON_AFP)


def classify_probes(dictionary: Dictionary, probes, params: SolverParams = SolverParams(),
                    jobs: int = 1) -> BatchClassification:
    """Classify rows of ``probes`` (N x p, already in dictionary space).

    Rows are unit-normalized before coding; a zero row is an error. Probes
    are solved in fixed chunks of ``BATCH_SIZE``; ``jobs > 1`` spreads the
    chunks over threads. Chunk boundaries do not depend on ``jobs``, so the
    output is the same for any worker count.
    """
    P = np.asarray(probes, dtype=np.float64)
    if P.ndim != 2 or P.shape[1] != dictionary.p:
        raise ValueError(f"expected N x {dictionary.p} probes, got shape {P.shape}")
    if jobs < 1:
        raise ValueError(f"jobs must be positive, got {jobs}")
    N = P.shape[0]
    T = dictionary.columns
    m = dictionary.m
    masks = [dictionary.labels == c for c in CLASSES]
    out = BatchClassification(
        labels=np.zeros(N, dtype=np.int8),
        residuals=np.zeros((N, 2)),
        scores=np.zeros((N, 2)),
        omega=np.zeros((N, m)),
        converged=np.zeros(N, dtype=bool),
        iterations=np.zeros(N, dtype=np.int64),
    )
    if N == 0:
        return out
    Tn = normalize_rows(P).T
    L = lipschitz(T)

    def run(start):
        B = Tn[:, start:start + BATCH_SIZE]
        lam = params.lam_rel * np.abs(T.T @ B).max(axis=0)
        W, iters, conv, _ = fista_batch(T, B, lam, params.tol, params.max_iter, L=L)
        sl = slice(start, start + B.shape[1])
        for j, mask in enumerate(masks):
            R = B - T[:, mask] @ W[mask]
            out.residuals[sl, j] = np.linalg.norm(R, axis=0)
            out.scores[sl, j] = np.abs(W[mask]).sum(axis=0)
        out.omega[sl] = W.T
        out.converged[sl] = conv
        out.iterations[sl] = iters

    starts = range(0, N, BATCH_SIZE)
    if jobs == 1 or len(starts) == 1:
        for s in starts:
            run(s)
    else:
        # chunks write disjoint slices of ``out``
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(run, starts))
    out.labels[:] = decide(out.residuals[:, 0], out.residuals[:, 1])
    return out


def classify(model: SrcModel, probe) -> Classification:
    x = np.asarray(probe, dtype=np.float64)
    if x.shape != (model.pca.dim,):
        raise ValueError(f"probe must have dimension {model.pca.dim}, got {x.shape}")
    return classify_batch(model, x[None, :])[0]


def classify_batch(model: SrcModel, X, jobs: int = 1) -> BatchClassification:
    """Project raw feature rows with the model's PCA and classify them."""
    P = project_batch(model.pca, X, model.k)
    return classify_probes(model.dictionary, P, model.solver, jobs)


def fit_model(X, labels: Sequence[int], k: int, encoding, solver: SolverParams = SolverParams()) -> SrcModel:
    """Fit PCA on the training features and build the k-dimensional dictionary."""
    pca = fit_pca(X)
    if not 1 <= k <= pca.dim:
        raise ValueError(f"k must be in [1, {pca.dim}], got {k}")
    D = build_dictionary(project_batch(pca, X, k), labels)
    return SrcModel(pca=pca, dictionary=D, k=k, encoding=Encoding(encoding), solver=solver)
