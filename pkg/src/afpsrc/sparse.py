"""l1 sparse recovery for t = T w, plus an exhaustive l0 oracle for small instances.

The equality-constrained basis pursuit problem is approached through its
penalized form

    minimize  0.5 * ||T w - t||_2^2 + lam * ||w||_1

solved with a monotone accelerated proximal gradient method (FISTA with
function-value restart). Small ``lam`` drives the solution towards the
l1-minimal exact representation when one exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITER = 5000
L0_RESIDUAL_TOL = 1e-8
L0_MAX_ATOMS = 20
L0_MAX_K = 4
CONTINUATION_START = 0.5
CONTINUATION_FACTOR = 0.1
CONTINUATION_TOL = 1e-5


@dataclass
class BpProblem:
    T: np.ndarray
    t: np.ndarray
    lam: float
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER

    def __post_init__(self):
        self.T = np.asarray(self.T, dtype=np.float64)
        self.t = np.asarray(self.t, dtype=np.float64)
        if self.T.ndim != 2 or self.T.shape[0] < 1 or self.T.shape[1] < 1:
            raise ValueError(f"dictionary must be a non-empty p x m matrix, got {self.T.shape}")
        if self.t.shape != (self.T.shape[0],):
            raise ValueError(f"probe must have dimension {self.T.shape[0]}, got {self.t.shape}")
        if not (np.all(np.isfinite(self.T)) and np.all(np.isfinite(self.t))):
            raise ValueError("non-finite entries in dictionary or probe")
        if not (np.isfinite(self.lam) and self.lam >= 0):
            raise ValueError(f"lam must be a finite nonnegative number, got {self.lam}")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")


@dataclass
class SparseSolution:
    omega: np.ndarray
    iterations: int
    residual_norm: float
    converged: bool
    support: tuple[int, ...] = ()
    objective: list[float] = field(default_factory=list, repr=False)


def soft_threshold(x, thresh):
    return np.sign(x) * np.maximum(np.abs(x) - thresh, 0.0)


def lipschitz(T: np.ndarray) -> float:
    """Largest eigenvalue of T^T T."""
    return float(np.linalg.norm(T, 2) ** 2)


def penalized_objective(T, t, omega, lam) -> float:
    r = T @ omega - t
    return 0.5 * float(r @ r) + lam * float(np.abs(omega).sum())


def fista_batch(T, B, lam, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, L=None,
                history=False, continuation=True):
    """Solve one penalized problem per column of B against a shared dictionary.

    ``lam`` is a scalar or one value per column. Each column stops on its own
    once the relative change of its accepted iterate falls below ``tol``.

    A proximal step is accepted only if it does not raise the objective;
    otherwise momentum restarts from the current iterate, so the objective is
    monotone. With ``continuation`` each column starts from half of
    max|T^T b| and the penalty is cut by ``CONTINUATION_FACTOR`` (warm
    started) each time the iterate settles to ``CONTINUATION_TOL``, until the
    target is reached. Small penalties otherwise leave the null-space part of
    w creeping at lam / L per step.

    Returns ``(W, iterations, converged, objective)``; ``objective`` is column
    0's objective over its target-penalty phase when ``history`` is set.
    """
    T = np.asarray(T, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    p, m = T.shape
    N = B.shape[1]
    lam = np.broadcast_to(np.asarray(lam, dtype=np.float64), (N,)).copy()
    if L is None:
        L = lipschitz(T)

    W = np.zeros((m, N))
    iters = np.zeros(N, dtype=np.int64)
    conv = np.zeros(N, dtype=bool)
    trace: list[float] = []
    if N == 0 or L == 0.0:
        conv[:] = True
        return W, iters, conv, trace

    Tt = np.ascontiguousarray(T.T)
    corr = np.abs(Tt @ B).max(axis=0)
    # w = 0 is optimal iff max|T^T b| <= lam; the slack absorbs rounding in
    # the product so that lam computed from it lands on the exact answer
    zero = corr <= lam * (1 + 1e-12)
    conv[zero] = True
    active = np.flatnonzero(~zero)
    if active.size == 0:
        return W, iters, conv, trace
    B = B[:, active]
    n = active.size
    X = np.zeros((m, n))
    TX = np.zeros((p, n))
    Y, TY = X.copy(), TX.copy()
    lam_cur = np.maximum(lam[active], CONTINUATION_START * corr[active]) if continuation else lam[active].copy()
    F = 0.5 * np.einsum("ij,ij->j", B, B)
    tk = np.ones(n)
    pos = np.arange(n)  # column of B for each active problem

    for it in range(1, max_iter + 1):
        Ba = B[:, pos]
        la = lam_cur
        Z = soft_threshold(Y - (Tt @ (TY - Ba)) / L, la / L)
        TZ = T @ Z
        R = TZ - Ba
        Fz = 0.5 * np.einsum("ij,ij->j", R, R) + la * np.abs(Z).sum(axis=0)
        accept = Fz <= F

        Xn = np.where(accept, Z, X)
        TXn = np.where(accept, TZ, TX)
        Fn = np.where(accept, Fz, F)
        tn = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * tk * tk))
        beta = np.where(accept, (tk - 1.0) / tn, 0.0)
        Yn = Xn + beta * (Xn - X)
        TYn = TXn + beta * (TXn - TX)
        tn = np.where(accept, tn, 1.0)

        diff = np.sqrt(np.einsum("ij,ij->j", Xn - X, Xn - X))
        scale = np.maximum(np.sqrt(np.einsum("ij,ij->j", Xn, Xn)), np.finfo(float).tiny)
        final = la == lam[active]
        settled = accept & (diff <= np.where(final, tol, max(tol, CONTINUATION_TOL)) * scale)
        done = settled & final

        step = settled & ~final
        if step.any():
            la = la.copy()
            la[step] = np.maximum(la[step] * CONTINUATION_FACTOR, lam[active][step])
            R = TXn[:, step] - Ba[:, step]
            Fn[step] = 0.5 * np.einsum("ij,ij->j", R, R) + la[step] * np.abs(Xn[:, step]).sum(axis=0)
            Yn[:, step] = Xn[:, step]
            TYn[:, step] = TXn[:, step]
            tn[step] = 1.0
        if history and active[0] == 0 and la[0] == lam[0]:
            trace.append(float(Fn[0]))

        iters[active] = it
        if done.any():
            W[:, active[done]] = Xn[:, done]
            conv[active[done]] = True
            keep = ~done
            active, pos = active[keep], pos[keep]
            X, TX, Y, TY = Xn[:, keep], TXn[:, keep], Yn[:, keep], TYn[:, keep]
            F, tk, lam_cur = Fn[keep], tn[keep], la[keep]
            if active.size == 0:
                break
        else:
            X, TX, Y, TY, F, tk, lam_cur = Xn, TXn, Yn, TYn, Fn, tn, la

    if active.size:
        W[:, active] = X
    return W, iters, conv, trace


def solve_bp(problem: BpProblem, history: bool = False, continuation: bool = True) -> SparseSolution:
    W, iters, conv, trace = fista_batch(
        problem.T, problem.t[:, None], problem.lam, problem.tol, problem.max_iter,
        history=history, continuation=continuation,
    )
    omega = W[:, 0]
    res = float(np.linalg.norm(problem.T @ omega - problem.t))
    return SparseSolution(
        omega=omega,
        iterations=int(iters[0]),
        residual_norm=res,
        converged=bool(conv[0]),
        support=tuple(int(i) for i in np.flatnonzero(omega)),
        objective=trace,
    )


def dominant_support(omega, k: int) -> tuple[int, ...]:
    """Indices of the k largest-magnitude entries, ascending."""
    order = np.argsort(-np.abs(omega), kind="stable")[:k]
    return tuple(sorted(int(i) for i in order))


def brute_force_l0(T, t, max_k: int) -> SparseSolution:
    """Sparsest exact representation by exhaustive support enumeration.

    Supports of size 1..max_k are least-squares fitted in turn; the first size
    with a residual below 1e-8 wins, ties broken by residual then by
    lexicographic support. Without an exact fit the best residual seen is
    returned with ``converged=False``.
    """
    T = np.asarray(T, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    p, m = T.shape
    if m > L0_MAX_ATOMS or not 1 <= max_k <= L0_MAX_K:
        raise ValueError(f"brute force limited to m <= {L0_MAX_ATOMS} and 1 <= max_k <= {L0_MAX_K}")
    if t.shape != (p,):
        raise ValueError("probe dimension does not match dictionary")

    tried = 0
    if np.linalg.norm(t) < L0_RESIDUAL_TOL:
        return SparseSolution(np.zeros(m), 0, float(np.linalg.norm(t)), True, ())

    best = None
    for k in range(1, min(max_k, m) + 1):
        exact = None
        for S in combinations(range(m), k):
            tried += 1
            cols = T[:, S]
            coef, *_ = np.linalg.lstsq(cols, t, rcond=None)
            res = float(np.linalg.norm(cols @ coef - t))
            key = (res, S)
            if best is None or key < best[0]:
                best = (key, coef)
            if res < L0_RESIDUAL_TOL and (exact is None or key < exact[0]):
                exact = (key, coef)
        if exact is not None:
            (res, S), coef = exact
            omega = np.zeros(m)
            omega[list(S)] = coef
            return SparseSolution(omega, tried, res, True, S)

    (res, S), coef = best
    omega = np.zeros(m)
    omega[list(S)] = coef
    return SparseSolution(omega, tried, res, False, S)
