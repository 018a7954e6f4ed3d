"""Lawson-Hanson active-set solver for ``min ||A u - b||_2, u >= 0``.

The passive-set least-squares problems are solved from a QR factorization
that is updated column by column (``scipy.linalg.qr_insert`` /
``qr_delete``) as indices enter and leave the passive set.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import qr_delete, qr_insert, solve_triangular

EPS = np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class NnlsResult:
    u: np.ndarray
    residual_norm: float
    support: np.ndarray
    iterations: int
    converged: bool = True


def select_entering(w, allowed):
    """Index of the next passive column; ``None`` when none qualifies.

    The single choice point of the outer loop (largest dual component).
    """
    cand = np.where(allowed, w, -np.inf)
    j = int(np.argmax(cand))
    return j if np.isfinite(cand[j]) else None


class _PassiveQR:
    """Full QR of ``A[:, passive]`` kept in passive-list order."""

    def __init__(self, A):
        self.A = A
        m = A.shape[0]
        self.Q = np.eye(m)
        self.R = np.zeros((m, 0))
        self.cols: list[int] = []

    def append(self, j):
        col = self.A[:, j]
        k = len(self.cols)
        if k == 0:
            self.Q, self.R = np.linalg.qr(col[:, None], mode="complete")
        else:
            self.Q, self.R = qr_insert(self.Q, self.R, col, k, which="col", check_finite=False)
        self.cols.append(j)

    def remove(self, j):
        k = self.cols.index(j)
        if len(self.cols) == 1:
            m = self.A.shape[0]
            self.Q, self.R = np.eye(m), np.zeros((m, 0))
        else:
            self.Q, self.R = qr_delete(self.Q, self.R, k, which="col", check_finite=False)
        del self.cols[k]

    def last_pivot(self):
        k = len(self.cols)
        return abs(self.R[k - 1, k - 1]) if k <= self.R.shape[0] else 0.0

    def solve(self, b):
        k = len(self.cols)
        qtb = self.Q[:, :k].T @ b
        return solve_triangular(self.R[:k, :k], qtb, check_finite=False)


def nnls_solve(A, b, kkt_tol=None, max_iter=None, callback=None) -> NnlsResult:
    """Nonnegative least squares by the Lawson-Hanson active-set method.

    Parameters
    ----------
    A : array_like, shape (m, L)
    b : array_like, shape (m,)
    kkt_tol : float, optional
        Dual feasibility tolerance; default ``10 * eps * ||A^T b||_inf``.
    max_iter : int, optional
        Cap on loop passes (outer plus inner); default ``3 * L``.
    callback : callable, optional
        Called as ``callback(iteration, u, residual_norm)`` after every
        outer iteration.

    Returns
    -------
    NnlsResult
        ``converged`` is False if ``max_iter`` ran out; ``u`` is then the
        last feasible iterate.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2 or b.shape != (A.shape[0],):
        raise ValueError("shape mismatch between A and b")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
        raise ValueError("A and b must be finite")
    m, L = A.shape
    if max_iter is None:
        max_iter = 3 * L
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    if kkt_tol is None:
        kkt_tol = 10 * EPS * np.max(np.abs(A.T @ b), initial=0.0)
    col_norms = np.linalg.norm(A, axis=0)

    u = np.zeros(L)
    passive = np.zeros(L, dtype=bool)
    blocked = np.zeros(L, dtype=bool)
    qr = _PassiveQR(A)
    resid = b.copy()
    it = 0
    converged = False

    w = A.T @ resid
    while it < max_iter:
        allowed = ~passive & ~blocked & (col_norms > 0)
        if len(qr.cols) >= m:
            allowed[:] = False
        j = select_entering(w, allowed & (w > kkt_tol))
        if j is None:
            converged = True
            break
        it += 1
        qr.append(j)
        # reject columns that are numerically dependent on the passive set
        # or whose unconstrained coefficient would not be positive
        z = qr.solve(b) if qr.last_pivot() > 1e3 * EPS * col_norms[j] else None
        if z is None or z[-1] <= 0:
            qr.remove(j)
            blocked[j] = True
            continue
        passive[j] = True
        blocked[:] = False

        while True:
            cols = np.array(qr.cols)
            if np.all(z > 0):
                break
            it += 1
            xp = u[cols]
            neg = z <= 0
            ratios = xp[neg] / (xp[neg] - z[neg])
            alpha = float(np.min(ratios))
            u[cols] = xp + alpha * (z - xp)
            leaving = set(cols[neg][ratios <= alpha].tolist())
            leaving |= set(cols[u[cols] <= 0].tolist())
            for k in leaving:
                u[k] = 0.0
                passive[k] = False
                qr.remove(k)
            if not qr.cols:
                z = np.zeros(0)
                break
            z = qr.solve(b)
            if it >= max_iter:
                break
        cols = np.array(qr.cols, dtype=int)
        u[:] = 0.0
        u[cols] = np.maximum(z, 0.0)
        resid = b - A[:, cols] @ u[cols]
        w = A.T @ resid
        if callback is not None:
            callback(it, u.copy(), float(np.linalg.norm(resid)))

    support = np.flatnonzero(u > 0)
    resid = b - A[:, support] @ u[support]
    return NnlsResult(u, float(np.linalg.norm(resid)), support, it, converged)
