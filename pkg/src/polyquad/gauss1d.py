"""Gauss-Legendre and Gauss-Jacobi rules on [-1, 1] by Golub-Welsch."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gamma

import numpy as np
from scipy.linalg import eigh_tridiagonal


@dataclass(frozen=True, eq=False)
class Rule1D:
    nodes: np.ndarray
    weights: np.ndarray
    alpha: float = 0.0
    beta: float = 0.0


def jacobi_recurrence(k: int, alpha: float, beta: float):
    """Monic recurrence coefficients ``(a_0..a_{k-1}, b_1..b_{k-1})`` and
    the total mass ``mu_0`` of the weight ``(1-x)^alpha (1+x)^beta``."""
    ab = alpha + beta
    j = np.arange(k, dtype=float)
    a = np.empty(k)
    a[0] = (beta - alpha) / (ab + 2.0)
    if k > 1:
        jj = j[1:]
        s = 2.0 * jj + ab
        a[1:] = (beta**2 - alpha**2) / (s * (s + 2.0))
    b = np.empty(max(k - 1, 0))
    if k > 1:
        b[0] = 4.0 * (1 + alpha) * (1 + beta) / ((2.0 + ab) ** 2 * (3.0 + ab))
        jj = j[2:]
        s = 2.0 * jj + ab
        b[1:] = 4.0 * jj * (jj + alpha) * (jj + beta) * (jj + ab) / (s**2 * (s + 1) * (s - 1))
    mu0 = 2.0 ** (ab + 1) * gamma(alpha + 1) * gamma(beta + 1) / gamma(ab + 2)
    return a, b, mu0


def _monic_value(x, a, b, k):
    """Value and derivative of the degree-``k`` monic orthogonal polynomial."""
    p0, p1 = np.zeros_like(x), np.ones_like(x)
    d0, d1 = np.zeros_like(x), np.zeros_like(x)
    for j in range(k):
        bj = b[j - 1] if j >= 1 else 0.0
        p0, p1 = p1, (x - a[j]) * p1 - bj * p0
        d0, d1 = d1, p0 + (x - a[j]) * d1 - bj * d0
    return p1, d1


def _christoffel(x, a, b, mu0, k):
    """Weights ``1 / sum_j q_j(x)^2`` over the orthonormal polynomials.

    The sum is carried with ``q_0 = 1`` and rescaled by ``mu0`` at the end.
    """
    q0 = np.zeros_like(x)
    q1 = np.ones_like(x)
    acc = q1 * q1
    sb = np.sqrt(b)
    for j in range(k - 1):
        prev = sb[j - 1] if j >= 1 else 0.0
        q0, q1 = q1, ((x - a[j]) * q1 - prev * q0) / sb[j]
        acc += q1 * q1
    return mu0 / acc


@lru_cache(maxsize=None)
def _gauss(k: int, alpha: float, beta: float):
    a, b, mu0 = jacobi_recurrence(k, alpha, beta)
    if k == 1:
        x = a.copy()
    else:
        x = eigh_tridiagonal(a, np.sqrt(b))[0]
        # one Newton polish on the recurrence; eigenvalues are only
        # backward stable, the step recovers the last couple of digits
        p, dp = _monic_value(x, a, b, k)
        x = x - p / dp
    w = _christoffel(x, a, b, mu0, k)
    order = np.argsort(x)
    x, w = x[order], w[order]
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_jacobi(k: int, alpha: float, beta: float) -> Rule1D:
    """``k``-point rule for the weight ``(1-x)^alpha (1+x)^beta`` on [-1, 1].

    Exact for polynomials of degree ``<= 2k - 1`` against that weight.
    """
    if k < 1:
        raise ValueError("number of points must be positive")
    if not (alpha > -1 and beta > -1):
        raise ValueError("Jacobi parameters must exceed -1")
    x, w = _gauss(int(k), float(alpha), float(beta))
    return Rule1D(x, w, float(alpha), float(beta))


def gauss_legendre(k: int) -> Rule1D:
    return gauss_jacobi(k, 0.0, 0.0)
