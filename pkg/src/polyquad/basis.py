"""Product Chebyshev basis of total degree ``n`` scaled to a bounding box."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from polyquad.geometry import BoundingBox


def dimension(n: int) -> int:
    """Dimension of trivariate polynomials of total degree at most ``n``."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    return (n + 1) * (n + 2) * (n + 3) // 6


def multi_indices(n: int) -> list[tuple[int, int, int]]:
    """Exponent triples with ``sum <= n``, graded then lexicographic."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    out = []
    for d in range(n + 1):
        for a1 in range(d + 1):
            for a2 in range(d - a1 + 1):
                out.append((a1, a2, d - a1 - a2))
    return out


def _to_unit(a, b, t):
    return (2.0 / (b - a)) * (np.asarray(t, dtype=float) - 0.5 * (a + b))


def cheb_table(m_max: int, a: float, b: float, t) -> np.ndarray:
    """Rows ``T~_0 .. T~_{m_max}`` on ``[a, b]`` evaluated at ``t``.

    Uses the three-term recurrence; the result has shape
    ``(m_max + 1,) + shape(t)``.
    """
    s = _to_unit(a, b, t)
    out = np.empty((m_max + 1,) + s.shape)
    out[0] = 1.0
    if m_max >= 1:
        out[1] = s
    for m in range(2, m_max + 1):
        out[m] = 2.0 * s * out[m - 1] - out[m - 2]
    return out


def scaled_cheb(m: int, a: float, b: float, t):
    val = cheb_table(m, a, b, t)[m]
    return float(val) if np.ndim(val) == 0 else val


def z_table(m_max: int, a: float, b: float, x) -> np.ndarray:
    """Antiderivatives ``Z_0 .. Z_{m_max}`` of the scaled Chebyshev family.

    ``d/dx Z_m = T~_m`` with the integration constant taken as zero.
    """
    T = cheb_table(m_max + 1, a, b, x)
    s = T[1]
    h = b - a
    out = np.empty((m_max + 1,) + s.shape)
    out[0] = 0.5 * h * s
    if m_max >= 1:
        out[1] = 0.25 * h * s * s
    for m in range(2, m_max + 1):
        out[m] = (0.5 * h) * 0.5 * (T[m + 1] / (m + 1) - T[m - 1] / (m - 1))
    return out


def cheb_antiderivative_Z(m: int, a: float, b: float, x):
    """``Z_m`` on ``[a, b]``; see :func:`z_table`."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    val = z_table(m, a, b, x)[m]
    return float(val) if np.ndim(val) == 0 else val


@dataclass(frozen=True, eq=False)
class BasisSpec:
    degree: int
    box: BoundingBox

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")

    @cached_property
    def indices(self) -> np.ndarray:
        return np.array(multi_indices(self.degree), dtype=int).reshape(-1, 3)

    @property
    def size(self) -> int:
        return dimension(self.degree)


def vandermonde(points, spec: BasisSpec) -> np.ndarray:
    """``V[l, k] = phi_k(points[l])`` for the box-scaled product basis."""
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    n = spec.degree
    tables = [cheb_table(n, a, b, pts[:, i]) for i, (a, b) in enumerate(spec.box.intervals)]
    idx = spec.indices
    return (tables[0][idx[:, 0]] * tables[1][idx[:, 1]] * tables[2][idx[:, 2]]).T
