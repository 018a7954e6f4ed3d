"""Positive interior rules on simple planar polygons.

The polygon is cut into triangles by ear clipping and each triangle gets a
conical-product (collapsed Gauss-Jacobi x Gauss-Legendre) rule.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from polyquad.errors import MeshError
from polyquad.gauss1d import gauss_jacobi, gauss_legendre


@dataclass(frozen=True, eq=False)
class Rule2D:
    nodes: np.ndarray
    weights: np.ndarray
    degree: int


def shoelace_area(poly) -> float:
    p = np.asarray(poly, dtype=float)
    x, y = p[:, 0], p[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _drop_collinear(pts, idx, tol):
    changed = True
    while changed and len(idx) > 3:
        changed = False
        for k in range(len(idx)):
            a, b, c = pts[idx[k - 1]], pts[idx[k]], pts[idx[(k + 1) % len(idx)]]
            base = np.linalg.norm(c - a)
            if base == 0.0 or abs(_cross(a, b, c)) / base <= tol:
                del idx[k]
                changed = True
                break
    return idx


def _in_triangle(p, a, b, c):
    # closed test: points on an edge block the ear as well
    return _cross(a, b, p) >= 0 and _cross(b, c, p) >= 0 and _cross(c, a, p) >= 0


def ear_clip(poly) -> list[tuple[int, int, int]]:
    """Triangulate a simple counterclockwise polygon.

    Returns index triples into ``poly``.  Collinear vertices (within
    ``1e-12`` times the diameter) are removed beforehand, so the count is
    ``m - 2`` for the remaining ``m`` vertices.
    """
    pts = np.asarray(poly, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
        raise MeshError("polygon needs at least 3 two-dimensional vertices")
    diam = float(np.linalg.norm(np.ptp(pts, axis=0)))
    if diam == 0.0:
        raise MeshError("degenerate polygon")
    if shoelace_area(pts) <= 0:
        raise MeshError("polygon is not counterclockwise")
    idx = _drop_collinear(pts, list(range(len(pts))), 1e-12 * diam)
    tris = []
    while len(idx) > 3:
        m = len(idx)
        for k in range(m):
            i0, i1, i2 = idx[k - 1], idx[k], idx[(k + 1) % m]
            a, b, c = pts[i0], pts[i1], pts[i2]
            if _cross(a, b, c) <= 0:
                continue
            blocked = False
            for j in idx:
                if j in (i0, i1, i2):
                    continue
                q = pts[j]
                if (q == a).all() or (q == b).all() or (q == c).all():
                    continue
                if _in_triangle(q, a, b, c):
                    blocked = True
                    break
            if not blocked:
                tris.append((i0, i1, i2))
                del idx[k]
                break
        else:
            raise MeshError("no ear found; polygon is self-intersecting or degenerate")
        idx = _drop_collinear(pts, idx, 1e-12 * diam)
    if _cross(pts[idx[0]], pts[idx[1]], pts[idx[2]]) <= 0:
        raise MeshError("polygon is self-intersecting or degenerate")
    tris.append(tuple(idx))
    return tris


@lru_cache(maxsize=None)
def _triangle_rule(d: int):
    k = max(1, -(-(d + 1) // 2))
    gl = gauss_legendre(k)
    gj = gauss_jacobi(k, 1.0, 0.0)
    u, v = np.meshgrid(gl.nodes, gj.nodes, indexing="ij")
    wu, wv = np.meshgrid(gl.weights, gj.weights, indexing="ij")
    x = 0.25 * (1 + u) * (1 - v)
    y = 0.5 * (1 + v)
    nodes = np.c_[x.ravel(), y.ravel()]
    weights = (wu * wv).ravel() / 8.0
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def triangle_rule(d: int) -> Rule2D:
    """Degree-``d`` rule on the triangle (0,0), (1,0), (0,1).

    Collapsed-coordinate product of ``ceil((d+1)/2)`` Gauss-Legendre points
    with as many Gauss-Jacobi(1, 0) points; all nodes interior.
    """
    if d < 0:
        raise ValueError("degree must be nonnegative")
    nodes, weights = _triangle_rule(int(d))
    return Rule2D(nodes, weights, int(d))


def polygon_rule(poly, d: int) -> Rule2D:
    pts = np.asarray(poly, dtype=float)
    ref = triangle_rule(d)
    nodes, weights = [], []
    for i0, i1, i2 in ear_clip(pts):
        a, b, c = pts[i0], pts[i1], pts[i2]
        jac = np.column_stack([b - a, c - a])
        area2 = abs(np.linalg.det(jac))
        nodes.append(a + ref.nodes @ jac.T)
        weights.append(ref.weights * area2)
    return Rule2D(np.vstack(nodes), np.concatenate(weights), int(d))
