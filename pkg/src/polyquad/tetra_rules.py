"""Tetrahedra-based rules used as a reference and for comparison.

A star-shaped polyhedron is fanned into tetrahedra from a center point,
each tetrahedron receives a mapped Stroud conical-product rule, and the
resulting high-cardinality rule can be compressed by NNLS to at most
``dimension(n)`` of its own nodes.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from polyquad.basis import BasisSpec, vandermonde
from polyquad.errors import ConvergenceError, MeshError
from polyquad.gauss1d import gauss_jacobi, gauss_legendre
from polyquad.geometry import BoundingBox, PolyMesh, rototranslate_face
from polyquad.moments import volume
from polyquad.nnls import nnls_solve
from polyquad.polygon_quad import ear_clip
from polyquad.tchakaloff import QuadratureRule

REFERENCE_SIMPLEX = np.array([[1.0, 0, 0], [0, 1.0, 0], [0, 0, 0], [0, 0, 1.0]])


@dataclass(frozen=True, eq=False)
class Tetrahedralization:
    """Tetrahedra as a ``(T, 4, 3)`` array of vertex coordinates."""

    tets: np.ndarray

    def __post_init__(self):
        tets = np.asarray(self.tets, dtype=float).reshape(-1, 4, 3)
        object.__setattr__(self, "tets", tets)
        if np.any(self.volumes <= 0):
            raise MeshError("tetrahedralization contains non-positive volumes")

    @property
    def volumes(self):
        return np.array([_signed_volume(*t) for t in self.tets])

    def __len__(self):
        return len(self.tets)

    def to_csv(self) -> str:
        head = "ax,ay,az,bx,by,bz,cx,cy,cz,dx,dy,dz"
        rows = [",".join(f"{v:.17g}" for v in t.ravel()) for t in self.tets]
        return "\n".join([head] + rows) + "\n"


def _signed_volume(a, b, c, d):
    return float(np.linalg.det(np.column_stack([a - d, b - d, c - d]))) / 6.0


@lru_cache(maxsize=None)
def _stroud(n: int):
    k = max(1, -(-(n + 1) // 2))
    gl = gauss_legendre(k)
    j1 = gauss_jacobi(k, 1.0, 0.0)
    j2 = gauss_jacobi(k, 2.0, 0.0)
    u, v, w = np.meshgrid(gl.nodes, j1.nodes, j2.nodes, indexing="ij")
    wu, wv, ww = np.meshgrid(gl.weights, j1.weights, j2.weights, indexing="ij")
    z = 0.5 * (1 + w)
    y = 0.25 * (1 + v) * (1 - w)
    x = 0.125 * (1 + u) * (1 - v) * (1 - w)
    nodes = np.c_[x.ravel(), y.ravel(), z.ravel()]
    weights = (wu * wv * ww).ravel() / 64.0
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def stroud_simplex_rule(n: int) -> QuadratureRule:
    """Conical-product rule of degree ``n`` on the unit simplex.

    ``ceil((n+1)/2)**3`` interior nodes from Gauss-Legendre, Gauss-Jacobi
    (1, 0) and Gauss-Jacobi (2, 0) factors in collapsed coordinates.
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    nodes, weights = _stroud(int(n))
    return QuadratureRule(nodes.copy(), weights.copy(), int(n))


def map_to_tetrahedron(rule: QuadratureRule, A, B, C, D) -> QuadratureRule:
    """Push a reference-simplex rule to tetrahedron ``ABCD``.

    Reference vertices (1,0,0), (0,1,0), (0,0,0), (0,0,1) go to A, B, C, D.
    """
    A, B, C, D = (np.asarray(p, dtype=float) for p in (A, B, C, D))
    vol = abs(_signed_volume(A, B, C, D))
    if vol <= 1e-15 * max(1.0, np.ptp(np.array([A, B, C, D]), axis=0).max() ** 3):
        raise MeshError("degenerate tetrahedron")
    x, y, z = rule.nodes.T
    lam3 = 1.0 - x - y - z
    nodes = np.outer(x, A) + np.outer(y, B) + np.outer(lam3, C) + np.outer(z, D)
    return QuadratureRule(nodes, rule.weights * (6.0 * vol), rule.degree)


def _face_triangles_3d(mesh, fid):
    poly, _ = rototranslate_face(mesh, fid)
    verts = mesh.face_points(fid)
    return [(verts[i], verts[j], verts[k]) for i, j, k in ear_clip(poly)]


def fan_tetrahedralize(mesh: PolyMesh, center=None, rtol=1e-8) -> Tetrahedralization:
    """Cone every face triangle to ``center`` (default: vertex centroid).

    Only valid when the mesh is star-shaped with respect to ``center``;
    this is checked by comparing the summed absolute tetrahedron volumes
    with the mesh volume.
    """
    center = mesh.vertices.mean(axis=0) if center is None else np.asarray(center, float)
    vol = volume(mesh)
    tets, total = [], 0.0
    for fid in range(len(mesh.faces)):
        for a, b, c in _face_triangles_3d(mesh, fid):
            # outward CCW triangle with the center behind it: positive
            v = _signed_volume(a, b, c, center)
            total += abs(v)
            if v > 1e-14 * vol:
                tets.append((a, b, c, center))
    if abs(total - vol) > rtol * vol:
        raise MeshError(
            f"fan volumes sum to {total:.12g}, mesh volume is {vol:.12g}; "
            "mesh is not star-shaped with respect to the center"
        )
    return Tetrahedralization(np.array(tets))


def tetra_based_rule(tets: Tetrahedralization, n: int) -> QuadratureRule:
    ref = stroud_simplex_rule(n)
    parts = [map_to_tetrahedron(ref, *t) for t in tets.tets]
    return QuadratureRule(
        np.vstack([p.nodes for p in parts]),
        np.concatenate([p.weights for p in parts]),
        n,
    )


def compress_rule(rule: QuadratureRule, n: int, box: BoundingBox | None = None,
                  eps: float = 1e-14) -> QuadratureRule:
    """Re-weight a subset of at most ``dimension(n)`` of the rule's nodes.

    The moments are those of the input rule itself, so the output matches
    it on every polynomial of degree ``<= n``.
    """
    box = BoundingBox.from_points(rule.nodes) if box is None else box
    spec = BasisSpec(n, box)
    V = vandermonde(rule.nodes, spec)
    gamma = V.T @ rule.weights
    sol = nnls_solve(V.T, gamma, kkt_tol=0.0)
    keep = sol.u > 0
    res = float(np.linalg.norm(V[keep].T @ sol.u[keep] - gamma) / np.linalg.norm(gamma))
    if res >= eps:
        raise ConvergenceError(
            f"compression residual {res:.3e} above eps={eps:g}",
            best_residual=res,
            candidates=len(rule.nodes),
        )
    return QuadratureRule(rule.nodes[keep], sol.u[keep], n, res)
