"""Chebyshev moments of a polyhedron from face integrals.

With ``d/dx Z_a1(x) = T~_a1(x)``, the divergence theorem turns every volume
moment into a sum over faces of ``n_x * Z_a1(x) T~_a2(y) T~_a3(z)``, a
polynomial of degree ``n + 1`` integrated exactly by a planar rule on the
rototranslated face.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from polyquad.basis import BasisSpec, cheb_table, z_table
from polyquad.errors import MeshError
from polyquad.geometry import PolyMesh, bounding_box, face_normal, rototranslate_face
from polyquad.polygon_quad import polygon_rule

SKIP_NORMAL = 1e-14


@dataclass(frozen=True, eq=False)
class MomentVector:
    gamma: np.ndarray
    spec: BasisSpec

    @property
    def volume(self) -> float:
        return float(self.gamma[0])

    def __len__(self):
        return len(self.gamma)


def face_boundary_rule(mesh: PolyMesh, degree: int, axis: int = 0):
    """Nodes on the surface and weights ``w_j * n_axis`` of the owning face.

    Faces whose normal has no ``axis`` component are skipped.  The returned
    ``face_ids`` array tells which face each node came from.
    """
    nodes, weights, owners = [], [], []
    for fid in range(len(mesh.faces)):
        nrm = face_normal(mesh, fid)[axis]
        if abs(nrm) < SKIP_NORMAL:
            continue
        poly, rigid = rototranslate_face(mesh, fid)
        rule = polygon_rule(poly, degree)
        pts = rigid.inverse(np.c_[rule.nodes, np.zeros(len(rule.nodes))])
        nodes.append(pts)
        weights.append(nrm * rule.weights)
        owners.append(np.full(len(pts), fid))
    if not nodes:
        raise MeshError("no face has a nonzero normal component along the axis")
    return np.vstack(nodes), np.concatenate(weights), np.concatenate(owners)


def polyhedron_moments(
    mesh: PolyMesh,
    n: int,
    box=None,
    axis: int = 0,
    reproducible_sum: bool = False,
) -> MomentVector:
    """Moments of the box-scaled product Chebyshev basis over ``mesh``.

    Parameters
    ----------
    mesh : PolyMesh
    n : int
        Total degree.
    box : BoundingBox, optional
        Defaults to the mesh's bounding box.
    axis : int
        Coordinate direction of the divergence identity.  ``0`` is the
        standard choice; other values serve as a cross-check.
    reproducible_sum : bool
        Accumulate with :func:`math.fsum` so the result does not depend on
        floating-point summation order.
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    box = bounding_box(mesh) if box is None else box
    spec = BasisSpec(n, box)
    nodes, weights, _ = face_boundary_rule(mesh, n + 1, axis)
    idx = spec.indices
    tables = []
    for ax, (a, b) in enumerate(box.intervals):
        if ax == axis:
            tables.append(z_table(n, a, b, nodes[:, ax]))
        else:
            tables.append(cheb_table(n, a, b, nodes[:, ax]))
    vals = tables[0][idx[:, 0]] * tables[1][idx[:, 1]] * tables[2][idx[:, 2]]
    if reproducible_sum:
        terms = vals * weights
        gamma = np.array([math.fsum(row) for row in terms])
    else:
        gamma = vals @ weights
    return MomentVector(gamma, spec)


def signed_volume(mesh: PolyMesh) -> float:
    return polyhedron_moments(mesh, 0).volume


def volume(mesh: PolyMesh) -> float:
    vol = signed_volume(mesh)
    if not vol > 0:
        raise MeshError(f"nonpositive volume {vol:.6g}; face orientations are inverted")
    return vol
