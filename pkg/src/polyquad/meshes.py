"""Small built-in test polyhedra.

These stand in for the kinds of domains the construction targets: a
convex sphere-like solid, a nonconvex prism and a multiply connected
shell.  ``scripts/write_meshes.py`` exports them as OFF files.
"""
import numpy as np
from scipy.spatial import ConvexHull

from polyquad.geometry import PolyMesh


def box(lo=(0.0, 0.0, 0.0), hi=(1.0, 1.0, 1.0)):
    lo, hi = np.asarray(lo, float), np.asarray(hi, float)
    verts = np.array(
        [[(hi if (k >> a) & 1 else lo)[a] for a in range(3)] for k in range(8)]
    )
    faces = (
        (0, 2, 3, 1),
        (4, 5, 7, 6),
        (0, 1, 5, 4),
        (2, 6, 7, 3),
        (0, 4, 6, 2),
        (1, 3, 7, 5),
    )
    return PolyMesh(verts, faces)


def unit_cube():
    return box()


def _convex_hull_mesh(points):
    points = np.asarray(points, dtype=float)
    hull = ConvexHull(points)
    center = points.mean(axis=0)
    faces = []
    for tri in hull.simplices:
        a, b, c = points[tri]
        if np.dot(np.cross(b - a, c - a), a - center) < 0:
            tri = tri[::-1]
        faces.append(tuple(int(i) for i in tri))
    return PolyMesh(points, tuple(faces))


def reference_tetrahedron():
    return _convex_hull_mesh([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]])


def icosahedron(center=(1.0, 1.0, 1.0), radius=1.0):
    phi = (1 + 5**0.5) / 2
    pts = []
    for s1 in (-1, 1):
        for s2 in (-1, 1):
            pts += [(0, s1, s2 * phi), (s1, s2 * phi, 0), (s2 * phi, 0, s1)]
    pts = np.array(pts, dtype=float)
    pts *= radius / np.linalg.norm(pts[0])
    return _convex_hull_mesh(pts + np.asarray(center, float))


def fibonacci_polyhedron(count=17, center=(0.0, 0.0, 0.0), radius=1.0):
    """Convex hull of a Fibonacci point set on a sphere (``2 count - 4`` faces)."""
    k = np.arange(count) + 0.5
    z = 1 - 2 * k / count
    r = np.sqrt(1 - z * z)
    t = np.pi * (3 - 5**0.5) * k
    pts = np.c_[r * np.cos(t), r * np.sin(t), z] * radius + np.asarray(center, float)
    return _convex_hull_mesh(pts)


def prism(polygon, z0=0.0, z1=1.0):
    """Right prism over a simple counterclockwise polygon."""
    poly = np.asarray(polygon, dtype=float)
    m = len(poly)
    verts = np.vstack([np.c_[poly, np.full(m, z0)], np.c_[poly, np.full(m, z1)]])
    faces = [tuple(range(m - 1, -1, -1)), tuple(range(m, 2 * m))]
    for i in range(m):
        j = (i + 1) % m
        faces.append((i, j, j + m, i + m))
    return PolyMesh(verts, tuple(faces))


def l_prism(height=1.0):
    """Nonconvex prism over an L made of three unit squares."""
    return prism([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)], 0.0, height)


def u_prism(height=1.0):
    """U-shaped prism; its vertex centroid lies in the notch."""
    return prism([(0, 0), (3, 0), (3, 3), (2, 3), (2, 1), (1, 1), (1, 3), (0, 3)], 0.0, height)


def holed_prism(outer=3.0, hole=(1.0, 2.0), height=1.0):
    """Square prism with a square through-hole (genus one, 16 faces)."""
    o = [(0, 0), (outer, 0), (outer, outer), (0, outer)]
    lo, hi = hole
    h = [(lo, lo), (hi, lo), (hi, hi), (lo, hi)]
    ring = o + h
    verts = np.array([(x, y, 0.0) for x, y in ring] + [(x, y, height) for x, y in ring])
    top = 8
    faces = []
    for k in range(4):
        k1 = (k + 1) % 4
        faces.append((top + k, top + k1, top + 4 + k1, top + 4 + k))
        faces.append((4 + k, 4 + k1, k1, k))
        faces.append((k, k1, top + k1, top + k))
        faces.append((4 + k1, 4 + k, top + 4 + k, top + 4 + k1))
    return PolyMesh(verts, tuple(faces))


def cube_with_cavity(inner=(0.25, 0.75)):
    """Unit cube with an enclosed cubic void (two disjoint shells)."""
    outer = box()
    lo, hi = inner
    cavity = box((lo,) * 3, (hi,) * 3)
    verts = np.vstack([outer.vertices, cavity.vertices])
    faces = outer.faces + tuple(tuple(8 + i for i in f[::-1]) for f in cavity.faces)
    return PolyMesh(verts, faces)


def schoenhardt(twist_deg=30.0, height=1.0):
    """Twisted triangular prism with reflex lateral edges."""
    ang = 2 * np.pi * np.arange(3) / 3
    tw = np.deg2rad(twist_deg)
    bottom = np.c_[np.cos(ang), np.sin(ang), np.zeros(3)]
    top = np.c_[np.cos(ang + tw), np.sin(ang + tw), np.full(3, height)]
    verts = np.vstack([bottom, top])
    faces = [(2, 1, 0), (3, 4, 5)]
    for i in range(3):
        j = (i + 1) % 3
        faces.append((i, j, 3 + i))
        faces.append((j, 3 + j, 3 + i))
    return PolyMesh(verts, tuple(faces))


SHIPPED = {
    "cube": unit_cube,
    "tetrahedron": reference_tetrahedron,
    "icosahedron": icosahedron,
    "l_prism": l_prism,
    "holed_prism": holed_prism,
}
