"""Polyhedral meshes, face frames and point location.

A :class:`PolyMesh` stores vertices and polygonal faces whose vertex cycles
run counterclockwise when seen from outside the solid.  The helpers here
compute outward normals, move a face onto the ``z = 0`` plane by a rigid
motion, and classify points with the generalized winding number.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from polyquad.errors import MeshError, OFFParseError

PLANE_RTOL = 1e-10
BOUNDARY_RTOL = 1e-12


@dataclass(frozen=True)
class BoundingBox:
    a1: float
    b1: float
    a2: float
    b2: float
    a3: float
    b3: float

    def __post_init__(self):
        for a, b in self.intervals:
            if not (np.isfinite(a) and np.isfinite(b)):
                raise MeshError("bounding box has non-finite bounds")
            if not a < b:
                raise MeshError(f"degenerate bounding box interval [{a}, {b}]")

    @property
    def intervals(self):
        return ((self.a1, self.b1), (self.a2, self.b2), (self.a3, self.b3))

    @property
    def lower(self):
        return np.array([self.a1, self.a2, self.a3])

    @property
    def upper(self):
        return np.array([self.b1, self.b2, self.b3])

    @property
    def volume(self):
        return float(np.prod(self.upper - self.lower))

    def as_tuple(self):
        return (self.a1, self.b1, self.a2, self.b2, self.a3, self.b3)

    @classmethod
    def from_points(cls, points):
        points = np.asarray(points, dtype=float).reshape(-1, 3)
        if len(points) == 0:
            raise MeshError("cannot bound an empty point set")
        lo, hi = points.min(axis=0), points.max(axis=0)
        return cls(lo[0], hi[0], lo[1], hi[1], lo[2], hi[2])


@dataclass(frozen=True)
class RigidMap:
    """Affine isometry ``p -> rotation @ p + translation``."""

    rotation: np.ndarray
    translation: np.ndarray

    def apply(self, points):
        points = np.asarray(points, dtype=float)
        return points @ self.rotation.T + self.translation

    def inverse(self, points):
        points = np.asarray(points, dtype=float)
        return (points - self.translation) @ self.rotation


@dataclass(frozen=True, eq=False)
class PolyMesh:
    """Closed polyhedral surface with outward counterclockwise faces.

    Construction validates index ranges, face planarity and watertightness
    (each undirected edge used by exactly two faces, once per direction).
    """

    vertices: np.ndarray
    faces: tuple = field(default=())

    def __post_init__(self):
        verts = np.array(self.vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[1] != 3 or len(verts) == 0:
            raise MeshError("vertices must be a nonempty (V, 3) array")
        if not np.all(np.isfinite(verts)):
            raise MeshError("vertex coordinates must be finite")
        verts.setflags(write=False)
        faces = tuple(tuple(int(i) for i in f) for f in self.faces)
        if not faces:
            raise MeshError("mesh has no faces")
        for k, f in enumerate(faces):
            if len(f) < 3:
                raise MeshError(f"face {k} has fewer than 3 vertices")
            if min(f) < 0 or max(f) >= len(verts):
                raise MeshError(f"face {k} has a vertex index out of range")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "faces", faces)
        bad = open_edges(faces)
        if bad:
            shown = ", ".join(f"{i}-{j}" for i, j in bad[:20])
            more = "" if len(bad) <= 20 else f" (+{len(bad) - 20} more)"
            raise MeshError(f"mesh is not watertight; offending edges: {shown}{more}")
        for k in range(len(faces)):
            face_normal(self, k)

    @cached_property
    def diameter(self):
        return float(np.linalg.norm(np.ptp(self.vertices, axis=0)))

    @property
    def tol_plane(self):
        return PLANE_RTOL * self.diameter

    @property
    def tol_boundary(self):
        return BOUNDARY_RTOL * self.diameter

    @cached_property
    def triangles(self):
        """Fan triangulation of every face as a ``(T, 3, 3)`` array."""
        tris = []
        for f in self.faces:
            for j in range(1, len(f) - 1):
                tris.append((f[0], f[j], f[j + 1]))
        return self.vertices[np.array(tris)]

    def face_points(self, face_id):
        return self.vertices[list(self.faces[face_id])]

    def reversed(self):
        """The same surface with every face orientation flipped."""
        return PolyMesh(self.vertices, tuple(f[::-1] for f in self.faces))

    def translated(self, shift):
        return PolyMesh(self.vertices + np.asarray(shift, dtype=float), self.faces)


def open_edges(faces):
    """Edges violating the closed, consistently oriented surface condition."""
    directed = Counter()
    for f in faces:
        for i, j in zip(f, f[1:] + f[:1]):
            directed[(i, j)] += 1
    bad = set()
    for (i, j), count in directed.items():
        if count != 1 or directed.get((j, i), 0) != 1:
            bad.add((min(i, j), max(i, j)))
    return sorted(bad)


def bounding_box(mesh: PolyMesh) -> BoundingBox:
    return BoundingBox.from_points(mesh.vertices)


def _newell(points):
    nxt = np.roll(points, -1, axis=0)
    return np.cross(points, nxt).sum(axis=0)


def face_normal(mesh: PolyMesh, face_id: int) -> np.ndarray:
    """Outward unit normal of a face by Newell's formula.

    Raises :class:`MeshError` for faces with (numerically) zero area or
    vertices farther than ``mesh.tol_plane`` from the fitted plane.
    """
    pts = mesh.face_points(face_id)
    area_vec = _newell(pts - pts.mean(axis=0))
    norm = np.linalg.norm(area_vec)
    if norm <= 1e-14 * mesh.diameter**2:
        raise MeshError(f"face {face_id} is degenerate (zero area)")
    normal = area_vec / norm
    offsets = np.abs((pts - pts.mean(axis=0)) @ normal)
    if offsets.max() > mesh.tol_plane:
        raise MeshError(
            f"face {face_id} is not planar (max offset {offsets.max():.3e})"
        )
    return normal


def signed_area_indicator(poly) -> float:
    """Closed-loop sum of ``(x[j+1] - x[j]) * (y[j+1] + y[j])``.

    Negative for counterclockwise polygons; equals minus twice the
    shoelace signed area.
    """
    pts = np.asarray(poly, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    x1, y1 = np.roll(x, -1), np.roll(y, -1)
    return float(np.sum((x1 - x) * (y1 + y)))


def _rotation_between(u, v):
    """Rotation taking unit vector ``u`` onto unit vector ``v`` (``u != -v``)."""
    w = np.cross(u, v)
    c = float(np.dot(u, v))
    if np.linalg.norm(w) < 1e-15 and c > 0:
        return np.eye(3)
    K = np.array([[0.0, -w[2], w[1]], [w[2], 0.0, -w[0]], [-w[1], w[0], 0.0]])
    return np.eye(3) + K + K @ K / (1.0 + c)


_FLIP_X = np.diag([1.0, -1.0, -1.0])


def rototranslate_face(mesh: PolyMesh, face_id: int):
    """Move a face rigidly onto the plane ``z = 0`` with CCW orientation.

    The face plane is first rotated parallel to the xy-plane (by the
    smallest rotation taking the normal to ``+z`` or ``-z``) and shifted
    vertically.  If the image is clockwise, a half turn about the x-axis is
    composed in.  Returns the ``(m, 2)`` planar polygon and the map.
    """
    pts = mesh.face_points(face_id)
    normal = face_normal(mesh, face_id)
    target = np.array([0.0, 0.0, 1.0 if normal[2] >= 0 else -1.0])
    rot = _rotation_between(normal, target)
    rotated = pts @ rot.T
    shift = np.array([0.0, 0.0, -rotated[:, 2].mean()])
    flat = rotated + shift
    if signed_area_indicator(flat[:, :2]) > 0:
        rot = _FLIP_X @ rot
        shift = _FLIP_X @ shift
        flat = flat @ _FLIP_X.T
    return flat[:, :2].copy(), RigidMap(rot, shift)


def _segment_distance(p, a, b):
    ab = b - a
    t = np.clip(((p - a) @ ab) / (ab @ ab), 0.0, 1.0)
    return np.linalg.norm(p - (a + t[:, None] * ab), axis=1)


def _triangle_distance(p, a, b, c):
    """Euclidean distance from points ``p`` (M, 3) to triangle ``abc``."""
    n = np.cross(b - a, c - a)
    n2 = n @ n
    d = p - a
    # barycentric coordinates of the orthogonal projection
    v = np.cross(d, c - a) @ n / n2
    w = np.cross(b - a, d) @ n / n2
    inside = (v >= 0) & (w >= 0) & (v + w <= 1)
    plane = np.abs(d @ n) / np.sqrt(n2)
    edge = np.minimum(
        np.minimum(_segment_distance(p, a, b), _segment_distance(p, b, c)),
        _segment_distance(p, c, a),
    )
    return np.where(inside, plane, edge)


def winding_number(mesh: PolyMesh, points) -> np.ndarray:
    """Generalized winding number of the surface about each point.

    Sums signed solid angles of the fan-triangulated faces (Van Oosterom and
    Strackee formula) divided by ``4 pi``.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    total = np.zeros(len(pts))
    for A, B, C in mesh.triangles:
        a, b, c = A - pts, B - pts, C - pts
        la = np.linalg.norm(a, axis=1)
        lb = np.linalg.norm(b, axis=1)
        lc = np.linalg.norm(c, axis=1)
        num = np.einsum("ij,ij->i", a, np.cross(b, c))
        den = (
            la * lb * lc
            + np.einsum("ij,ij->i", a, b) * lc
            + np.einsum("ij,ij->i", a, c) * lb
            + np.einsum("ij,ij->i", b, c) * la
        )
        total += 2.0 * np.arctan2(num, den)
    return total / (4.0 * np.pi)


def boundary_mask(mesh: PolyMesh, points, tol=None) -> np.ndarray:
    """Points within ``tol`` (default ``mesh.tol_boundary``) of the surface."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    tol = mesh.tol_boundary if tol is None else tol
    near = np.zeros(len(pts), dtype=bool)
    for A, B, C in mesh.triangles:
        n = np.cross(B - A, C - A)
        area2 = np.linalg.norm(n)
        if area2 == 0.0:
            continue  # collinear fan sliver of a nonconvex face
        n /= area2
        cand = np.flatnonzero(np.abs((pts - A) @ n) <= tol)
        if len(cand):
            near[cand] |= _triangle_distance(pts[cand], A, B, C) <= tol
    return near


def contains(mesh: PolyMesh, points):
    """Strict interior test.

    Accepts one point (returns ``bool``) or an ``(M, 3)`` array (returns a
    boolean array).  Points within ``mesh.tol_boundary`` of the surface are
    treated as not interior.
    """
    arr = np.asarray(points, dtype=float)
    single = arr.ndim == 1
    pts = np.atleast_2d(arr)
    inside = winding_number(mesh, pts) > 0.5
    if inside.any():
        idx = np.flatnonzero(inside)
        inside[idx[boundary_mask(mesh, pts[idx])]] = False
    return bool(inside[0]) if single else inside


def read_off(source) -> PolyMesh:
    """Parse an ASCII OFF mesh from a path or an iterable of lines.

    Faces are 0-based and counterclockwise w.r.t. the outward normal.
    Geometry problems (open edges, nonplanar faces) raise
    :class:`MeshError`; format problems raise :class:`OFFParseError`.
    """
    if isinstance(source, (str, Path)) and "\n" not in str(source):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise OFFParseError(f"cannot read {source}: {exc}") from exc
    elif isinstance(source, str):
        text = source
    else:
        text = "".join(source)
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines or not lines[0].startswith("OFF"):
        raise OFFParseError("missing OFF header")
    head = lines[0][3:].split()
    pos = 1
    if not head:
        if len(lines) < 2:
            raise OFFParseError("missing counts line")
        head = lines[1].split()
        pos = 2
    try:
        nv, nf = int(head[0]), int(head[1])
    except (IndexError, ValueError) as exc:
        raise OFFParseError(f"bad counts line: {' '.join(head)!r}") from exc
    if len(lines) < pos + nv + nf:
        raise OFFParseError("file ends before all vertices and faces are read")
    try:
        verts = [[float(t) for t in lines[pos + i].split()[:3]] for i in range(nv)]
    except ValueError as exc:
        raise OFFParseError(f"bad vertex line: {exc}") from exc
    if any(len(v) != 3 for v in verts):
        raise OFFParseError("vertex line with fewer than 3 coordinates")
    faces = []
    for i in range(nf):
        toks = lines[pos + nv + i].split()
        try:
            k = int(toks[0])
            idx = [int(t) for t in toks[1 : 1 + k]]
        except (IndexError, ValueError) as exc:
            raise OFFParseError(f"bad face line {i}: {lines[pos + nv + i]!r}") from exc
        if len(idx) != k:
            raise OFFParseError(f"face line {i} lists fewer than {k} indices")
        faces.append(idx)
    return PolyMesh(np.array(verts, dtype=float).reshape(-1, 3), tuple(map(tuple, faces)))


def format_off(mesh: PolyMesh) -> str:
    out = ["OFF", f"{len(mesh.vertices)} {len(mesh.faces)} 0"]
    out += [" ".join(f"{c:.17g}" for c in v) for v in mesh.vertices]
    out += [" ".join(map(str, (len(f),) + f)) for f in mesh.faces]
    return "\n".join(out) + "\n"


def write_off(mesh: PolyMesh, path) -> None:
    Path(path).write_text(format_off(mesh))
