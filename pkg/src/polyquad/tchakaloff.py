"""Positive interior rules extracted from dense interior point sets.

Candidates are drawn in the bounding box, filtered by the interior test,
and a sparse nonnegative solution of ``V^T u = gamma`` selects the nodes.
The candidate set grows geometrically until the moment residual drops
below tolerance.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from polyquad.basis import BasisSpec, dimension, vandermonde
from polyquad.errors import ConvergenceError
from polyquad.geometry import BoundingBox, PolyMesh, bounding_box, contains
from polyquad.moments import polyhedron_moments
from polyquad.nnls import nnls_solve

HALTON_BASES = (2, 3, 5)


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    degree: int
    residual: float = float("nan")

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float).reshape(-1, 3)
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if len(nodes) != len(weights):
            raise ValueError("nodes and weights differ in length")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def cardinality(self) -> int:
        return len(self.weights)

    def __len__(self):
        return self.cardinality


@dataclass
class TchakaloffConfig:
    eps: float = 1e-14
    theta: float = 4.0
    k0: int | None = None
    k0_factor: float = 8.0
    source: str = "halton"
    seed: int = 0
    max_refinements: int = 12
    max_candidates: int = 2_000_000

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if not self.theta > 1:
            raise ValueError("theta must exceed 1")
        if self.source not in ("halton", "random"):
            raise ValueError(f"unknown candidate source {self.source!r}")

    def initial_count(self, n, box_volume, volume):
        if self.k0 is not None:
            k0 = int(self.k0)
        else:
            # the relative slack keeps volume roundoff from adding a point
            k0 = math.ceil(self.k0_factor * dimension(n) * box_volume / volume * (1 - 1e-12))
        if k0 < dimension(n):
            raise ValueError("initial candidate count must be at least N")
        return k0


@dataclass
class BuildReport:
    """Per-refinement trace of :func:`tetra_free_rule`."""

    candidates: list = field(default_factory=list)
    interior: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    timings: dict = field(
        default_factory=lambda: {"moments": 0.0, "candidates": 0.0, "vandermonde": 0.0, "nnls": 0.0}
    )
    total_time: float = 0.0


def radical_inverse(index, base: int) -> np.ndarray:
    idx = np.array(index, dtype=np.int64)
    out = np.zeros(idx.shape)
    f = 1.0 / base
    while np.any(idx > 0):
        out += f * (idx % base)
        idx //= base
        f /= base
    return out


def halton(count: int, skip: int = 0) -> np.ndarray:
    """Halton points number ``skip + 1 .. skip + count`` in ``[0, 1]^3``."""
    if count < 0 or skip < 0:
        raise ValueError("count and skip must be nonnegative")
    idx = np.arange(skip + 1, skip + count + 1, dtype=np.int64)
    return np.column_stack([radical_inverse(idx, p) for p in HALTON_BASES]).reshape(-1, 3)


class CandidateStream:
    """Growing prefix of box points; earlier points never change."""

    def __init__(self, box: BoundingBox, source="halton", seed=0):
        self.box = box
        self.source = source
        self.generated = 0
        self._rng = np.random.default_rng(seed) if source == "random" else None

    def take(self, count):
        if self.source == "halton":
            unit = halton(count, self.generated)
        else:
            unit = self._rng.random((count, 3))
        self.generated += count
        return self.box.lower + unit * (self.box.upper - self.box.lower)


def candidate_points(mesh: PolyMesh, K: int, cfg: TchakaloffConfig | None = None, box=None):
    """Interior points among the first ``K`` box samples."""
    cfg = TchakaloffConfig() if cfg is None else cfg
    if K < 1:
        raise ValueError("K must be positive")
    box = bounding_box(mesh) if box is None else box
    pts = CandidateStream(box, cfg.source, cfg.seed).take(K)
    inside = pts[contains(mesh, pts)]
    if len(inside) == 0:
        raise ValueError("no candidate point falls inside the mesh")
    return inside


def _relative_residual(V, u, gamma):
    return float(np.linalg.norm(V.T @ u - gamma) / np.linalg.norm(gamma))


def tetra_free_rule(mesh: PolyMesh, n: int, cfg: TchakaloffConfig | None = None,
                    return_report=False):
    """Degree-``n`` positive interior rule on ``mesh`` without tetrahedra.

    Moments are computed once; each refinement extends the candidate
    stream to ``ceil(theta**t * K0)`` points, keeps the interior ones and
    solves the NNLS moment-matching problem.  The loop stops once
    ``||V^T u - gamma|| < eps * ||gamma||``.

    Raises :class:`ConvergenceError` after ``max_refinements`` failed
    refinements.
    """
    cfg = TchakaloffConfig() if cfg is None else cfg
    if n < 0:
        raise ValueError("degree must be nonnegative")
    t_start = time.perf_counter()
    report = BuildReport()
    box = bounding_box(mesh)

    t0 = time.perf_counter()
    mom = polyhedron_moments(mesh, n, box)
    report.timings["moments"] += time.perf_counter() - t0
    gamma, spec = mom.gamma, mom.spec
    vol = mom.volume

    stream = CandidateStream(box, cfg.source, cfg.seed)
    k0 = cfg.initial_count(n, box.volume, vol)
    interior = np.zeros((0, 3))
    Vblocks = []
    best = (math.inf, None, None)
    for t in range(cfg.max_refinements + 1):
        K = math.ceil(cfg.theta**t * k0)
        if K > cfg.max_candidates:
            break
        t0 = time.perf_counter()
        fresh = stream.take(K - stream.generated)
        fresh = fresh[contains(mesh, fresh)]
        interior = np.vstack([interior, fresh])
        report.timings["candidates"] += time.perf_counter() - t0

        t0 = time.perf_counter()
        Vblocks.append(vandermonde(fresh, spec))
        V = np.vstack(Vblocks)
        report.timings["vandermonde"] += time.perf_counter() - t0

        report.candidates.append(K)
        report.interior.append(len(interior))
        if len(interior) == 0:
            report.residuals.append(math.inf)
            continue
        t0 = time.perf_counter()
        # dual tolerance 0: on ill-conditioned bases the gradient sinks below
        # any eps-scaled threshold long before the residual does
        sol = nnls_solve(V.T, gamma, kkt_tol=0.0)
        u = sol.u
        # drop numerically-zero support members before judging the residual
        u[u < 1e-15 * vol] = 0.0
        res = _relative_residual(V, u, gamma)
        report.timings["nnls"] += time.perf_counter() - t0
        report.residuals.append(res)
        if res < best[0]:
            best = (res, u, interior)
        if res < cfg.eps:
            keep = u > 0
            rule = QuadratureRule(interior[keep], u[keep], n, res)
            report.total_time = time.perf_counter() - t_start
            return (rule, report) if return_report else rule
    last = report.candidates[-1] if report.candidates else 0
    raise ConvergenceError(
        f"residual {best[0]:.3e} still above eps={cfg.eps:g} after "
        f"{len(report.candidates)} candidate sets (last {last} points)",
        best_residual=best[0],
        candidates=last,
    )


def moment_residual(rule: QuadratureRule, gamma, spec: BasisSpec) -> float:
    V = vandermonde(rule.nodes, spec)
    return _relative_residual(V, rule.weights, gamma)


def verify_exactness(rule: QuadratureRule, mesh: PolyMesh, degree=None) -> float:
    """Relative moment residual ``||V^T w - gamma|| / ||gamma||``."""
    degree = rule.degree if degree is None else degree
    mom = polyhedron_moments(mesh, degree)
    return moment_residual(rule, mom.gamma, mom.spec)


def integrate(rule: QuadratureRule, f) -> float:
    """``sum_j w_j f(x_j, y_j, z_j)``; ``f`` is called on coordinate arrays."""
    x, y, z = rule.nodes.T
    vals = np.broadcast_to(np.asarray(f(x, y, z), dtype=float), x.shape)
    if not np.all(np.isfinite(vals)):
        raise ValueError("integrand is not finite at every node")
    return float(vals @ rule.weights)


# rule files ------------------------------------------------------------

def _num(v):
    return f"{v:.17g}"


def format_rule_csv(rule: QuadratureRule) -> str:
    lines = [
        f"# degree={rule.degree}",
        f"# cardinality={rule.cardinality}",
        f"# residual={_num(rule.residual)}",
        "x,y,z,w",
    ]
    for p, w in zip(rule.nodes, rule.weights):
        lines.append(",".join(_num(v) for v in (*p, w)))
    return "\n".join(lines) + "\n"


def format_rule_json(rule: QuadratureRule) -> str:
    doc = {
        "degree": rule.degree,
        "cardinality": rule.cardinality,
        "residual": None if math.isnan(rule.residual) else rule.residual,
        "nodes": rule.nodes.tolist(),
        "weights": rule.weights.tolist(),
    }
    return json.dumps(doc, indent=1) + "\n"


def parse_rule(text: str) -> QuadratureRule:
    """Read a rule written by :func:`format_rule_csv` or :func:`format_rule_json`."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(stripped)
        res = doc.get("residual")
        return QuadratureRule(
            np.array(doc["nodes"], dtype=float).reshape(-1, 3),
            np.array(doc["weights"], dtype=float),
            int(doc["degree"]),
            float("nan") if res is None else float(res),
        )
    meta, rows = {}, []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, val = line[1:].partition("=")
            meta[key.strip()] = val.strip()
        elif line.startswith("x"):
            continue
        else:
            rows.append([float(v) for v in line.split(",")])
    arr = np.array(rows, dtype=float).reshape(-1, 4)
    return QuadratureRule(
        arr[:, :3], arr[:, 3], int(meta.get("degree", -1)), float(meta.get("residual", "nan"))
    )


def save_rule(rule: QuadratureRule, path, fmt=None) -> None:
    path = Path(path)
    fmt = fmt or ("json" if path.suffix == ".json" else "csv")
    text = format_rule_json(rule) if fmt == "json" else format_rule_csv(rule)
    path.write_text(text)


def load_rule(path) -> QuadratureRule:
    return parse_rule(Path(path).read_text())
