"""Numerical experiments: polynomial exactness trials, smooth and nonsmooth
test functions, and per-phase timings."""
from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field
from math import factorial

import numpy as np

from polyquad.basis import dimension
from polyquad.errors import MeshError
from polyquad.geometry import PolyMesh, bounding_box
from polyquad.moments import volume
from polyquad.tchakaloff import TchakaloffConfig, integrate, tetra_free_rule
from polyquad.tetra_rules import compress_rule, fan_tetrahedralize, tetra_based_rule

LOG_FLOOR = 1e-17


@dataclass
class ExperimentReport:
    columns: list
    rows: list = field(default_factory=list)

    def add(self, **row):
        self.rows.append(row)

    def sort(self):
        self.rows.sort(key=lambda r: r.get("degree", 0))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=self.columns, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow({k: _fmt(row.get(k)) for k in self.columns})
        return buf.getvalue()


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6e}"
    return "" if v is None else v


def random_linear_coefficients(trials, seed=0):
    """Uniform ``(a, b, c, d)`` in [0, 1] for ``(a x + b y + c z + d)^n``."""
    return np.random.default_rng(seed).random((trials, 4))


def linear_power(coef, n):
    a, b, c, d = coef
    return lambda x, y, z: (a * x + b * y + c * z + d) ** n


def _interval_moments(lo, hi, n):
    return [(hi ** (i + 1) - lo ** (i + 1)) / (i + 1) for i in range(n + 1)]


def box_integral_linear_power(coef, n, box):
    """Exact integral of ``(a x + b y + c z + d)^n`` over an axis-aligned box."""
    a, b, c, d = coef
    mx, my, mz = (_interval_moments(lo, hi, n) for lo, hi in box.intervals)
    total = 0.0
    for i in range(n + 1):
        for j in range(n + 1 - i):
            for k in range(n + 1 - i - j):
                l = n - i - j - k
                mult = factorial(n) // (factorial(i) * factorial(j) * factorial(k) * factorial(l))
                total += mult * a**i * b**j * c**k * d**l * mx[i] * my[j] * mz[k]
    return total


def is_axis_box(mesh: PolyMesh) -> bool:
    box = bounding_box(mesh)
    return len(mesh.vertices) == 8 and math.isclose(volume(mesh), box.volume, rel_tol=1e-12)


def tetra_reference(mesh: PolyMesh, center=None):
    """Fan tetrahedralization, or ``None`` when the mesh is not star-shaped."""
    try:
        return fan_tetrahedralize(mesh, center)
    except MeshError:
        return None


def exactness_trials(mesh: PolyMesh, degrees, trials=100, seed=0, cfg=None, center=None):
    """Relative errors of the tetrahedra-free rule on random linear powers.

    The reference is the exact box integral for box meshes, the
    tetrahedra-based rule when the mesh is star-shaped, and otherwise a rule
    rebuilt from an independently seeded random candidate stream.
    """
    cfg = TchakaloffConfig() if cfg is None else cfg
    tets = None if is_axis_box(mesh) else tetra_reference(mesh, center)
    kind = "analytic" if is_axis_box(mesh) else ("tetra" if tets is not None else "resampled")
    coefs = random_linear_coefficients(trials, seed)
    report = ExperimentReport(
        ["degree", "N", "candidates", "interior", "cardinality", "residual",
         "reference", "max_error", "log10_mean_error", "skipped", "seconds"]
    )
    box = bounding_box(mesh)
    for n in degrees:
        t0 = time.perf_counter()
        rule, build = tetra_free_rule(mesh, n, cfg, return_report=True)
        elapsed = time.perf_counter() - t0
        if kind == "tetra":
            ref_rule = tetra_based_rule(tets, n)
        elif kind == "resampled":
            alt = TchakaloffConfig(cfg.eps, cfg.theta, cfg.k0, cfg.k0_factor, "random",
                                   cfg.seed + 7919, cfg.max_refinements, cfg.max_candidates)
            ref_rule = tetra_free_rule(mesh, n, alt)
        errors, skipped = [], 0
        for coef in coefs:
            f = linear_power(coef, n)
            if kind == "analytic":
                ref = box_integral_linear_power(coef, n, box)
            else:
                ref = integrate(ref_rule, f)
            if ref == 0.0:
                skipped += 1
                continue
            errors.append(abs(ref - integrate(rule, f)) / abs(ref))
        errors = np.array(errors)
        report.add(
            degree=n, N=dimension(n), candidates=build.candidates[-1],
            interior=build.interior[-1], cardinality=rule.cardinality,
            residual=rule.residual, reference=kind,
            max_error=float(errors.max()) if len(errors) else float("nan"),
            log10_mean_error=float(np.mean(np.log10(np.maximum(errors, LOG_FLOOR)))) if len(errors) else float("nan"),
            skipped=skipped, seconds=elapsed, errors=errors,
        )
    report.sort()
    return report


def sample_functions(p0):
    p0 = np.asarray(p0, dtype=float)

    def dist(x, y, z):
        return np.sqrt((x - p0[0]) ** 2 + (y - p0[1]) ** 2 + (z - p0[2]) ** 2)

    return {
        "f1": lambda x, y, z: np.exp(-dist(x, y, z) ** 2),
        "f2": lambda x, y, z: dist(x, y, z) ** 5,
        "f3": dist,
    }


def function_errors(mesh: PolyMesh, degrees, p0, cfg=None, center=None, ref_extra=6):
    """Errors of the tetra-based (T), compressed (TC) and tetra-free (TF)
    rules against a reference rule of degree ``max(degrees) + ref_extra``.

    T and TC columns stay empty for meshes that are not star-shaped; the
    reference is then a tetra-free rule itself.
    """
    cfg = TchakaloffConfig() if cfg is None else cfg
    degrees = sorted(degrees)
    funcs = sample_functions(p0)
    tets = tetra_reference(mesh, center)
    ref_deg = degrees[-1] + ref_extra
    if tets is not None:
        ref_rule, ref_kind = tetra_based_rule(tets, ref_deg), "tetra"
    else:
        ref_rule, ref_kind = tetra_free_rule(mesh, ref_deg, cfg), "tetra_free"
    refs = {name: integrate(ref_rule, f) for name, f in funcs.items()}
    report = ExperimentReport(
        ["degree", "function", "reference", "card_T", "card_TC", "card_TF",
         "error_T", "error_TC", "error_TF"]
    )
    box = bounding_box(mesh)
    for n in degrees:
        tf = tetra_free_rule(mesh, n, cfg)
        qt = tetra_based_rule(tets, n) if tets is not None else None
        qtc = compress_rule(qt, n, box, cfg.eps) if qt is not None else None
        for name, f in funcs.items():
            ref = refs[name]

            def err(rule):
                return None if rule is None else abs(integrate(rule, f) - ref) / abs(ref)

            report.add(
                degree=n, function=name, reference=ref_kind,
                card_T=None if qt is None else qt.cardinality,
                card_TC=None if qtc is None else qtc.cardinality,
                card_TF=tf.cardinality,
                error_T=err(qt), error_TC=err(qtc), error_TF=err(tf),
            )
    report.sort()
    return report


def bench(mesh: PolyMesh, degrees, cfg=None):
    """Wall time of each construction phase per degree."""
    cfg = TchakaloffConfig() if cfg is None else cfg
    report = ExperimentReport(
        ["degree", "N", "faces", "interior", "cardinality", "moments",
         "candidates", "vandermonde", "nnls", "total"]
    )
    for n in degrees:
        rule, build = tetra_free_rule(mesh, n, cfg, return_report=True)
        report.add(
            degree=n, N=dimension(n), faces=len(mesh.faces), interior=build.interior[-1],
            cardinality=rule.cardinality, total=build.total_time, **build.timings,
        )
    report.sort()
    return report
