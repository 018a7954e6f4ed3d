"""Positive interior quadrature on polyhedra without tetrahedralization."""

from polyquad.basis import BasisSpec, dimension, multi_indices, vandermonde
from polyquad.errors import ConvergenceError, MeshError, OFFParseError
from polyquad.geometry import BoundingBox, PolyMesh, bounding_box, contains, read_off, write_off
from polyquad.moments import MomentVector, polyhedron_moments, volume
from polyquad.nnls import NnlsResult, nnls_solve
from polyquad.tchakaloff import (
    QuadratureRule,
    TchakaloffConfig,
    halton,
    integrate,
    load_rule,
    save_rule,
    tetra_free_rule,
    verify_exactness,
)
from polyquad.tetra_rules import (
    compress_rule,
    fan_tetrahedralize,
    stroud_simplex_rule,
    tetra_based_rule,
)

__all__ = [
    "BasisSpec", "BoundingBox", "ConvergenceError", "MeshError", "MomentVector",
    "NnlsResult", "OFFParseError", "PolyMesh", "QuadratureRule", "TchakaloffConfig",
    "bounding_box", "compress_rule", "contains", "dimension", "fan_tetrahedralize",
    "halton", "integrate", "load_rule", "multi_indices", "nnls_solve",
    "polyhedron_moments", "read_off", "save_rule", "stroud_simplex_rule",
    "tetra_based_rule", "tetra_free_rule", "vandermonde", "verify_exactness",
    "volume", "write_off",
]
