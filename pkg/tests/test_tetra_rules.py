from math import factorial

import numpy as np
import pytest

from polyquad import meshes
from polyquad.basis import BasisSpec, dimension, vandermonde
from polyquad.errors import MeshError
from polyquad.geometry import bounding_box, contains
from polyquad.moments import polyhedron_moments
from polyquad.tchakaloff import QuadratureRule, integrate
from polyquad.tetra_rules import (
    REFERENCE_SIMPLEX,
    Tetrahedralization,
    compress_rule,
    fan_tetrahedralize,
    map_to_tetrahedron,
    stroud_simplex_rule,
    tetra_based_rule,
)


def _det_volume(t):
    a, b, c, d = t
    return abs(np.linalg.det(np.array([b - a, c - a, d - a]))) / 6


def test_stroud_examples():
    r = stroud_simplex_rule(1)
    assert r.cardinality == 1 and r.weights[0] == pytest.approx(1 / 6, rel=1e-15)
    assert stroud_simplex_rule(5).cardinality == 27


def test_stroud_xyz():
    r = stroud_simplex_rule(4)
    assert integrate(r, lambda x, y, z: x * y * z) == pytest.approx(1 / 720, rel=1e-14)


@pytest.mark.parametrize("n", range(0, 22))
def test_stroud_exactness(n):
    r = stroud_simplex_rule(n)
    assert r.cardinality == ((n + 2) // 2) ** 3
    x, y, z = r.nodes.T
    assert np.all(r.weights > 0)
    assert np.all((x > 0) & (y > 0) & (z > 0) & (x + y + z < 1))
    for a in range(n + 1):
        for b in range(n + 1 - a):
            for c in range(n + 1 - a - b):
                exact = factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3)
                assert abs(r.weights @ (x**a * y**b * z**c) - exact) <= 1e-12 * exact


def test_map_to_reference_is_identity():
    r = stroud_simplex_rule(6)
    m = map_to_tetrahedron(r, *REFERENCE_SIMPLEX)
    assert np.allclose(m.nodes, r.nodes, atol=1e-16)
    assert np.allclose(m.weights, r.weights, rtol=1e-15)


def test_map_unit_volume_and_linear_exactness():
    A, B, C, D = np.array([[0, 0, 0], [3, 0, 0], [0, 2, 0], [0, 0, 1.0]])
    m = map_to_tetrahedron(stroud_simplex_rule(3), A, B, C, D)
    assert m.weights.sum() == pytest.approx(1.0, rel=1e-14)
    centroid = (A + B + C + D) / 4
    assert np.allclose(m.weights @ m.nodes, centroid, rtol=1e-14)


def test_map_rejects_flat_tetrahedron():
    with pytest.raises(MeshError):
        map_to_tetrahedron(stroud_simplex_rule(2), (0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0))


def test_fan_cube(cube):
    tets = fan_tetrahedralize(cube)
    assert len(tets) == 12
    assert sum(_det_volume(t) for t in tets.tets) == pytest.approx(1.0, rel=1e-14)
    assert np.allclose(tets.volumes, [_det_volume(t) for t in tets.tets])


def test_fan_tetrahedron(tetra):
    tets = fan_tetrahedralize(tetra)
    assert len(tets) == 4
    assert tets.volumes.sum() == pytest.approx(1 / 6, rel=1e-14)


def test_fan_skips_faces_through_center(cube):
    tets = fan_tetrahedralize(cube, center=(0.0, 0.5, 0.5))
    assert len(tets) == 10
    assert tets.volumes.sum() == pytest.approx(1.0, rel=1e-14)


def test_fan_not_star_shaped():
    with pytest.raises(MeshError, match="star-shaped"):
        fan_tetrahedralize(meshes.u_prism())
    with pytest.raises(MeshError):
        fan_tetrahedralize(meshes.holed_prism())


def test_fan_schoenhardt_center_off_kernel():
    mesh = meshes.schoenhardt(-30)
    center = (0.6, 0.1, 0.2)
    assert contains(mesh, center)
    with pytest.raises(MeshError, match="star-shaped"):
        fan_tetrahedralize(mesh, center)
    # the axis lies in the kernel, so the default center works
    assert fan_tetrahedralize(mesh).volumes.sum() == pytest.approx(np.sqrt(3) / 2, rel=1e-12)


def test_tetrahedralization_rejects_inverted():
    good = Tetrahedralization(REFERENCE_SIMPLEX[[1, 0, 2, 3]][None])
    assert good.volumes[0] == pytest.approx(1 / 6)
    with pytest.raises(MeshError):
        Tetrahedralization(REFERENCE_SIMPLEX[None])


def test_tets_csv(cube):
    text = fan_tetrahedralize(cube).to_csv()
    lines = text.splitlines()
    assert len(lines) == 13
    rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]]).reshape(-1, 4, 3)
    assert np.array_equal(rows, fan_tetrahedralize(cube).tets)


def test_tetra_rule_cube_degree_five(cube):
    rule = tetra_based_rule(fan_tetrahedralize(cube), 5)
    assert rule.cardinality == 324
    assert rule.weights.sum() == pytest.approx(1.0, rel=1e-14)


def test_tetra_rule_degree_zero(ico):
    tets = fan_tetrahedralize(ico)
    rule = tetra_based_rule(tets, 0)
    assert rule.cardinality == len(tets)
    assert np.allclose(rule.weights, tets.volumes, rtol=1e-14)


def test_tetra_rule_cube_moments(cube):
    mom = polyhedron_moments(cube, 4)
    rule = tetra_based_rule(fan_tetrahedralize(cube), 4)
    assert np.max(np.abs(vandermonde(rule.nodes, mom.spec).T @ rule.weights - mom.gamma)) <= 1e-12


def test_compress_feasible_input_kept(tetra):
    rule = stroud_simplex_rule(3)
    box = bounding_box(tetra)
    out = compress_rule(rule, 2, box)
    spec = BasisSpec(2, box)
    V_in, V_out = vandermonde(rule.nodes, spec), vandermonde(out.nodes, spec)
    assert np.max(np.abs(V_in.T @ rule.weights - V_out.T @ out.weights)) <= 1e-13
    small = QuadratureRule(rule.nodes[:5], rule.weights[:5], 1)
    again = compress_rule(small, 1, box)
    assert np.allclose(vandermonde(again.nodes, BasisSpec(1, box)).T @ again.weights,
                       vandermonde(small.nodes, BasisSpec(1, box)).T @ small.weights, atol=1e-13)


def test_compress_cube_degree_three(cube):
    qt = tetra_based_rule(fan_tetrahedralize(cube), 3)
    assert qt.cardinality == 96
    qtc = compress_rule(qt, 3, bounding_box(cube))
    assert qtc.cardinality <= 20
    assert np.all(qtc.weights > 0)
    assert qtc.residual < 1e-14


@pytest.mark.parametrize("make,n", [(meshes.icosahedron, 5), (meshes.l_prism, 4)])
def test_compress_subset_and_moments(make, n):
    mesh = make()
    try:
        tets = fan_tetrahedralize(mesh)
    except MeshError:
        tets = fan_tetrahedralize(mesh, center=(0.5, 0.5, 0.5))
    qt = tetra_based_rule(tets, n)
    box = bounding_box(mesh)
    qtc = compress_rule(qt, n, box)
    assert qtc.cardinality <= dimension(n) <= qt.cardinality
    rows = {tuple(p) for p in qt.nodes}
    assert all(tuple(p) in rows for p in qtc.nodes)
    spec = BasisSpec(n, box)
    g = vandermonde(qt.nodes, spec).T @ qt.weights
    gc = vandermonde(qtc.nodes, spec).T @ qtc.weights
    assert np.linalg.norm(g - gc) <= 1e-14 * np.linalg.norm(g)
    rng = np.random.default_rng(8)
    for coef in rng.random((50, 4)):
        f = lambda x, y, z: (coef[0] * x + coef[1] * y + coef[2] * z + coef[3]) ** n
        assert integrate(qtc, f) == pytest.approx(integrate(qt, f), rel=1e-10)
