from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyquad.errors import MeshError
from polyquad.polygon_quad import ear_clip, polygon_rule, shoelace_area, triangle_rule

L_HEX = np.array([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)], float)
U_OCT = np.array([(0, 0), (3, 0), (3, 3), (2, 3), (2, 1), (1, 1), (1, 3), (0, 3)], float)


def _green_moment(poly, p, q, k=40):
    """Integral of x^p y^q by Green's theorem with a 1D Gauss rule per edge."""
    t, w = np.polynomial.legendre.leggauss(k)
    t, w = 0.5 * (t + 1), 0.5 * w
    total = 0.0
    for a, b in zip(poly, np.roll(poly, -1, axis=0)):
        x = a[0] + t * (b[0] - a[0])
        y = a[1] + t * (b[1] - a[1])
        total += np.sum(w * x ** (p + 1) * y**q) * (b[1] - a[1]) / (p + 1)
    return total


def _tri_area(poly, tri):
    a, b, c = poly[list(tri)]
    return 0.5 * abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def test_ear_clip_triangle():
    tri = np.array([(0, 0), (1, 0), (0, 1)], float)
    assert ear_clip(tri) == [(0, 1, 2)] or sorted(ear_clip(tri)[0]) == [0, 1, 2]


def test_ear_clip_convex_quad():
    quad = np.array([(0, 0), (2, 0), (3, 1), (0, 2)], float)
    tris = ear_clip(quad)
    assert len(tris) == 2
    assert sum(_tri_area(quad, t) for t in tris) == pytest.approx(shoelace_area(quad))


def test_ear_clip_l_hexagon():
    tris = ear_clip(L_HEX)
    assert len(tris) == 4
    assert sum(_tri_area(L_HEX, t) for t in tris) == pytest.approx(3.0, rel=1e-15)


def test_ear_clip_rejects_clockwise():
    with pytest.raises(MeshError):
        ear_clip(L_HEX[::-1])


def test_ear_clip_drops_collinear():
    square = np.array([(0, 0), (0.5, 0), (1, 0), (1, 1), (0, 1)], float)
    tris = ear_clip(square)
    assert len(tris) == 2
    assert all(1 not in t for t in tris)


def test_triangle_rule_low_degree():
    for d in (0, 1):
        r = triangle_rule(d)
        assert len(r.weights) == 1 and r.weights[0] == pytest.approx(0.5)


def test_triangle_rule_xy():
    r = triangle_rule(2)
    assert r.weights @ (r.nodes[:, 0] * r.nodes[:, 1]) == pytest.approx(1 / 24, abs=1e-15)


@pytest.mark.parametrize("d", range(0, 22))
def test_triangle_exactness(d):
    r = triangle_rule(d)
    x, y = r.nodes.T
    assert np.all(r.weights > 0)
    assert np.all((x > 0) & (y > 0) & (x + y < 1))
    assert len(r.weights) == ((d + 2) // 2) ** 2
    tol = 1e-13 if d <= 7 else 1e-12
    for a in range(d + 1):
        for b in range(d + 1 - a):
            exact = factorial(a) * factorial(b) / factorial(a + b + 2)
            assert abs(r.weights @ (x**a * y**b) - exact) <= tol * exact


def test_polygon_rule_square_x2y():
    sq = np.array([(0, 0), (1, 0), (1, 1), (0, 1)], float)
    r = polygon_rule(sq, 2)
    assert r.weights @ (r.nodes[:, 0] ** 2 * r.nodes[:, 1]) == pytest.approx(1 / 6, abs=1e-14)


def test_polygon_rule_l_hexagon_x5():
    r = polygon_rule(L_HEX, 5)
    # unit squares at (0,0), (1,0), (0,1)
    exact = 1 / 6 + (2**6 - 1) / 6 + 1 / 6
    assert r.weights @ r.nodes[:, 0] ** 5 == pytest.approx(exact, rel=1e-14)


@pytest.mark.parametrize("poly", [L_HEX, U_OCT])
@pytest.mark.parametrize("d", [0, 3, 6, 11])
def test_polygon_exactness_against_green(poly, d):
    r = polygon_rule(poly, d)
    assert r.weights.sum() == pytest.approx(shoelace_area(poly), rel=1e-13)
    for p in range(d + 1):
        for q in range(d + 1 - p):
            ref = _green_moment(poly, p, q)
            assert r.weights @ (r.nodes[:, 0] ** p * r.nodes[:, 1] ** q) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("poly", [L_HEX, U_OCT])
def test_nodes_inside_some_ear(poly):
    r = polygon_rule(poly, 6)
    tris = ear_clip(poly)
    for p in r.nodes:
        hit = False
        for t in tris:
            a, b, c = poly[list(t)]
            M = np.column_stack([b - a, c - a])
            lam = np.linalg.solve(M, p - a)
            if lam.min() > 0 and lam.sum() < 1:
                hit = True
                break
        assert hit


@pytest.mark.parametrize("poly", [L_HEX, U_OCT])
def test_cyclic_relabel_invariance(poly):
    f = lambda x, y: np.exp(x) * np.cos(y) + x**3 * y**2
    vals = []
    for s in range(len(poly)):
        r = polygon_rule(np.roll(poly, s, axis=0), 7)
        vals.append(r.weights @ f(*r.nodes.T))
    poly_part = [polygon_rule(np.roll(poly, s, axis=0), 7) for s in range(len(poly))]
    g = [r.weights @ (r.nodes[:, 0] ** 3 * r.nodes[:, 1] ** 2) for r in poly_part]
    assert np.ptp(g) <= 1e-13 * abs(g[0])
    assert np.ptp(vals) <= 1e-6 * abs(vals[0])


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 12), st.integers(0, 2**31), st.integers(0, 8))
def test_random_convex_polygon(m, seed, d):
    rng = np.random.default_rng(seed)
    ang = np.sort(rng.uniform(0, 2 * np.pi, m))
    if np.min(np.diff(np.r_[ang, ang[0] + 2 * np.pi])) < 1e-3:
        return
    poly = np.c_[np.cos(ang), np.sin(ang)] * rng.uniform(0.5, 2) + rng.normal(size=2)
    r = polygon_rule(poly, d)
    assert np.all(r.weights > 0)
    assert r.weights.sum() == pytest.approx(shoelace_area(poly), rel=1e-12)
    p, q = d // 2, d - d // 2
    ref = _green_moment(poly, p, q)
    got = r.weights @ (r.nodes[:, 0] ** p * r.nodes[:, 1] ** q)
    scale = r.weights @ np.abs(r.nodes[:, 0] ** p * r.nodes[:, 1] ** q)
    assert abs(got - ref) <= 1e-12 * max(scale, 1e-300)
