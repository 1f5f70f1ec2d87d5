import itertools
import random
from fractions import Fraction

import pytest

from app.cli.parser import parse_poly
from app.core.errors import ToolkitError
from app.core.exact_algebra import FracPoly, WeightVector, leading_form
from app.core.newton_geometry import (
    CEILING,
    FLOOR,
    PARALLEL_FOG,
    PARALLEL_FOX,
    SLANTED,
    SLANTED_PLANE,
    VERTICAL,
    classify_edge,
    convex_hull,
    face_for_weight,
    face_kind,
    lower_hull_2d,
    newton_polygon,
    newton_polytope,
    phi_a_face,
    primitive_vector,
    shape_audit_polytope,
    trapezoid_membership,
    weight_for_face,
)

TETRAHEDRON = [(0, 0, 0), (3, 0, 0), (0, 2, 0), (0, 0, 1)]


def _point_set(poly, ids):
    return {poly.vertices[i] for i in ids}


# ---- 凸包 ----

def test_triangle_hull():
    hull = convex_hull([(0, 0), (1, 0), (0, 1)], 2)
    assert set(hull.vertices) == {(0, 0), (1, 0), (0, 1)}
    assert len(hull.faces) == 3


def test_point_on_edge_is_not_a_vertex():
    hull = convex_hull([(0, 0), (2, 0), (0, 2), (1, 1)], 2)
    assert set(hull.vertices) == {(0, 0), (2, 0), (0, 2)}
    assert hull.contains((1, 1))


def test_tetrahedron_has_four_faces():
    hull = convex_hull(TETRAHEDRON, 3)
    assert hull.affine_dim == 3
    assert len(hull.faces) == 4
    assert len(hull.edges) == 6
    classes = sorted(face.classification for face in hull.faces)
    assert classes == sorted([FLOOR, VERTICAL, VERTICAL, SLANTED_PLANE])


def test_degenerate_hulls_record_affine_dimension():
    segment = convex_hull([(0, 0), (1, 1), (2, 2)], 2)
    assert segment.affine_dim == 1
    assert segment.vertices == [(0, 0), (2, 2)]
    flat = convex_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)], 3)
    assert flat.affine_dim == 2
    assert flat.faces == []
    assert len(flat.edges) == 4
    single = convex_hull([(1, 2, 3)], 3)
    assert single.affine_dim == 0


def test_rational_coordinates():
    hull = convex_hull([(0, 0), (Fraction(1, 2), 0), (0, Fraction(1, 3))], 2)
    assert (Fraction(1, 2), 0) in hull.vertices


def test_lower_hull_keeps_lowest_point_per_abscissa():
    chain = lower_hull_2d([(0, 3), (0, 1), (1, 0), (2, 0), (3, 2)])
    assert chain == [(0, 1), (1, 0), (2, 0), (3, 2)]


def _brute_force_facets(points, dim):
    """枚举 dim 个点张成的超平面，保留所有点都在一侧的那些"""
    facets = set()
    for combo in itertools.combinations(points, dim):
        if dim == 2:
            (a, b) = combo
            normal = (b[1] - a[1], a[0] - b[0])
        else:
            a, b, c = combo
            u = tuple(q - p for p, q in zip(a, b))
            v = tuple(q - p for p, q in zip(a, c))
            normal = (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])
        if all(c == 0 for c in normal):
            continue
        values = [sum(n * x for n, x in zip(normal, p)) for p in points]
        offset = sum(n * x for n, x in zip(normal, a))
        if all(v <= offset for v in values):
            key = primitive_vector(normal)
        elif all(v >= offset for v in values):
            key = primitive_vector(tuple(-n for n in normal))
        else:
            continue
        facets.add((key, sum(k * x for k, x in zip(key, a))))
    return facets


def _vertices_from_facets(points, facets, dim):
    vertices = set()
    for p in set(points):
        tight = [n for n, off in facets if sum(k * x for k, x in zip(n, p)) == off]
        if dim == 2 and len({n for n in tight}) >= 2:
            vertices.add(p)
        if dim == 3 and any(
            a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]) != 0
            for a, b, c in itertools.combinations(tight, 3)
        ):
            vertices.add(p)
    return vertices


@pytest.mark.parametrize("dim, count", [(2, 200), (3, 100)])
def test_hull_matches_half_space_oracle(dim, count):
    rng = random.Random(1000 + dim)
    checked = 0
    for _ in range(count):
        points = [tuple(rng.randint(0, 6) for _ in range(dim)) for _ in range(rng.randint(dim + 1, 10))]
        hull = convex_hull(points, dim)
        if hull.affine_dim < dim:
            continue
        facets = _brute_force_facets(sorted(set(points)), dim)
        computed = {(face.normal, hull.support_value(face)) for face in hull.faces}
        assert computed == facets
        assert set(hull.vertices) == _vertices_from_facets(points, facets, dim)
        assert all(hull.contains(p) for p in points)
        checked += 1
    assert checked > count // 2


@pytest.mark.parametrize("dim, count", [(2, 80), (3, 30)])
def test_wide_hull_matches_half_space_oracle(dim, count):
    rng = random.Random(2000 + dim)
    for _ in range(count):
        points = [tuple(rng.randint(-10, 10) for _ in range(dim)) for _ in range(rng.randint(dim + 1, 40))]
        hull = convex_hull(points, dim)
        if hull.affine_dim < dim:
            continue
        facets = _brute_force_facets(sorted(set(points)), dim)
        assert {(face.normal, hull.support_value(face)) for face in hull.faces} == facets
        assert set(hull.vertices) == _vertices_from_facets(points, facets, dim)
        assert all(hull.contains(p) for p in points)


def _coplanar_heavy_points(rng):
    """平面 z = 0 上的大量点，外加少数离面点"""
    base = [(rng.randint(-10, 10), rng.randint(-10, 10), 0) for _ in range(rng.randint(4, 30))]
    apex = [(rng.randint(-10, 10), rng.randint(-10, 10), rng.choice([-10, -3, 2, 7])) for _ in range(rng.randint(1, 4))]
    return base + apex


def test_hull_with_coplanar_points_matches_oracle():
    rng = random.Random(3003)
    checked = 0
    for _ in range(40):
        points = _coplanar_heavy_points(rng)
        hull = convex_hull(points, 3)
        if hull.affine_dim < 3:
            continue
        facets = _brute_force_facets(sorted(set(points)), 3)
        assert {(face.normal, hull.support_value(face)) for face in hull.faces} == facets
        assert set(hull.vertices) == _vertices_from_facets(points, facets, 3)
        checked += 1
    assert checked > 20


def test_fully_coplanar_points_give_flat_hull():
    rng = random.Random(3004)
    for _ in range(20):
        points = []
        for _ in range(rng.randint(3, 40)):
            a, b = rng.randint(-10, 10), rng.randint(-10, 10)
            points.append((a, b, -a - b))
        hull = convex_hull(points, 3)
        assert hull.affine_dim <= 2
        assert hull.faces == []


# ---- 面与权重 ----

def test_face_for_weight_square():
    square = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)], 2)
    face = face_for_weight(square, WeightVector.of(x=1))
    assert _point_set(square, face.vertex_ids) == {(1, 0), (1, 1)}
    assert weight_for_face(square, face).along(("x", "y")) == (1, 0)


@pytest.mark.parametrize("weights, expected", [
    ({"x": 1, "y": 1}, {(2, 0), (0, 2)}),
    ({"x": -1, "y": -1}, {(0, 0)}),
])
def test_face_for_weight_triangle(weights, expected):
    triangle = convex_hull([(0, 0), (2, 0), (0, 2)], 2)
    face = face_for_weight(triangle, WeightVector.of(**weights))
    assert _point_set(triangle, face.vertex_ids) == expected


def test_weight_for_edge():
    triangle = convex_hull([(0, 0), (3, 0), (0, 2)], 2)
    face = face_for_weight(triangle, WeightVector.of(x=2, y=3))
    assert weight_for_face(triangle, face).along(("x", "y")) == (2, 3)


def test_weight_for_floor_of_tetrahedron():
    hull = convex_hull(TETRAHEDRON, 3)
    floor = face_for_weight(hull, WeightVector.of(x=-1))
    assert weight_for_face(hull, floor).along(("F", "G", "x")) == (0, 0, -1)


def test_weight_for_vertex_is_rejected():
    triangle = convex_hull([(0, 0), (2, 0), (0, 2)], 2)
    vertex = face_for_weight(triangle, WeightVector.of(x=-1, y=-1))
    with pytest.raises(ToolkitError, match="weight cone not one-dimensional"):
        weight_for_face(triangle, vertex)


@pytest.mark.parametrize("direction, expected", [
    ((-1, 1, 0), PARALLEL_FOG),
    ((1, 1, 1), SLANTED),
    ((-1, 0, 1), PARALLEL_FOX),
])
def test_classify_edge(direction, expected):
    assert classify_edge(direction) == expected


def test_classify_zero_edge():
    with pytest.raises(ToolkitError):
        classify_edge((0, 0, 0))


def test_face_kind():
    hull = convex_hull(TETRAHEDRON, 3)
    assert all(face_kind(hull, face) == "triangle" for face in hull.faces)
    ceiling = face_for_weight(hull, WeightVector.of(x=1))
    assert face_kind(hull, ceiling) == "vertex"
    assert ceiling.classification != CEILING


# ---- 梯形 ----

def test_trapezoid_pass():
    verdict = trapezoid_membership(parse_poly("x^2*y^3 + x*y + 1"))
    assert verdict.passed
    assert (verdict.m, verdict.n) == (2, 3)


def test_trapezoid_m_zero():
    verdict = trapezoid_membership(parse_poly("x + y^2"))
    assert not verdict.passed
    assert "m = 0" in verdict.violations


def test_trapezoid_reports_bisectrix_edge():
    verdict = trapezoid_membership(parse_poly("x^2*y^3 + y"))
    assert verdict.bisectrix_edges == [((0, 1), (2, 3))]


def test_trapezoid_of_zero():
    with pytest.raises(ToolkitError):
        trapezoid_membership(parse_poly("0"))


# ---- N(P) 形状 ----

def test_tetrahedron_passes_shape_audit():
    audit = shape_audit_polytope(convex_hull(TETRAHEDRON, 3))
    assert audit.passed, [c for c in audit.checks if not c.passed]
    assert audit.ceiling_kind == "vertex"


def test_extra_vertex_fails_coordinate_planes_and_slanted_edges():
    audit = shape_audit_polytope(convex_hull(TETRAHEDRON + [(2, 2, 1)], 3))
    by_name = {c.name: c for c in audit.checks}
    assert not by_name["vertices_in_coordinate_planes"].passed
    assert "(2,2,1)" in by_name["vertices_in_coordinate_planes"].witness
    assert not by_name["no_slanted_edges"].passed
    assert "(2,2,1)-(3,0,0)" in by_name["no_slanted_edges"].witness


def test_flat_polytope_is_rejected():
    flat = convex_hull([(0, 0, 0), (3, 0, 0), (0, 2, 0)], 3)
    with pytest.raises(ToolkitError, match="degenerate"):
        shape_audit_polytope(flat)


def test_phi_a_face_of_tetrahedron():
    hull = convex_hull(TETRAHEDRON, 3)
    phi = phi_a_face(hull, ((3, 0, 0), (0, 2, 0)))
    assert (phi.rho, phi.sigma) == (Fraction(1, 3), Fraction(1, 2))


def test_newton_polygon_and_polytope_axes():
    polygon = newton_polygon(parse_poly("x^2*y^3 + x*y + 1"))
    assert set(polygon.vertices) == {(0, 0), (1, 1), (2, 3)}
    polytope = newton_polytope(parse_poly("G^2 - F^3 - 2*F^2 - F + x*F"))
    assert polytope.axes == ("F", "G", "x")
    assert (1, 0, 1) in polytope.vertices


def test_face_weight_round_trip():
    rng = random.Random(4004)
    for dim in (2, 3):
        for _ in range(30):
            points = [tuple(rng.randint(-10, 10) for _ in range(dim)) for _ in range(rng.randint(dim + 1, 25))]
            hull = convex_hull(points, dim)
            if hull.affine_dim < dim:
                continue
            for face in hull.faces:
                assert face_for_weight(hull, weight_for_face(hull, face)) == face


def test_leading_form_support_is_support_on_face():
    rng = random.Random(5005)
    nonzero = [w for w in range(-3, 4) if w != 0]
    for _ in range(60):
        p = FracPoly.zero()
        while p.is_zero():
            for _ in range(rng.randint(1, 8)):
                p = p + FracPoly.monomial(rng.randint(-4, 4), x=rng.randint(0, 5), y=rng.randint(0, 5))
        w = WeightVector.of(x=rng.choice(nonzero), y=rng.randint(-3, 3))
        polygon = newton_polygon(p)
        face = face_for_weight(polygon, w)
        face_vertices = set(polygon.face_points(face))
        top = sum(c * e for c, e in zip(w.along(polygon.axes), next(iter(face_vertices))))
        on_face = {(m.exponent("x"), m.exponent("y")) for m in p.support()
                   if w.weight_of(m) == top}
        form = leading_form(p, w)
        assert {(m.exponent("x"), m.exponent("y")) for m in form.support()} == on_face
        assert set(newton_polygon(form).vertices) == face_vertices
