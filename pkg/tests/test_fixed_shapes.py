from fractions import Fraction as F

import pytest

from tworow.cglp import BINARY, MIP, verify_cut_valid
from tworow.fixed_shapes import (CONES, TRIANGLES, ShapeError, all_shapes, applicable_shapes,
                                 cone_weights, shape_cut)
from tworow.octahedron import Body, intersection_cut
from tworow.rowsystem import QRowSystem

from conftest import lattice_minimum
from test_octahedron import bisect_alpha

F14 = (F(1, 4), F(1, 2))


def test_shape_catalogue():
    assert len(TRIANGLES) == 4 and len(CONES) == 8
    for apex, side, diag in CONES:
        assert apex in [(0, 0), (1, 0), (0, 1), (1, 1)]
        assert 0 in side and abs(side[0]) + abs(side[1]) == 1
        assert abs(diag[0]) == abs(diag[1]) == 1


def test_applicable_at_reference_point():
    shapes = applicable_shapes(F14)
    assert len([s for s in shapes if s.kind == "triangle"]) == 4
    assert len([s for s in shapes if s.kind == "cone"]) == 4


def test_cone_count_on_grid():
    for a in range(1, 20):
        for b in range(1, 20):
            f = (F(a, 20), F(b, 20))
            cones = applicable_shapes(f, ("cone",))
            if a == b or a + b == 20:
                assert len(cones) != 4
            else:
                assert len(cones) == 4


def test_center_is_special():
    assert len(applicable_shapes((F(1, 2), F(1, 2)), ("cone",))) != 4


def test_triangle_cut_reference(alww):
    tri = [s for s in all_shapes() if s.kind == "triangle" and s.id == 1][0]
    cut = shape_cut(alww, tri)
    assert list(cut.alpha) == [F(12, 5), F(8, 5), 12, 2, 4]
    for j in range(alww.n):
        assert float(cut.alpha[j]) == pytest.approx(
            bisect_alpha(tri.body, [0.25, 0.5], [float(x) for x in alww.ray(j)]), rel=1e-9)


def test_triangles_match_intersection_cut(alww):
    for shape in applicable_shapes(alww.f, ("triangle",)):
        assert shape_cut(alww, shape).alpha == intersection_cut(alww, shape.body).alpha
        assert min(shape_cut(alww, shape).alpha) >= 0


def test_cone_not_containing_f(alww):
    cone = [s for s in all_shapes() if s.kind == "cone" and s.id == 1][0]
    with pytest.raises(ShapeError):
        shape_cut(alww, cone)


def test_cone_cut_matches_listed_facet(alww):
    cone = [s for s in all_shapes() if s.kind == "cone" and s.id == 4][0]
    assert list(shape_cut(alww, cone).alpha) == [12, 8, 12, 0, -4]


def test_shape_cuts_valid(alww):
    for shape in applicable_shapes(alww.f):
        cut = shape_cut(alww, shape)
        mode = MIP if shape.kind == "triangle" else BINARY
        assert verify_cut_valid(alww, cut, mode)
    cones = [shape_cut(alww, s) for s in applicable_shapes(alww.f, ("cone",))]
    assert any(min(c.alpha) < 0 for c in cones)


def test_strengthened_shapes_valid(alww):
    sys_ = QRowSystem(alww.f, alww.rays, integer_nonbasics=[0, 2, 4])
    for shape in applicable_shapes(sys_.f):
        plain = shape_cut(sys_, shape)
        strong = shape_cut(sys_, shape, strengthen=True)
        assert all(a <= b for a, b in zip(strong.alpha, plain.alpha))
        if shape.kind == "triangle":
            # shifted rays leave the disjunction but not the integer lattice
            assert set(strong.shifts) == {0, 2, 4}
            assert lattice_minimum(sys_.to_float(), strong.alpha) >= 1 - 1e-7
        else:
            assert verify_cut_valid(sys_, strong, BINARY, integer_window=3)


def test_lattice_oracle_rejects_scaled_cut(alww):
    sys_ = QRowSystem(alww.f, alww.rays, integer_nonbasics=[0, 2, 4])
    shape = applicable_shapes(sys_.f, ("triangle",))[0]
    strong = shape_cut(sys_, shape, strengthen=True)
    assert lattice_minimum(sys_.to_float(), [a / 2 for a in strong.alpha]) < 1


def test_cone_weights_positive(alww):
    for shape in applicable_shapes(alww.f, ("cone",)):
        assert all(w > 0 for w in cone_weights(alww, shape.body))
