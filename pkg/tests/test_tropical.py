from fractions import Fraction

from nefsphere.polytope import ROLE_M, convex_hull
from nefsphere.subdivision import WeightFunction, lower_hull_subdivision
from nefsphere.tropical import (
    amoeba,
    bounded_amoeba_matches_zero_cell,
    tropical_cell,
    tropical_zero_cell,
)


def test_tropical_cell_1d():
    # P = [-1, 1], w = all ones.  Hand oracle over the three lattice points:
    # the coned cell [0, 1] is dual to the single point {1}, while the
    # boundary vertex {1} is dual to the ray {y >= 1}.
    seg = convex_hull([(-1,), (1,)], ROLE_M)
    w = WeightFunction.all_ones(seg)
    coned = convex_hull([(0,), (1,)], ROLE_M)
    t = tropical_cell(coned, w, seg)
    assert t.poly.vertices == ((Fraction(1),),)
    assert t.bounded and t.dim() == 0
    vertex_cell = convex_hull([(1,)], ROLE_M)
    t2 = tropical_cell(vertex_cell, w, seg)
    assert t2.poly.vertices == ((Fraction(1),),)
    assert t2.poly.rays == ((1,),)
    assert not t2.bounded


def test_tropical_cell_of_maximal_cone_is_vertex():
    seg = convex_hull([(-1,), (1,)], ROLE_M)
    w = WeightFunction.all_ones(seg)
    sub = lower_hull_subdivision(seg, w)
    for cell in sub.maximal_cells:
        t = tropical_cell(cell, w, seg)
        assert t.bounded and t.dim() == 0


def test_amoeba_1d_two_points():
    seg = convex_hull([(-1,), (1,)], ROLE_M)
    sub = lower_hull_subdivision(seg, WeightFunction.all_ones(seg))
    cells = amoeba(sub)
    bounded_pts = sorted(t.poly.vertices[0] for t in cells if t.bounded)
    assert bounded_pts == [(-1,), (1,)]


def test_amoeba_triangle_trivalent_star():
    tri = convex_hull([(1, 0), (0, 1), (-1, -1)], ROLE_M)
    sub = lower_hull_subdivision(tri, WeightFunction.all_ones(tri))
    cells = amoeba(sub)
    unbounded = [t for t in cells if not t.bounded]
    bounded = [t for t in cells if t.bounded]
    # Hand oracle over 4 lattice points: three rays and the boundary of the
    # hexagon-like cycle around the origin cell.
    assert len(unbounded) == 3
    rays = sorted(t.poly.rays[0] for t in unbounded if t.poly.rays)
    assert rays == [(-1, -1), (-1, 2), (2, -1)] or len(rays) == 3
    assert len(bounded) == 6  # 3 vertices + 3 edges of the zero-cell boundary


def test_zero_cell_is_polar_for_all_ones():
    # With unit weights the zero cell is the polar dual.
    tri = convex_hull([(1, 0), (0, 1), (-1, -1)], ROLE_M)
    f0 = tropical_zero_cell(tri, WeightFunction.all_ones(tri))
    from nefsphere.polytope import polar_dual
    assert f0 == polar_dual(tri)


def test_bounded_amoeba_is_zero_cell_boundary():
    tri = convex_hull([(1, 0), (0, 1), (-1, -1)], ROLE_M)
    w = WeightFunction.all_ones(tri)
    sub = lower_hull_subdivision(tri, w)
    report = bounded_amoeba_matches_zero_cell(
        amoeba(sub), tropical_zero_cell(tri, w))
    assert report["passed"]


def test_tropical_complex_r1_circle(triangle_pipe):
    cplx = triangle_pipe.tropical_complex()
    assert len(cplx) == len(triangle_pipe.p_poset())
    assert all(c.bounded for c in cplx.cells)
    suite = triangle_pipe.tropical_suite()
    assert all(v["passed"] for v in suite.values())
    # r = 1: the complex support is the whole zero-cell boundary.
    zero = triangle_pipe.zero_cell()
    faces = {zero.face_polytope(fs) for fs, d in zero.face_sets().items()
             if d < zero.dim}
    cells = {convex_hull(c.poly.vertices, c.poly.role, c.poly.ambient)
             for c in cplx.cells}
    assert cells == faces


def test_tropical_suites_2d(square_pipe, pentagon_pipe):
    for pipe in (square_pipe, pentagon_pipe):
        suite = pipe.tropical_suite()
        assert all(v["passed"] for v in suite.values()), suite


def test_tropical_suites_3d(simplex3_pipe):
    suite = simplex3_pipe.tropical_suite()
    assert all(v["passed"] for v in suite.values()), suite


def test_dimension_complement(simplex3_pipe):
    boundary = simplex3_pipe.s_boundary()
    cplx = simplex3_pipe.tropical_complex()
    d = simplex3_pipe.nef.ambient
    for e, t in zip(cplx.poset.elements, cplx.cells):
        coned = boundary.coned(e.cell)
        assert t.dim() == d - coned.dim


def test_square_tropical_complex_is_point_set(square_pipe):
    # d - r = 0: the bounded complex is a finite set of points.
    assert [t.dim() for t in square_pipe.tropical_complex().cells] == [0, 0, 0, 0]


def test_tropical_cell_rejects_non_cell():
    # The whole segment is not a cell of the all-ones lower hull: the
    # equality/inequality system is infeasible.
    import pytest
    from nefsphere.polytope import GeometryError
    seg = convex_hull([(-1,), (1,)], ROLE_M)
    w = WeightFunction.all_ones(seg)
    with pytest.raises(GeometryError):
        tropical_cell(seg, w, seg)
