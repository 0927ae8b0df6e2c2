import pytest

from nefsphere import NefPartition, dual_nef_partition, interior_vectors, \
    is_irreducible, validate_nef_partition
from nefsphere.nef import NefPartitionError
from nefsphere.polytope import ROLE_N, Vector, pair, polar_dual

from conftest import PENTAGON, PRISM_PAIR_5D, PRISM_PAIR_DUALS, SQUARE_SUM, TRIANGLE


def test_support_value_examples():
    nef = NefPartition.from_vertex_lists(PRISM_PAIR_5D)
    origin = Vector((0, 0, 0, 0, 0), ROLE_N)
    assert nef.support_value(0, origin) == 0
    # The first listed dual vertex evaluates to 1 under the first support.
    assert nef.support_value(0, Vector((1, 0, 0, 0, 0), ROLE_N)) == 1
    # On the polar of the sum every support value is at most 1.
    for x in nef.sum_polar.vertices:
        assert nef.support_value(0, Vector(x, ROLE_N)) <= 1
        assert nef.support_value(1, Vector(x, ROLE_N)) <= 1


def test_dual_r1_is_polar():
    nef = NefPartition.from_vertex_lists(TRIANGLE)
    dual = dual_nef_partition(nef)
    assert len(dual.parts) == 1
    assert dual.parts[0] == polar_dual(nef.sum_polytope)


def test_dual_prism_pair_matches_published_lists():
    nef = NefPartition.from_vertex_lists(PRISM_PAIR_5D)
    dual = dual_nef_partition(nef)
    got = [set(tuple(int(x) for x in v) for v in p.vertices)
           for p in dual.parts]
    assert got == [set(map(tuple, PRISM_PAIR_DUALS[0])),
                   set(map(tuple, PRISM_PAIR_DUALS[1]))]


def test_dual_reducible_square():
    nef = NefPartition.from_vertex_lists(SQUARE_SUM)
    dual = dual_nef_partition(nef)
    got = [set(tuple(int(x) for x in v) for v in p.vertices)
           for p in dual.parts]
    # Oracle output (brute force from the defining region): segments through 0.
    assert got == [{(1, 0), (-1, 0)}, {(0, 1), (0, -1)}]


def test_dual_involution():
    for lists in (TRIANGLE, SQUARE_SUM, PENTAGON, PRISM_PAIR_5D):
        nef = NefPartition.from_vertex_lists(lists)
        dual = dual_nef_partition(nef)
        back = dual_nef_partition(dual.as_nef_partition())
        assert [p.vertices for p in back.parts] == \
            [p.vertices for p in nef.parts]


def test_validate_examples():
    assert validate_nef_partition(
        NefPartition.from_vertex_lists(PRISM_PAIR_5D)).passed
    assert validate_nef_partition(
        NefPartition.from_vertex_lists(PENTAGON)).passed
    # A part missing the origin fails check (a).
    bad = NefPartition.from_vertex_lists([[(1, 0), (2, 0), (1, 1)]])
    report = validate_nef_partition(bad)
    assert not report.passed
    assert not report.checks[0].passed


def test_validator_never_raises_on_junk():
    bad = NefPartition.from_vertex_lists([[(2, 0), (0, 2), (-2, -2)]])
    report = validate_nef_partition(bad)
    assert not report.passed


def test_is_irreducible():
    assert is_irreducible(NefPartition.from_vertex_lists(TRIANGLE)) == (True, None)
    flag, witness = is_irreducible(NefPartition.from_vertex_lists(SQUARE_SUM))
    assert not flag and witness == (0,)
    assert is_irreducible(NefPartition.from_vertex_lists(PENTAGON))[0]
    assert is_irreducible(NefPartition.from_vertex_lists(PRISM_PAIR_5D))[0]


def test_interior_vectors_r1_is_zero():
    nef = NefPartition.from_vertex_lists(TRIANGLE)
    iv = interior_vectors(nef, dual_nef_partition(nef))
    assert all(c == 0 for c in iv.v[0].coords)
    assert all(c == 0 for c in iv.w[0].coords)


def _check_interior_vector_invariants(nef):
    dual = dual_nef_partition(nef)
    iv = interior_vectors(nef, dual)
    dim = nef.ambient
    for coord in range(dim):
        assert sum(v.coords[coord] for v in iv.v) == 0
        assert sum(w.coords[coord] for w in iv.w) == 0
    for i, part in enumerate(nef.parts):
        assert part.interior_contains(iv.v[i].coords)
    for i, part in enumerate(dual.parts):
        assert part.interior_contains(iv.w[i].coords)
    for i in range(nef.r):
        for j in range(nef.r):
            value = pair(iv.v[i], iv.w[j])
            # (-1)^{delta_ij} <v_i, w_j> < 0: diagonal positive, off negative.
            assert (value > 0) if i == j else (value < 0)


def test_interior_vectors_pentagon():
    _check_interior_vector_invariants(NefPartition.from_vertex_lists(PENTAGON))


def test_interior_vectors_prism_pair():
    _check_interior_vector_invariants(
        NefPartition.from_vertex_lists(PRISM_PAIR_5D))


def test_dual_rejects_invalid_input():
    # Not a nef-partition: the dual picks up fractional vertices.
    cand = NefPartition.from_vertex_lists([[(1, 1), (-1, -1)],
                                           [(1, -1), (-1, 1)]])
    with pytest.raises(NefPartitionError):
        dual_nef_partition(cand)


def test_dual_part_vertices_have_unit_support_value():
    # Every nonzero dual-part vertex lies on the polar of the sum and its
    # own support function evaluates to one there.
    for lists in (TRIANGLE, PENTAGON, PRISM_PAIR_5D):
        nef = NefPartition.from_vertex_lists(lists)
        dual = dual_nef_partition(nef)
        for i, part in enumerate(dual.parts):
            for v in part.vertices:
                if not any(v):
                    continue
                assert nef.sum_polar.contains(v)
                assert nef.support_value(i, Vector(v, ROLE_N)) == 1


def test_part_pairings_bounded_by_kronecker():
    # <part_i, dual part_j> <= delta_ij on all vertex pairs.
    for lists in (PENTAGON, PRISM_PAIR_5D, SQUARE_SUM):
        nef = NefPartition.from_vertex_lists(lists)
        dual = dual_nef_partition(nef)
        for i, p in enumerate(nef.parts):
            for j, q in enumerate(dual.parts):
                bound = 1 if i == j else 0
                for m in p.vertices:
                    for x in q.vertices:
                        assert sum(a * b for a, b in zip(m, x)) <= bound


def test_interior_vectors_requires_interior_origin():
    # Origin on the boundary of the parts hull: the feasibility search must
    # fail with the dedicated error.
    bad = NefPartition.from_vertex_lists([[(1, 0), (0, 1), (0, 0)]])
    with pytest.raises(NefPartitionError):
        interior_vectors(bad, None)
