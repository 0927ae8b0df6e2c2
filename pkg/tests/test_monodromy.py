from nefsphere.linalg import identity
from nefsphere.monodromy import (
    AffineMap,
    ChartAtlas,
    complement_homology,
    discriminant,
    smooth_pair,
)


def _nilpotent(linear):
    return tuple(tuple(v - int(i == j) for j, v in enumerate(row))
                 for i, row in enumerate(linear))


def test_smooth_pairs_with_minimal_factor(simplex3_pipe):
    sigma = simplex3_pipe.sigma()
    p_min = set(sigma.p_poset.minimal)
    q_min = set(sigma.q_poset.minimal)
    for k, (i, j) in enumerate(sigma.pairs):
        if i in p_min or j in q_min:
            assert smooth_pair(sigma, k)


def test_discriminant_empty_in_low_dimension(triangle_pipe, pentagon_pipe):
    # d - r = 1 (and 0): no pair can be non-smooth, D is empty.
    for pipe in (triangle_pipe, pentagon_pipe):
        assert discriminant(pipe.sigma()).is_empty()


def test_discriminant_simplex3_isolated_points(simplex3_pipe):
    disc = simplex3_pipe.discriminant()
    # Regression: six isolated vertices (edge-edge adjoint pairs).
    assert len(disc.vertex_ids) == 6
    assert len(disc.components) == 6
    assert all(h == [(1, ())] for h in disc.component_homology)


def test_atlas_covering(simplex3_pipe, triangle_pipe):
    for pipe in (simplex3_pipe, triangle_pipe):
        report = ChartAtlas(pipe.sigma()).covering_report()
        assert report["passed"], report


def test_chart_graph_edges_are_adjoint_minimal_pairs(simplex3_pipe):
    sigma = simplex3_pipe.sigma()
    graph = simplex3_pipe.graph()
    p_min = set(sigma.p_poset.minimal)
    q_min = set(sigma.q_poset.minimal)
    for (i, j) in graph.edges:
        assert i in p_min and j in q_min
        assert (i, j) in sigma.pair_index


def test_degenerate_loops_are_trivial(simplex3_pipe):
    for loop, mono in zip(simplex3_pipe.loops(), simplex3_pipe.monodromies()):
        if loop.degenerate:
            k = len(mono.basis)
            assert mono.linear == identity(k)
            assert all(t == 0 for t in mono.translation)


def test_monodromy_unipotent(simplex3_pipe):
    for mono in simplex3_pipe.monodromies():
        nil = _nilpotent(mono.linear)
        sq = [[sum(nil[i][k] * nil[k][j] for k in range(len(nil)))
               for j in range(len(nil))] for i in range(len(nil))]
        assert all(all(v == 0 for v in row) for row in sq)


def test_focus_focus_multiplicity_four(simplex3_pipe):
    # Each of the six isolated discriminant points carries a single
    # focus-focus generator whose log has content 4 (dual edge length).
    report = simplex3_pipe.global_report()
    assert report["component_divisors"] == {i: [4] for i in range(6)}
    assert report["log_rank"] == 3


def test_local_groups(simplex3_pipe):
    reports = simplex3_pipe.local_group_suite()
    assert reports, "no non-smooth vertices on the 3d simplex"
    for rep in reports.values():
        assert rep["passed"], rep


def test_triviality_equivalence(simplex3_pipe, triangle_pipe, square_pipe,
                                pentagon_pipe):
    for pipe in (simplex3_pipe, triangle_pipe, square_pipe, pentagon_pipe):
        for res in pipe.triviality_suite():
            assert res["passed"], res


def test_2d_loops_all_trivial(triangle_pipe):
    # d - r = 1: every primary loop is trivial.
    for res in triangle_pipe.triviality_suite():
        assert res.get("trivial") or res.get("degenerate")


def test_complement_homology_simplex3(simplex3_pipe):
    # S^2 minus 6 points retracts to a wedge of 5 circles.
    assert complement_homology(simplex3_pipe.sigma()) == \
        [(1, ()), (5, ()), (0, ())]


def test_complement_homology_no_discriminant(triangle_pipe):
    # Empty discriminant: the complement is the sphere itself.
    assert complement_homology(triangle_pipe.sigma()) == \
        triangle_pipe.sigma_homology()


def test_duality_pairing(simplex3_pipe, pentagon_pipe):
    for pipe in (simplex3_pipe, pentagon_pipe):
        results = pipe.duality_suite()
        assert all(r["passed"] for r in results)


def test_parallel_transport_roundtrip(simplex3_pipe):
    # Transporting the trivial loop around a tree edge is the identity on
    # the base chart: composition of a transition with its reverse.
    sigma = simplex3_pipe.sigma()
    graph = simplex3_pipe.graph()
    base = ("P", graph.p_nodes[0])
    parent = graph.spanning_tree(base)
    leaf = next(n for n in parent if n[0] == "P" and n != base
                and parent[n] is not None)
    path = graph.tree_path(parent, leaf)
    from nefsphere.monodromy import chart_transition, base_chart_data, \
        restrict_to_chart
    w = simplex3_pipe.omega()
    d = simplex3_pipe.nef.ambient
    fwd = AffineMap.identity(d)
    for step in range(0, len(path) - 1, 2):
        dst = sigma.p_poset.elements[path[step + 2][1]]
        via = sigma.q_poset.elements[path[step + 1][1]]
        fwd = chart_transition(dst, via, w, d).compose(fwd)
    back = AffineMap.identity(d)
    for step in range(len(path) - 1, 1, -2):
        dst = sigma.p_poset.elements[path[step - 2][1]]
        via = sigma.q_poset.elements[path[step - 1][1]]
        back = chart_transition(dst, via, w, d).compose(back)
    basis, x0 = base_chart_data(sigma.p_poset.elements[base[1]], w)
    linear, translation = restrict_to_chart(back.compose(fwd), basis, x0)
    assert linear == identity(len(basis))
    assert all(t == 0 for t in translation)


def test_global_group_base_invariance(simplex3_pipe):
    # Divisors are stable under relabeling the base chart: run the analysis
    # on the role-swapped pipeline, which picks a different base.
    primal = simplex3_pipe.global_report()
    dual = simplex3_pipe.dual_pipeline().global_report()
    assert primal["divisors"] == dual["divisors"]


def test_chart_graph_square_one_edge_per_point(square_pipe):
    # d - r = 0: each point of the product sphere is its own chart pair.
    assert len(square_pipe.graph().edges) == 4


def test_global_group_trivial_without_discriminant(triangle_pipe):
    assert triangle_pipe.global_report()["trivial"]


def test_holonomy_formula_matches_transition_composition(simplex3_pipe):
    # Independent check of the loop map: on the base chart's affine subspace
    # the composition of the two chart transitions equals the closed formula
    # x + sum_j [<s1_j, x> - w(s1_j)](t1_j - t0_j).
    from fractions import Fraction
    from nefsphere.monodromy import base_chart_data, loop_ambient_map
    sigma = simplex3_pipe.sigma()
    w = simplex3_pipe.omega()
    d = simplex3_pipe.nef.ambient
    for loop in simplex3_pipe.loops()[:40]:
        amb = loop_ambient_map(sigma, loop, w)
        base = sigma.p_poset.elements[loop.p0]
        basis, x0 = base_chart_data(base, w)
        p1 = sigma.p_poset.elements[loop.p1]
        q0 = sigma.q_poset.elements[loop.q0]
        q1 = sigma.q_poset.elements[loop.q1]
        samples = [x0]
        for b in basis:
            samples.append(tuple(c + 2 * e for c, e in zip(x0, b)))
        for x in samples:
            got = amb.apply(x)
            want = list(x)
            for j in range(sigma.r):
                s1 = p1.slice_vertex(j)
                coeff = sum(a * b for a, b in zip(s1, x)) - w(s1)
                t0, t1 = q0.slice_vertex(j), q1.slice_vertex(j)
                for a in range(d):
                    want[a] += coeff * (t1[a] - t0[a])
            assert got == tuple(want)


def test_every_nonsmooth_vertex_obstructs_extension(simplex3_pipe,
                                                    prism_pair_pipe):
    # The affine structure must fail to extend across every vertex of the
    # discriminant: some local loop has nontrivial linear part.
    from nefsphere.monodromy import (PrimaryLoop, base_chart_data,
                                     loop_ambient_map, restrict_to_chart)
    for pipe in (simplex3_pipe, prism_pair_pipe):
        sigma = pipe.sigma()
        w = pipe.omega()
        for k, (i, j) in enumerate(sigma.pairs):
            if smooth_pair(sigma, k):
                continue
            p_min = sorted(s for s in sigma.p_poset.minimal
                           if sigma.p_poset.leq(s, i))
            q_min = sorted(t for t in sigma.q_poset.minimal
                           if sigma.q_poset.leq(t, j))
            base = sigma.p_poset.elements[p_min[0]]
            basis, x0 = base_chart_data(base, w)
            found = False
            for pk in p_min:
                for a in q_min:
                    for b in q_min:
                        if a == b:
                            continue
                        amb = loop_ambient_map(
                            sigma, PrimaryLoop(p_min[0], a, pk, b), w)
                        lin, _ = restrict_to_chart(amb, basis, x0)
                        if lin != identity(len(basis)):
                            found = True
                            break
                    if found:
                        break
                if found:
                    break
            assert found, f"no obstruction at non-smooth vertex {k}"


def test_generic_weight_simplex3_spreads_multiplicity():
    # With a generic coherent weight on the dual side the six multiplicity-4
    # points of the coarse model spread into the classical 24 primitive
    # focus-focus points; the sphere homology is unchanged.
    from fractions import Fraction
    from nefsphere import NefPartition, Pipeline

    nef = NefPartition.from_vertex_lists(
        [[(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)]])
    eps = Fraction(1, 64)
    diag = [Fraction(3, 7), Fraction(5, 11), Fraction(7, 13)]
    cross = {(0, 1): Fraction(1, 23), (0, 2): Fraction(1, 29),
             (1, 2): Fraction(1, 41)}

    def bump(pt):
        s = Fraction(0)
        for i in range(3):
            s += diag[i] * pt[i] * pt[i]
        for (i, j), c in cross.items():
            s += c * pt[i] * pt[j]
        return 1 + eps * s

    omega = [(pt, Fraction(0) if not any(pt) else bump(pt))
             for pt in nef.parts_hull.lattice_points()]
    nu = [(pt, Fraction(0) if not any(pt) else bump(pt))
          for pt in nef.sum_polar.lattice_points()]
    pipe = Pipeline(nef, omega_spec=omega, nu_spec=nu)
    assert pipe.sigma_homology() == [(1, ()), (0, ()), (1, ())]
    disc = pipe.discriminant()
    assert len(disc.components) == 24
    assert all(len(c) == 1 for c in disc.components)
    g = pipe.global_report()
    assert g["component_divisors"] == {i: [1] for i in range(24)}
    assert g["log_rank"] == 3
