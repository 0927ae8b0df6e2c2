"""Charts, discriminant locus, and monodromy of the affine structure.

Chart transitions between minimal transversal cells follow the explicit
affine maps of the model; composing them around a four-node loop of the
bipartite chart graph gives the monodromy, whose linear part is an integral
unipotent transformation of the tangent lattice of the base chart.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import FalsificationError
from .linalg import (
    det,
    dot,
    identity,
    invert_rational,
    saturated_perp_basis,
    saturated_span_basis,
    smith_normal_form,
    solve_rational,
    row_rank,
)
from .sphere import full_subposet_complex


# -- smoothness and the discriminant -----------------------------------------


def smooth_pair(sigma, pair_idx):
    """dim of every slice pair multiplies to zero."""
    i, j = sigma.pairs[pair_idx]
    e_p = sigma.p_poset.elements[i]
    e_q = sigma.q_poset.elements[j]
    for a in range(sigma.r):
        if e_p.slices[a].dim * e_q.slices[a].dim != 0:
            return False
    return True


class DiscriminantComplex:
    """Full subcomplex of bsd(Sigma) on the non-smooth pair vertices."""

    def __init__(self, sigma, vertex_ids, complex_, components,
                 component_homology):
        self.sigma = sigma
        self.vertex_ids = vertex_ids  # pair indices, sorted
        self.complex = complex_
        self.components = components  # lists of pair indices
        self.component_homology = component_homology

    def is_empty(self):
        return not self.vertex_ids


def discriminant(sigma):
    nonsmooth = sorted(k for k in range(len(sigma.pairs))
                       if not smooth_pair(sigma, k))
    cplx = full_subposet_complex(sigma, nonsmooth)
    if not nonsmooth:
        return DiscriminantComplex(sigma, (), cplx, [], [])
    pos_to_pair = {t: k for t, k in enumerate(nonsmooth)}
    comps = []
    homs = []
    for comp in cplx.connected_components():
        comps.append(tuple(pos_to_pair[t] for t in comp))
        homs.append(cplx.full_subcomplex(comp).homology())
    return DiscriminantComplex(sigma, tuple(nonsmooth), cplx, comps, homs)


def smooth_complement_complex(sigma):
    """The full subcomplex of bsd(Sigma) on smooth vertices.

    Its barycentric subdivision is literally the simplicial complement of
    the open star neighborhood of the discriminant inside the second
    barycentric subdivision.
    """
    smooth = sorted(k for k in range(len(sigma.pairs))
                    if smooth_pair(sigma, k))
    return full_subposet_complex(sigma, smooth)


def complement_homology(sigma):
    """Homology of the complement complex, computed on the literal second
    barycentric subdivision (the order complex of the smooth-chain poset)."""
    from .homology import order_complex_homology
    smooth = sorted(k for k in range(len(sigma.pairs))
                    if smooth_pair(sigma, k))
    pos = {k: t for t, k in enumerate(smooth)}
    succ_sigma = sigma.successors()
    sub_succ = [[pos[j] for j in succ_sigma[k] if j in pos] for k in smooth]
    # Enumerate the chains (= simplices of the smooth subcomplex), then take
    # the order complex of their containment poset.
    chains = []
    current = [(t,) for t in range(len(smooth))]
    while current:
        chains.extend(current)
        nxt = []
        for ch in current:
            for j in sub_succ[ch[-1]]:
                nxt.append(ch + (j,))
        current = nxt
    chain_ids = {ch: i for i, ch in enumerate(chains)}
    succ = [[] for _ in chains]
    for ch, i in chain_ids.items():
        n = len(ch)
        if n == 1:
            continue
        for mask in range(1, (1 << n) - 1):
            sub = tuple(ch[t] for t in range(n) if mask >> t & 1)
            j = chain_ids.get(sub)
            if j is not None:
                succ[j].append(i)
    for lst in succ:
        lst.sort()
    return order_complex_homology(len(chains), succ)


# -- charts and the bipartite graph -------------------------------------------


class ChartAtlas:
    """Vertex sets of the chart covering, indexed by minimal transversal cells."""

    def __init__(self, sigma):
        self.sigma = sigma
        self.u_charts = {}
        self.v_charts = {}
        for s in sigma.p_poset.minimal:
            self.u_charts[s] = frozenset(
                k for k, (i, j) in enumerate(sigma.pairs)
                if sigma.p_poset.leq(s, i))
        for t in sigma.q_poset.minimal:
            self.v_charts[t] = frozenset(
                k for k, (i, j) in enumerate(sigma.pairs)
                if sigma.q_poset.leq(t, j))
        self.pair_charts = {
            k: frozenset(k2 for k2 in range(len(sigma.pairs))
                         if sigma.leq(k, k2) or sigma.leq(k2, k))
            for k in range(len(sigma.pairs))}

    def covering_report(self):
        covered = set()
        for chart in self.u_charts.values():
            covered |= chart
        report = {"u_charts_cover": covered == set(range(len(self.sigma.pairs)))}
        covered = set()
        for chart in self.v_charts.values():
            covered |= chart
        report["v_charts_cover"] = covered == set(range(len(self.sigma.pairs)))
        # U_s meets V_t exactly when (s, t) is an adjoint pair.
        edge_ok = True
        for s, us in self.u_charts.items():
            for t, vs in self.v_charts.items():
                if bool(us & vs) != ((s, t) in self.sigma.pair_index):
                    edge_ok = False
        report["chart_overlaps_match_adjacency"] = edge_ok
        # Every chart intersection pattern is witnessed by a transversal cell.
        nerve_ok = True
        mins = sorted(self.u_charts)
        for a_i, a in enumerate(mins):
            for b in mins[a_i + 1:]:
                meet = self.u_charts[a] & self.u_charts[b]
                witnessed = any(
                    self.sigma.p_poset.leq(a, i) and self.sigma.p_poset.leq(b, i)
                    for (i, j) in self.sigma.pairs)
                if bool(meet) != witnessed:
                    nerve_ok = False
        report["nerve_witnessed_by_poset"] = nerve_ok
        report["passed"] = all(v for k, v in report.items() if k != "passed")
        return report


class ChartGraph:
    """Bipartite graph on minimal transversal cells, edges = adjoint pairs."""

    def __init__(self, sigma):
        self.sigma = sigma
        self.p_nodes = tuple(sigma.p_poset.minimal)
        self.q_nodes = tuple(sigma.q_poset.minimal)
        self.edges = tuple(sorted(
            (i, j) for (i, j) in sigma.pairs
            if i in set(self.p_nodes) and j in set(self.q_nodes)))
        self._adj = {}
        for i, j in self.edges:
            self._adj.setdefault(("P", i), []).append(("Q", j))
            self._adj.setdefault(("Q", j), []).append(("P", i))
        for v in self._adj:
            self._adj[v].sort(key=self._node_key)

    def _node_key(self, node):
        side, idx = node
        poset = self.sigma.p_poset if side == "P" else self.sigma.q_poset
        return (side, poset.elements[idx].cell.key())

    def nodes(self):
        return [("P", i) for i in self.p_nodes] + \
               [("Q", j) for j in self.q_nodes]

    def neighbors(self, node):
        return self._adj.get(node, [])

    def components(self):
        seen = set()
        comps = []
        for start in sorted(self.nodes(), key=self._node_key):
            if start in seen:
                continue
            comp = []
            stack = [start]
            while stack:
                v = stack.pop()
                if v in seen:
                    continue
                seen.add(v)
                comp.append(v)
                stack.extend(self.neighbors(v))
            comps.append(sorted(comp, key=self._node_key))
        return comps

    def spanning_tree(self, base):
        """BFS tree: node -> parent (None at the base)."""
        parent = {base: None}
        queue = [base]
        while queue:
            v = queue.pop(0)
            for w in self.neighbors(v):
                if w not in parent:
                    parent[w] = v
                    queue.append(w)
        return parent

    def tree_path(self, parent, node):
        path = [node]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        path.reverse()
        return path


def chart_graph(sigma, atlas=None):
    graph = ChartGraph(sigma)
    if atlas is not None:
        for (i, j) in graph.edges:
            if not (atlas.u_charts[i] & atlas.v_charts[j]):
                raise FalsificationError(
                    "graph edge without chart overlap", {"edge": [i, j]})
    return graph


# -- primary loops and monodromy ----------------------------------------------


@dataclass(frozen=True)
class PrimaryLoop:
    """A four-node loop (sigma0, tau0, sigma1, tau1) in the chart graph."""

    p0: int
    q0: int
    p1: int
    q1: int

    @property
    def degenerate(self):
        return self.p0 == self.p1 or self.q0 == self.q1


def primary_loops(sigma, s_boundary, t_boundary):
    """All four-node loops whose end pairs span cells of S and T.

    Loops with coincident ends on one side are kept (their monodromy is
    trivial) but marked degenerate; fully collapsed loops are dropped.
    """
    p_min = sorted(sigma.p_poset.minimal,
                   key=lambda i: sigma.p_poset.elements[i].cell.key())
    q_min = sorted(sigma.q_poset.minimal,
                   key=lambda j: sigma.q_poset.elements[j].cell.key())
    s_cells = set(s_boundary.cells)
    t_cells = set(t_boundary.cells)
    p_pairs = _span_pairs(sigma.p_poset, p_min, s_cells)
    q_pairs = _span_pairs(sigma.q_poset, q_min, t_cells)
    pair_set = set(sigma.pairs)
    loops = []
    for (a, b) in p_pairs:
        for (c, e) in q_pairs:
            if a == b and c == e:
                continue
            if all(pq in pair_set
                   for pq in ((a, c), (a, e), (b, c), (b, e))):
                loops.append(PrimaryLoop(a, c, b, e))
    return loops


def _span_pairs(poset, minimal, cells):
    """Ordered pairs (i, j), i <= j canonically, whose union spans a cell."""
    from .polytope import convex_hull
    out = []
    for x, i in enumerate(minimal):
        for j in minimal[x:]:
            ci = poset.elements[i].cell
            cj = poset.elements[j].cell
            hull = convex_hull(ci.vertices + cj.vertices, ci.role, ci.ambient)
            if hull in cells:
                out.append((i, j))
    return out


class AffineMap:
    """Exact affine map y -> M y + t on ambient space."""

    __slots__ = ("m", "t")

    def __init__(self, m, t):
        self.m = m
        self.t = t

    @classmethod
    def identity(cls, d):
        return cls(identity(d), (Fraction(0),) * d)

    def apply(self, y):
        return tuple(dot(row, y) + c for row, c in zip(self.m, self.t))

    def apply_linear(self, y):
        return tuple(dot(row, y) for row in self.m)

    def compose(self, other):
        """self after other."""
        m = tuple(tuple(dot(row, col) for col in zip(*other.m))
                  for row in self.m)
        t = tuple(x + c for x, c in zip(self.apply_linear(other.t), self.t))
        return AffineMap(m, t)


def chart_transition(dst_cell, via_cell, weight, ambient):
    """The map into the destination chart through a common adjoint partner.

    y -> y - sum_j [<dst_j, y> - w(dst_j)] via_j,  where dst_j are the slice
    points of the destination minimal cell and via_j those of the shared
    minimal partner on the other side.
    """
    r = len(dst_cell.slices)
    m = [[Fraction(int(a == b)) for b in range(ambient)]
         for a in range(ambient)]
    t = [Fraction(0)] * ambient
    for j in range(r):
        dst_j = dst_cell.slice_vertex(j)
        via_j = via_cell.slice_vertex(j)
        for a in range(ambient):
            for b in range(ambient):
                m[a][b] -= via_j[a] * dst_j[b]
            t[a] += weight(dst_j) * via_j[a]
    return AffineMap(tuple(tuple(row) for row in m), tuple(t))


@dataclass
class AffineMonodromy:
    loop: PrimaryLoop
    basis: tuple          # rows: canonical lattice basis of the tangent space
    base_point: tuple     # rational solution of <m, x> = w(m) over the base cell
    linear: tuple         # (d-r) x (d-r) integer matrix in the basis
    translation: tuple    # (d-r) rationals
    ambient: AffineMap    # the underlying ambient affine map


def loop_ambient_map(sigma, loop, weight):
    """Ambient form of the holonomy around the loop, based at its first cell."""
    p_el = sigma.p_poset.elements
    q_el = sigma.q_poset.elements
    d = p_el[loop.p0].cell.ambient
    first = chart_transition(p_el[loop.p1], q_el[loop.q0], weight, d)
    second = chart_transition(p_el[loop.p0], q_el[loop.q1], weight, d)
    return second.compose(first)


def base_chart_data(base_cell, weight):
    """(lattice basis of the tangent space, base point) of a minimal cell."""
    r = len(base_cell.slices)
    d = base_cell.cell.ambient
    rows = [tuple(int(x) for x in base_cell.slice_vertex(j)) for j in range(r)]
    if row_rank(rows) != r:
        raise FalsificationError(
            "minimal transversal cell is not linearly independent",
            {"cell": [[str(x) for x in v] for v in base_cell.cell.vertices]})
    basis = saturated_perp_basis(rows, d)
    gram = [[dot(a, b) for b in rows] for a in rows]
    ginv = invert_rational(gram)
    rhs = [weight(base_cell.slice_vertex(j)) for j in range(r)]
    z = [sum(ginv[i][j] * rhs[j] for j in range(r)) for i in range(r)]
    x0 = tuple(sum(z[i] * Fraction(rows[i][a]) for i in range(r))
               for a in range(d))
    return basis, x0


def restrict_to_chart(amb, basis, x0):
    """Express an ambient affine self-map of the chart in lattice coordinates.

    Returns (linear, translation); raises a falsification certificate when
    the map does not preserve the chart or is not integral unimodular
    unipotent of order two.
    """
    d = len(x0)
    k = len(basis)
    lin_rows = []
    for b in basis:
        image = amb.apply_linear(tuple(Fraction(x) for x in b))
        coords = solve_rational([list(col) for col in zip(*basis)], image) \
            if k else ()
        if coords is None or any(c.denominator != 1 for c in coords):
            raise FalsificationError(
                "monodromy linear part is not integral on the tangent lattice",
                {"vector": [str(x) for x in image]})
        lin_rows.append(tuple(int(c) for c in coords))
    linear = _transpose_int(lin_rows, k)
    x0_image = amb.apply(x0)
    diff = tuple(a - b for a, b in zip(x0_image, x0))
    tcoords = solve_rational([list(col) for col in zip(*basis)], diff) \
        if k else ()
    if tcoords is None:
        raise FalsificationError(
            "monodromy does not preserve the base chart",
            {"base_point_image": [str(x) for x in x0_image]})
    if k and det(linear) != 1:
        raise FalsificationError("monodromy determinant is not one",
                                 {"linear": [list(r) for r in linear]})
    nil = _mat_sub_identity(linear)
    sq = _int_mat_mul(nil, nil)
    if any(any(row) for row in sq):
        raise FalsificationError("monodromy is not unipotent of order two",
                                 {"linear": [list(r) for r in linear]})
    return linear, tuple(tcoords)


def _transpose_int(rows, k):
    if k == 0:
        return ()
    return tuple(tuple(rows[j][i] for j in range(k)) for i in range(k))


def _mat_sub_identity(m):
    return tuple(tuple(v - int(i == j) for j, v in enumerate(row))
                 for i, row in enumerate(m))


def _int_mat_mul(a, b):
    if not a:
        return ()
    bt = list(zip(*b))
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def monodromy(sigma, loop, weight):
    """The affine holonomy around a primary loop, in canonical coordinates."""
    base = sigma.p_poset.elements[loop.p0]
    basis, x0 = base_chart_data(base, weight)
    amb = loop_ambient_map(sigma, loop, weight)
    linear, translation = restrict_to_chart(amb, basis, x0)
    return AffineMonodromy(loop, basis, x0, linear, translation, amb)


# -- checks around loops -------------------------------------------------------


def triviality_equivalence_check(sigma, loop, mono):
    """Equivalence of: trivial holonomy; existence of an enclosing smooth
    pair; and the absence of an index changing on both sides of the loop.

    (A common changing index forces non-trivial holonomy: pairing a
    functional positive on the moved slice point against a vector positive
    on the moved partner slice gives a strictly positive displacement.)
    Degenerate loops are reported separately and must be trivial.
    """
    if loop.degenerate:
        return {"degenerate": True, "trivial": _is_identity(mono), "passed":
                _is_identity(mono)}
    cond1 = _is_identity(mono)
    cond2 = False
    for k, (i, j) in enumerate(sigma.pairs):
        if smooth_pair(sigma, k) and \
                sigma.p_poset.leq(loop.p0, i) and sigma.p_poset.leq(loop.p1, i) \
                and sigma.q_poset.leq(loop.q0, j) and \
                sigma.q_poset.leq(loop.q1, j):
            cond2 = True
            break
    common_changing_index = False
    p0 = sigma.p_poset.elements[loop.p0]
    p1 = sigma.p_poset.elements[loop.p1]
    q0 = sigma.q_poset.elements[loop.q0]
    q1 = sigma.q_poset.elements[loop.q1]
    for j in range(sigma.r):
        if p0.slice_vertex(j) != p1.slice_vertex(j) and \
                q0.slice_vertex(j) != q1.slice_vertex(j):
            common_changing_index = True
            break
    cond3 = not common_changing_index
    return {"degenerate": False, "trivial": cond1,
            "smooth_hull_pair": cond2,
            "common_changing_index": common_changing_index,
            "passed": cond1 == cond2 == cond3}


def _is_identity(mono):
    k = len(mono.basis)
    return mono.linear == identity(k) and \
        all(t == 0 for t in mono.translation)


def local_group(sigma, pair_idx, weight):
    """Monodromies of all loops inside the star of a single pair vertex.

    Verifies the abelian upper-triangular structure: commuting generators,
    image inside the tangent space of the tau-side Minkowski cell, and
    vanishing on it.
    """
    i, j = sigma.pairs[pair_idx]
    p_poset, q_poset = sigma.p_poset, sigma.q_poset
    p_min = sorted(s for s in p_poset.minimal if p_poset.leq(s, i))
    q_min = sorted(t for t in q_poset.minimal if q_poset.leq(t, j))
    base_idx = p_min[0]
    base = p_poset.elements[base_idx]
    basis, x0 = base_chart_data(base, weight)
    d = base.cell.ambient
    r = sigma.r
    mats = []
    for pk in p_min:
        for a in range(len(q_min)):
            for b in range(len(q_min)):
                if a == b and pk == base_idx:
                    continue
                loop = PrimaryLoop(base_idx, q_min[a], pk, q_min[b])
                amb = loop_ambient_map(sigma, loop, weight)
                linear, _ = restrict_to_chart(amb, basis, x0)
                mats.append(linear)
    # W: span of the slice-point differences over the tau side.
    diffs = []
    for a in range(len(q_min)):
        for b in range(a + 1, len(q_min)):
            qa = q_poset.elements[q_min[a]]
            qb = q_poset.elements[q_min[b]]
            for jj in range(r):
                diff = tuple(int(x - y) for x, y in
                             zip(qa.slice_vertex(jj), qb.slice_vertex(jj)))
                if any(diff):
                    diffs.append(diff)
    w_basis = saturated_span_basis(diffs, d) if diffs else ()
    tau_dim = q_poset.elements[j].cell.dim
    sigma_dim = p_poset.elements[i].cell.dim
    report = {
        "w_dimension_matches": len(w_basis) == tau_dim - r + 1,
        "commuting": _pairwise_commute(mats),
        "image_in_w": True,
        "vanishes_on_w": True,
        "block_rows": len(w_basis),
        "block_cols_bound": sigma_dim - r + 1,
        "loops": len(mats),
    }
    # Work in chart coordinates: express W inside the basis.
    w_coords = []
    for w in w_basis:
        coords = solve_rational([list(col) for col in zip(*basis)], w)
        if coords is None or any(c.denominator != 1 for c in coords):
            report["image_in_w"] = False
            report["vanishes_on_w"] = False
            break
        w_coords.append(tuple(int(c) for c in coords))
    else:
        for m in mats:
            nil = _mat_sub_identity(m)
            k = len(basis)
            for col in range(k):
                image = tuple(nil[row][col] for row in range(k))
                if any(image):
                    sol = solve_rational(
                        [list(c) for c in zip(*w_coords)], image) \
                        if w_coords else None
                    if sol is None:
                        report["image_in_w"] = False
            for w in w_coords:
                if any(dot(row, w) for row in nil):
                    report["vanishes_on_w"] = False
    report["passed"] = (report["w_dimension_matches"] and report["commuting"]
                        and report["image_in_w"] and report["vanishes_on_w"])
    return report


def _pairwise_commute(mats):
    for x in range(len(mats)):
        for y in range(x + 1, len(mats)):
            if _int_mat_mul(mats[x], mats[y]) != _int_mat_mul(mats[y], mats[x]):
                return False
    return True


# -- global analysis -----------------------------------------------------------


def global_group(sigma, graph, loops, weight, discriminant_complex=None):
    """Transport every primary loop to a fixed base chart and analyze the
    resulting subgroup: commutation, the Smith divisors of the log lattice,
    and per-discriminant-component sublattices."""
    if not graph.p_nodes:
        return {"trivial": True, "divisors": [], "commuting": True,
                "component_divisors": {}, "graph_components": 0,
                "transported": 0, "skipped_other_component": 0}
    base_node = min(("P", i) for i in graph.p_nodes)
    comps = graph.components()
    base_comp = next(c for c in comps if base_node in c)
    parent = graph.spanning_tree(base_node)
    base = sigma.p_poset.elements[base_node[1]]
    basis, x0 = base_chart_data(base, weight)
    d = base.cell.ambient
    transported = []
    skipped = 0
    loop_component = []
    for loop in loops:
        node = ("P", loop.p0)
        if node not in parent:
            skipped += 1
            continue
        path = graph.tree_path(parent, node)
        fwd = AffineMap.identity(d)
        for step in range(0, len(path) - 1, 2):
            dst = sigma.p_poset.elements[path[step + 2][1]]
            via = sigma.q_poset.elements[path[step + 1][1]]
            fwd = chart_transition(dst, via, weight, d).compose(fwd)
        back = AffineMap.identity(d)
        for step in range(len(path) - 1, 1, -2):
            dst = sigma.p_poset.elements[path[step - 2][1]]
            via = sigma.q_poset.elements[path[step - 1][1]]
            back = chart_transition(dst, via, weight, d).compose(back)
        amb = back.compose(loop_ambient_map(sigma, loop, weight)).compose(fwd)
        linear, _ = restrict_to_chart(amb, basis, x0)
        transported.append(linear)
        loop_component.append(_loop_discriminant_component(
            sigma, loop, discriminant_complex))
    k = len(basis)
    logs = []
    for m in transported:
        nil = _mat_sub_identity(m)
        flat = tuple(v for row in nil for v in row)
        if any(flat):
            logs.append(flat)
    divisors, rank = smith_normal_form(logs) if logs else ((), 0)
    comp_divisors = {}
    if discriminant_complex is not None:
        per_comp = {}
        for mat, comp in zip(transported, loop_component):
            if comp is None:
                continue
            nil = _mat_sub_identity(mat)
            flat = tuple(v for row in nil for v in row)
            if any(flat):
                per_comp.setdefault(comp, []).append(flat)
        for comp, vecs in sorted(per_comp.items()):
            divs, _ = smith_normal_form(vecs)
            comp_divisors[comp] = list(divs)
    return {
        "trivial": not logs,
        "divisors": list(divisors),
        "log_rank": rank,
        "commuting": _pairwise_commute(transported),
        "component_divisors": comp_divisors,
        "graph_components": len(comps),
        "transported": len(transported),
        "skipped_other_component": skipped,
        "base_component_size": len(base_comp),
    }


def _loop_discriminant_component(sigma, loop, disc):
    """The discriminant component whose star contains the loop, if unique."""
    if disc is None or disc.is_empty():
        return None
    hits = set()
    for ci, comp in enumerate(disc.components):
        for k in comp:
            i, j = sigma.pairs[k]
            if sigma.p_poset.leq(loop.p0, i) and sigma.p_poset.leq(loop.p1, i) \
                    and sigma.q_poset.leq(loop.q0, j) and \
                    sigma.q_poset.leq(loop.q1, j):
                hits.add(ci)
                break
    if len(hits) == 1:
        return hits.pop()
    return None


# -- duality -------------------------------------------------------------------


def duality_check(sigma, loop, mono, dual_sigma, dual_weight):
    """Transpose-inverse pairing of the primal and dual loop monodromies.

    The dual loop is (tau0, sigma1, tau1, sigma0), run through the dual
    pipeline (roles interchanged); the pairing between the two tangent
    lattices must be preserved exactly.
    """
    q0_cell = sigma.q_poset.elements[loop.q0].cell
    q1_cell = sigma.q_poset.elements[loop.q1].cell
    p0_cell = sigma.p_poset.elements[loop.p0].cell
    p1_cell = sigma.p_poset.elements[loop.p1].cell
    dp = dual_sigma.p_poset
    dq = dual_sigma.q_poset
    dual_loop = PrimaryLoop(
        p0=_index_by_cell(dp, q0_cell), q0=_index_by_cell(dq, p1_cell),
        p1=_index_by_cell(dp, q1_cell), q1=_index_by_cell(dq, p0_cell))
    dual_mono = monodromy(dual_sigma, dual_loop, dual_weight)
    b_sigma = mono.basis
    b_tau = dual_mono.basis
    pairing = [[dot(y, x) for x in b_sigma] for y in b_tau]
    if _rational_matrix_rank(pairing) != len(b_sigma):
        raise FalsificationError(
            "degenerate pairing between tangent lattices",
            {"pairing": [list(map(int, row)) for row in pairing]})
    ok = True
    for y in b_tau:
        ly = dual_mono.ambient.apply_linear(tuple(Fraction(v) for v in y))
        for x in b_sigma:
            lx = mono.ambient.apply_linear(tuple(Fraction(v) for v in x))
            if dot(ly, lx) != dot(y, x):
                ok = False
    return {"passed": ok, "dual_loop_degenerate": dual_loop.degenerate}


def _index_by_cell(poset, cell):
    idx = poset.index_of_cell(cell)
    if idx is None:
        raise FalsificationError(
            "dual pipeline poset does not contain the expected cell",
            {"cell": [[str(x) for x in v] for v in cell.vertices]})
    return idx


def _rational_matrix_rank(rows):
    return row_rank([tuple(r) for r in rows]) if rows else 0
