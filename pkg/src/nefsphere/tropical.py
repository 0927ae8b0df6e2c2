"""Tropical cells, amoebas, and the bounded tropical complex.

A cell of the lifted lower hull determines the locus where its lattice
points simultaneously realize the maximum of <m, y> - w(m); cells of
positive dimension assemble into the amoeba.  The bounded subcomplex indexed
by the coned transversal cells is the tropical model of the dual sphere.
"""

from fractions import Fraction

from .errors import FalsificationError
from .linalg import clear_denominators
from .polytope import (
    GeometryError,
    Polyhedron,
    convex_hull,
    intersect,
    minkowski_sum_all,
)
from .subdivision import lower_hull_subdivision


class TropicalCell:
    """The dual cell of a lower-hull cell, as an explicit polyhedron."""

    __slots__ = ("generator", "poly", "support_key")

    def __init__(self, generator, poly, support_key):
        self.generator = generator
        self.poly = poly
        self.support_key = support_key

    @property
    def bounded(self):
        return self.poly.is_bounded()

    def dim(self):
        return self.poly.dim()

    def key(self):
        return self.poly.key()


def tropical_cell(cone_cell, weight, support):
    """The locus where all vertices of the cell realize the tropical maximum."""
    verts = cone_cell.vertices
    m0 = verts[0]
    eqs = []
    for m in verts[1:]:
        u = tuple(Fraction(a) - Fraction(b) for a, b in zip(m, m0))
        c = weight(m0) - weight(m)
        eqs.append(clear_denominators((c,) + u))
    ineqs = []
    for mpp in support.lattice_points():
        u = tuple(Fraction(a) - Fraction(b) for a, b in zip(m0, mpp))
        c = weight(mpp) - weight(m0)
        row = clear_denominators((c,) + u)
        if any(row):
            ineqs.append(row)
    poly = Polyhedron.from_hrep(eqs, ineqs, _dual_role(support.role),
                                support.ambient)
    if poly is None:
        raise GeometryError("not a lower-hull cell for these weights")
    return TropicalCell(cone_cell, poly, support.key())


def _dual_role(role):
    return "N" if role == "M" else "M"


def amoeba(subdivision):
    """All dual cells of positive-dimension subdivision cells.

    The subdivision is a coned (lower-hull) subdivision of its support; the
    support's weight function supplies the heights.
    """
    out = []
    for cell in subdivision.cells():
        if cell.dim > 0:
            out.append(tropical_cell(cell, subdivision.weight,
                                     subdivision.support))
    out.sort(key=lambda t: t.generator.key())
    return out


def tropical_zero_cell(support, weight, role=None):
    """{y : <m, y> <= w(m) for every lattice point m of the support}."""
    rows = []
    for m in support.lattice_points():
        row = clear_denominators((weight(m),) + tuple(-x for x in m))
        rows.append(row)
    from .polytope import polytope_from_hrep
    return polytope_from_hrep([], rows, role or _dual_role(support.role),
                              support.ambient)


class TropicalComplex:
    """The bounded cells dual to coned transversal cells (one per poset element)."""

    def __init__(self, poset, cells):
        self.poset = poset
        self.cells = cells  # list parallel to poset.elements

    def __len__(self):
        return len(self.cells)


def bounded_tropical_complex(p_poset, boundary, ambient_dim):
    """Build the bounded tropical complex over the transversal poset.

    Verifies that every cell is bounded, that dimensions are complementary,
    and that the face relation is opposite to the poset order.
    """
    subdivision = boundary.parent
    cells = []
    for e in p_poset.elements:
        coned = boundary.coned(e.cell)
        tc = tropical_cell(coned, subdivision.weight, subdivision.support)
        if not tc.bounded:
            raise FalsificationError(
                "tropical cell of a transversal cell is unbounded",
                {"cell": [[str(x) for x in v] for v in e.cell.vertices],
                 "rays": [list(r) for r in tc.poly.rays],
                 "lineality": [list(l) for l in tc.poly.lineality]})
        if tc.dim() != ambient_dim - coned.dim:
            raise FalsificationError(
                "tropical cell dimension is not complementary",
                {"cell_dim": coned.dim, "dual_dim": tc.dim()})
        cells.append(tc)
    complex_ = TropicalComplex(p_poset, cells)
    _verify_opposite_order(complex_)
    return complex_


def _verify_opposite_order(complex_):
    poset = complex_.poset
    n = len(poset)
    for i in range(n):
        for j in range(n):
            geom = _poly_contains_poly(complex_.cells[i].poly,
                                       complex_.cells[j].poly)
            if geom != poset.leq(i, j):
                raise FalsificationError(
                    "tropical face order is not opposite to the poset order",
                    {"i": i, "j": j, "poset_leq": poset.leq(i, j),
                     "geometric_containment": geom})


def _poly_contains_poly(big, small):
    """All generators of `small` lie in `big` (bounded cells: vertices only)."""
    return all(big.contains(v) for v in small.vertices)


def order_complex_check(complex_):
    """The barycenter map is an order anti-isomorphism onto the poset."""
    poset = complex_.poset
    n = len(poset)
    keys = [c.key() for c in complex_.cells]
    report = {"injective": len(set(keys)) == n, "anti_isomorphism": True}
    for i in range(n):
        for j in range(n):
            if poset.leq(i, j) != _poly_contains_poly(complex_.cells[i].poly,
                                                      complex_.cells[j].poly):
                report["anti_isomorphism"] = False
    report["passed"] = report["injective"] and report["anti_isomorphism"]
    return report


def bounded_amoeba_matches_zero_cell(amoeba_cells, f0):
    """Bounded amoeba cells coincide with the proper faces of the zero cell."""
    bounded = {convex_hull(t.poly.vertices, t.poly.role, t.poly.ambient)
               for t in amoeba_cells if t.bounded}
    faces = {f0.face_polytope(fs) for fs, d in f0.face_sets().items()
             if d < f0.dim}
    return {
        "bounded_cells": len(bounded),
        "proper_zero_cell_faces": len(faces),
        "passed": bounded == faces,
    }


def bounded_cells_check(parts, part_subdivisions, boundary, p_poset,
                        tropical_cplx):
    """The bounded common refinement of the part amoebas equals the complex.

    Checks cell-wise F_cone = intersection of the per-part tropical cells of
    the sliced cones, and that every bounded refinement cell lands inside a
    single complex cell.
    """
    subdivision = boundary.parent
    support = subdivision.support
    ambient = support.ambient
    report = {"cellwise_equal": True, "refinement_inside_complex": True,
              "complex_cells_realized": True, "sliced_cones_are_cells": True}
    part_cells = []
    part_tropical = {}
    for sub in part_subdivisions:
        cellset = {}
        for c in sub.cells():
            cellset[c] = c
        part_cells.append(cellset)
    # Cell-wise equality over transversal cells.
    for k, e in enumerate(p_poset.elements):
        coned = boundary.coned(e.cell)
        pieces = []
        ok = True
        for i, sub in enumerate(part_subdivisions):
            sliced = intersect(coned, parts[i])
            if sliced is None or sliced not in part_cells[i]:
                report["sliced_cones_are_cells"] = False
                ok = False
                break
            key = (i, sliced)
            if key not in part_tropical:
                part_tropical[key] = tropical_cell(sliced, sub.weight,
                                                   sub.support)
            pieces.append(part_tropical[key])
        if not ok:
            continue
        eqs = [row for t in pieces for row in t.poly.eq_rows]
        ineqs = [row for t in pieces for row in t.poly.ineq_rows]
        meet = Polyhedron.from_hrep(eqs, ineqs, pieces[0].poly.role, ambient)
        if meet is None or meet.key() != tropical_cplx.cells[k].poly.key():
            report["cellwise_equal"] = False
    # Refinement side: every bounded intersection of positive-dimension part
    # cells lies inside some complex cell.
    tropical_by_part = []
    for i, sub in enumerate(part_subdivisions):
        cells_i = []
        for c in sub.cells():
            if c.dim > 0:
                cells_i.append(tropical_cell(c, sub.weight, sub.support))
        tropical_by_part.append(cells_i)
    tuples = [()]
    for cells_i in tropical_by_part:
        tuples = [t + (c,) for t in tuples for c in cells_i]
    realized = set()
    complex_keys = {c.poly.key(): idx
                    for idx, c in enumerate(tropical_cplx.cells)}
    for combo in tuples:
        eqs = [row for t in combo for row in t.poly.eq_rows]
        ineqs = [row for t in combo for row in t.poly.ineq_rows]
        meet = Polyhedron.from_hrep(eqs, ineqs, combo[0].poly.role, ambient)
        if meet is None or not meet.is_bounded():
            continue
        if meet.key() in complex_keys:
            realized.add(complex_keys[meet.key()])
        holder = None
        for c in tropical_cplx.cells:
            if all(c.poly.contains(v) for v in meet.vertices):
                holder = c
                break
        if holder is None:
            report["refinement_inside_complex"] = False
    if len(realized) != len(tropical_cplx.cells):
        report["complex_cells_realized"] = False
    report["passed"] = all(v for k, v in report.items() if k != "passed")
    return report


def mixed_subdivision_check(parts, subdivision, delta):
    """The per-cell slice sums tile the sum polytope (exact volumes)."""
    report = {"full_dimensional": True, "volume_matches": True,
              "interiors_disjoint": True}
    chart = delta.chart()
    total = Fraction(0)
    mixed = []
    for cell in subdivision.maximal_cells:
        slices = [intersect(cell, p) for p in parts]
        if any(s is None for s in slices):
            report["full_dimensional"] = False
            continue
        cell_sum = minkowski_sum_all(slices)
        if cell_sum.dim != delta.dim:
            report["full_dimensional"] = False
            continue
        mixed.append(cell_sum)
        total += cell_sum.volume_in_chart(chart)
    if total != delta.volume_in_chart(chart):
        report["volume_matches"] = False
    for i in range(len(mixed)):
        for j in range(i + 1, len(mixed)):
            meet = intersect(mixed[i], mixed[j])
            if meet is not None and meet.dim == delta.dim:
                report["interiors_disjoint"] = False
    report["passed"] = all(v for k, v in report.items() if k != "passed")
    return report


def part_subdivision(part, weight):
    """The lower-hull subdivision induced on a part by restricting the weight."""
    return lower_hull_subdivision(part, weight.restrict(part))


def scene_export(cells, project=None):
    """JSON-ready cell list (vertices, rays, dim, generator), optionally
    projected to chosen coordinate indices."""
    def proj(vec):
        if project is None:
            return [str(x) for x in vec]
        return [str(vec[i]) for i in project]

    out = []
    for t in sorted(cells, key=lambda c: c.generator.key()):
        out.append({
            "generator": [[str(x) for x in v] for v in t.generator.vertices],
            "vertices": [proj(v) for v in t.poly.vertices],
            "rays": [proj(r) for r in t.poly.rays],
            "lineality": [proj(l) for l in t.poly.lineality],
            "dim": t.dim(),
            "bounded": t.bounded,
        })
    return out
