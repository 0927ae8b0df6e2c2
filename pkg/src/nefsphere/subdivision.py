"""Regular central subdivisions induced by weight functions.

Lifting the lattice points of a polytope by a weight and projecting the lower
hull gives a regular subdivision.  For the weights used here every maximal
cell must contain the origin (centrality) and in fact be a pyramid with apex
0 over a unique boundary face; the boundary faces and all their faces form
the boundary subdivision (side tag S or T).
"""

from fractions import Fraction

from .linalg import dot
from .polytope import GeometryError, as_fractions, convex_hull


class WeightFunction:
    """Rational weights on the lattice points of a support polytope.

    Values are normalized so the origin gets weight 0 (a global constant
    shift changes nothing downstream).
    """

    def __init__(self, support, table, preset=None):
        self.support = support
        origin = (0,) * support.ambient
        table = {tuple(int(c) for c in pt): Fraction(val)
                 for pt, val in table.items()}
        missing = [pt for pt in support.lattice_points() if pt not in table]
        if missing:
            raise GeometryError(
                f"weight function undefined on {len(missing)} lattice points")
        shift = table.get(origin, Fraction(0))
        self.values = {pt: val - shift for pt, val in table.items()}
        self.preset = preset

    @classmethod
    def all_ones(cls, support):
        origin = (0,) * support.ambient
        table = {pt: Fraction(0 if pt == origin else 1)
                 for pt in support.lattice_points()}
        return cls(support, table, preset="all_ones")

    @classmethod
    def from_pairs(cls, support, pairs):
        return cls(support, {tuple(pt): Fraction(v) for pt, v in pairs})

    def __call__(self, point):
        key = tuple(int(Fraction(c)) for c in as_fractions(point))
        return self.values[key]

    def restrict(self, subsupport):
        """The same weights on a subpolytope's lattice points."""
        table = {pt: self.values[pt] for pt in subsupport.lattice_points()}
        return WeightFunction(subsupport, table, preset=self.preset)

    def as_sorted_items(self):
        return sorted(self.values.items())


class ConedSubdivision:
    """The regular subdivision of a support polytope by a weight function."""

    def __init__(self, support, weight, maximal_cells, marked):
        self.support = support
        self.weight = weight
        self.maximal_cells = tuple(sorted(maximal_cells))
        self.marked = marked  # cell -> tuple of lattice points on the lower hull
        self._cells = None

    def cells(self):
        """All cells (faces of maximal cells), canonical order."""
        if self._cells is None:
            seen = {}
            for c in self.maximal_cells:
                seen[c] = True
                for f in c.proper_face_polytopes():
                    seen.setdefault(f, True)
            self._cells = tuple(sorted(seen))
        return self._cells

    def contains_cell(self, poly):
        return poly in set(self.cells())

    def is_central(self):
        origin = (0,) * self.support.ambient
        return all(c.contains(origin) for c in self.maximal_cells)


def lower_hull_subdivision(support, weight):
    """Project the lower hull of the lifted lattice points of the support.

    Works for supports of any dimension (the lift happens inside the affine
    hull); cells come back in ambient coordinates with their marked lattice
    points.
    """
    pts = support.lattice_points()
    if not pts:
        raise GeometryError("support has no lattice points")
    chart = support.chart()
    k = chart.dim
    lifted = []
    for pt in pts:
        t = chart.to_chart(pt)
        lifted.append(tuple(t) + (weight(pt),))
    hull = convex_hull(lifted, support.role, k + 1)
    maximal = []
    marked = {}
    if hull.dim <= k:
        # Affine weight: the trivial subdivision.
        cell = convex_hull(pts, support.role, support.ambient)
        maximal.append(cell)
        marked[cell] = tuple(sorted(pts))
    else:
        for f in hull.facets:
            if f[-1] <= 0:
                continue  # not a lower facet
            members = [pt for pt, lp in zip(pts, lifted)
                       if dot(f, (1,) + lp) == 0]
            cell = convex_hull(members, support.role, support.ambient)
            maximal.append(cell)
            marked[cell] = tuple(sorted(members))
    return ConedSubdivision(support, weight, maximal, marked)


def is_central(subdivision):
    return subdivision.is_central()


class BoundarySubdivision:
    """The induced subdivision of the boundary of a central support."""

    def __init__(self, parent, side, maximal_cells):
        self.parent = parent
        self.side = side
        self.maximal_cells = tuple(sorted(maximal_cells))
        seen = {}
        for c in self.maximal_cells:
            seen[c] = True
            for f in c.proper_face_polytopes():
                seen.setdefault(f, True)
        self.cells = tuple(sorted(seen))
        self._index = {c: i for i, c in enumerate(self.cells)}
        self._coned = {}

    def index(self, cell):
        return self._index[cell]

    def __contains__(self, cell):
        return cell in self._index

    def leq(self, a, b):
        """Face relation: a is a face of b (cells of a complex share faces,
        so containment is equivalent to vertex-set inclusion)."""
        return set(a.vertices) <= set(b.vertices)

    def coned(self, cell):
        """The cell joined with the origin (its partner in the coned complex)."""
        if cell not in self._coned:
            origin = (Fraction(0),) * self.parent.support.ambient
            self._coned[cell] = convex_hull(cell.vertices + (origin,),
                                            cell.role, cell.ambient)
        return self._coned[cell]

    def f_vector(self):
        counts = {}
        for c in self.cells:
            counts[c.dim] = counts.get(c.dim, 0) + 1
        return tuple(counts.get(k, 0) for k in range(max(counts) + 1))


def boundary_subdivision(subdivision):
    """Extract the boundary subdivision from a central coned subdivision.

    Every maximal cell must be central and in fact a pyramid with apex 0
    over a single boundary face; otherwise the weight function is rejected.
    """
    if not subdivision.is_central():
        raise GeometryError("subdivision not central")
    support = subdivision.support
    origin = (Fraction(0),) * support.ambient
    boundary_cells = []
    for c in subdivision.maximal_cells:
        faces = c.face_sets()
        free = [fs for fs in faces
                if not any(not any(c.vertices[i]) for i in fs)]
        # fs is origin-free iff no vertex of fs is the zero vector.
        maximal_free = [fs for fs in free
                        if not any(fs < other for other in free)]
        if len(maximal_free) != 1:
            raise GeometryError(
                "subdivision is not a cone with apex 0 over the boundary")
        fs = maximal_free[0]
        face = c.face_polytope(fs)
        if origin not in c.vertices or \
                set(c.vertices) != set(face.vertices) | {origin}:
            raise GeometryError(
                "subdivision is not a cone with apex 0 over the boundary")
        boundary_cells.append(face)
    side = "S" if support.role == "M" else "T"
    return BoundarySubdivision(subdivision, side, boundary_cells)
