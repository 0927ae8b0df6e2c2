"""Exact rational polytopes in both vertex and facet representation.

Polytopes carry a role tag:  'M' for the functional side (where the partition
parts Delta^(i) live) and 'N' for the vector side (the nabla side).  Pairings
are only defined across roles.  All hyperplane data is stored in homogeneous
integer form: a row (c, u_1, ..., u_d) means c + u.x >= 0 (inequality) or
c + u.x = 0 (equation).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from itertools import product

from . import linalg
from .dd import cone_rays
from .linalg import (
    clear_denominators,
    dot,
    primitive,
    row_rank,
    saturated_span_basis,
)

ROLE_M = "M"
ROLE_N = "N"


def opposite_role(role):
    return ROLE_N if role == ROLE_M else ROLE_M


@dataclass(frozen=True)
class Vector:
    """A point of (R^d)* (role M) or R^d (role N)."""

    coords: tuple
    role: str

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(x) for x in self.coords))

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)


def pair(m, n):
    """The pairing <m, n> between an M-vector and an N-vector."""
    if isinstance(m, Vector) and isinstance(n, Vector):
        if {m.role, n.role} != {ROLE_M, ROLE_N}:
            raise ValueError("pairing requires one M-vector and one N-vector")
        return dot(m.coords, n.coords)
    return dot(m, n)


def as_fractions(point):
    return tuple(Fraction(x) for x in point)


def is_integral(point):
    return all(Fraction(x).denominator == 1 for x in point)


class GeometryError(ValueError):
    pass


class Polytope:
    """Bounded convex polytope with canonical V- and H-representations.

    Values are immutable after construction (face lattices and charts are
    cached lazily but idempotently), so independent computations can safely
    share polytopes.
    """

    __slots__ = ("ambient", "role", "vertices", "equations", "facets", "dim",
                 "_faces", "_chart", "_lattice_points", "_triangulation")

    def __init__(self, ambient, role, vertices, equations, facets, dim):
        self.ambient = ambient
        self.role = role
        self.vertices = vertices
        self.equations = equations
        self.facets = facets
        self.dim = dim
        self._faces = None
        self._chart = None
        self._lattice_points = None
        self._triangulation = None

    # -- canonical identity ------------------------------------------------

    def key(self):
        return (self.role, self.vertices)

    def __eq__(self, other):
        return isinstance(other, Polytope) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __lt__(self, other):
        return self.key() < other.key()

    def __repr__(self):
        return f"Polytope(dim={self.dim}, vertices={len(self.vertices)}, role={self.role})"

    # -- membership ---------------------------------------------------------

    def contains(self, point):
        hx = (1,) + as_fractions(point)
        return (all(dot(e, hx) == 0 for e in self.equations)
                and all(dot(f, hx) >= 0 for f in self.facets))

    def interior_contains(self, point):
        """Relative-interior membership."""
        hx = (1,) + as_fractions(point)
        return (all(dot(e, hx) == 0 for e in self.equations)
                and all(dot(f, hx) > 0 for f in self.facets))

    def hrep_rows(self):
        """(equation rows, inequality rows) in homogeneous integer form."""
        return self.equations, self.facets

    # -- faces ---------------------------------------------------------------

    def face_sets(self):
        """All nonempty faces as frozensets of vertex indices, with dims.

        Returns a dict face -> dimension.  Faces are generated by closing the
        facet incidence sets under intersection, which is exact for polytopes.
        """
        if self._faces is not None:
            return self._faces
        nv = len(self.vertices)
        full = frozenset(range(nv))
        hverts = [(1,) + v for v in self.vertices]
        facet_sets = []
        for f in self.facets:
            facet_sets.append(frozenset(i for i, hv in enumerate(hverts)
                                        if dot(f, hv) == 0))
        faces = {full: self.dim}
        frontier = [full]
        while frontier:
            new = []
            for g in frontier:
                for s in facet_sets:
                    h = g & s
                    if h and h != g and h not in faces:
                        faces[h] = self._affine_dim(h)
                        new.append(h)
            frontier = new
        self._faces = faces
        return faces

    def _affine_dim(self, vset):
        idx = sorted(vset)
        if len(idx) == 1:
            return 0
        base = self.vertices[idx[0]]
        rows = [clear_denominators(tuple(a - b for a, b in
                                         zip(self.vertices[i], base)))
                for i in idx[1:]]
        rows = [r for r in rows if any(r)]
        if not rows:
            return 0
        return row_rank(rows)

    def faces_of_dim(self, k):
        return sorted(f for f, d in self.face_sets().items() if d == k)

    def facet_vertex_sets(self):
        return self.faces_of_dim(self.dim - 1) if self.dim > 0 else []

    def face_polytope(self, vset):
        """Canonical sub-polytope spanned by a face's vertices."""
        pts = [self.vertices[i] for i in sorted(vset)]
        return convex_hull(pts, self.role, self.ambient)

    def proper_face_polytopes(self):
        out = []
        for vset, d in sorted(self.face_sets().items(),
                              key=lambda t: (t[1], sorted(t[0]))):
            if d < self.dim:
                out.append(self.face_polytope(vset))
        return out

    # -- lattice ---------------------------------------------------------------

    def lattice_points(self):
        """All integer points, in lexicographic order (bounding-box scan)."""
        if self._lattice_points is not None:
            return self._lattice_points
        lo = [min(v[i] for v in self.vertices) for i in range(self.ambient)]
        hi = [max(v[i] for v in self.vertices) for i in range(self.ambient)]
        ranges = [range(ceil(a), floor(b) + 1) for a, b in zip(lo, hi)]
        pts = []
        for cand in product(*ranges):
            hx = (1,) + cand
            if all(dot(e, hx) == 0 for e in self.equations) and \
               all(dot(f, hx) >= 0 for f in self.facets):
                pts.append(cand)
        self._lattice_points = tuple(pts)
        return self._lattice_points

    def is_lattice_polytope(self):
        return all(is_integral(v) for v in self.vertices)

    # -- charts and volume ------------------------------------------------------

    def chart(self):
        """Lattice-adapted affine chart of the affine hull."""
        if self._chart is None:
            self._chart = AffineChart(self.vertices[0], self.directions_basis(),
                                      self.ambient)
        return self._chart

    def directions_basis(self):
        base = self.vertices[0]
        dirs = [clear_denominators(tuple(a - b for a, b in zip(v, base)))
                for v in self.vertices[1:]]
        dirs = [d for d in dirs if any(d)]
        if not dirs:
            return ()
        return saturated_span_basis(dirs, self.ambient)

    def triangulation(self):
        """Pulling triangulation; simplices as tuples of vertex indices."""
        if self._triangulation is not None:
            return self._triangulation
        faces = self.face_sets()
        memo = {}

        def tri(face):
            if face in memo:
                return memo[face]
            if len(face) == 1:
                memo[face] = (tuple(face),)
                return memo[face]
            apex = min(face)
            dim = faces[face]
            subs = [g for g, dg in faces.items()
                    if dg == dim - 1 and g < face and apex not in g]
            out = []
            for g in sorted(subs, key=sorted):
                for s in tri(g):
                    out.append(s + (apex,))
            memo[face] = tuple(out)
            return memo[face]

        full = frozenset(range(len(self.vertices)))
        self._triangulation = tri(full)
        return self._triangulation

    def volume_in_chart(self, chart):
        """Exact dim-volume measured in the given chart's lattice basis."""
        if self.dim == 0:
            return Fraction(0)
        total = Fraction(0)
        fact = 1
        for i in range(2, self.dim + 1):
            fact *= i
        for simplex in self.triangulation():
            pts = [chart.to_chart(self.vertices[i]) for i in simplex]
            rows = [tuple(a - b for a, b in zip(p, pts[0])) for p in pts[1:]]
            d = _rational_det(rows)
            total += abs(d)
        return total / fact

    def lattice_volume(self):
        """Volume normalized so a unimodular simplex has volume 1/dim!."""
        return self.volume_in_chart(self.chart())

    def validate(self):
        """Internal consistency: raises GeometryError on violation."""
        for v in self.vertices:
            hv = (1,) + v
            if any(dot(e, hv) != 0 for e in self.equations):
                raise GeometryError("vertex violates an equation")
            if any(dot(f, hv) < 0 for f in self.facets):
                raise GeometryError("vertex violates a facet inequality")
        if self.dim != self.ambient - len(self.equations):
            raise GeometryError("dimension does not match equation count")
        for f in self.facets:
            tight = [v for v in self.vertices if dot(f, (1,) + v) == 0]
            if not tight:
                raise GeometryError("facet not tight anywhere")
            rows = [clear_denominators(tuple(a - b for a, b in zip(v, tight[0])))
                    for v in tight[1:]]
            rows = [r for r in rows if any(r)]
            got = row_rank(rows) if rows else 0
            if got != self.dim - 1:
                raise GeometryError("facet tight set has wrong dimension")


def _rational_det(rows):
    n = len(rows)
    if n == 0:
        return Fraction(1)
    m = [[Fraction(x) for x in r] for r in rows]
    sign = 1
    out = Fraction(1)
    for k in range(n):
        piv = None
        for i in range(k, n):
            if m[i][k]:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        out *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[k])]
    return out * sign


class AffineChart:
    """Exact coordinates on an affine subspace, adapted to its lattice."""

    __slots__ = ("anchor", "basis", "ambient", "_solve")

    def __init__(self, anchor, basis, ambient):
        self.anchor = as_fractions(anchor)
        self.basis = tuple(tuple(b) for b in basis)
        self.ambient = ambient
        if self.basis:
            gram = [[dot(a, b) for b in self.basis] for a in self.basis]
            self._solve = linalg.invert_rational(gram)
        else:
            self._solve = ()

    @property
    def dim(self):
        return len(self.basis)

    def to_chart(self, point):
        diff = tuple(Fraction(a) - b for a, b in zip(point, self.anchor))
        if not self.basis:
            if any(diff):
                raise GeometryError("point is off the chart")
            return ()
        rhs = [dot(diff, b) for b in self.basis]
        t = tuple(sum(self._solve[i][j] * rhs[j] for j in range(len(rhs)))
                  for i in range(len(self.basis)))
        if self.from_chart(t) != tuple(Fraction(x) for x in point):
            raise GeometryError("point is off the chart")
        return t

    def from_chart(self, t):
        out = list(self.anchor)
        for c, b in zip(t, self.basis):
            for i in range(self.ambient):
                out[i] += c * b[i]
        return tuple(out)


# -- constructions ------------------------------------------------------------


def convex_hull(points, role, ambient=None):
    """Canonical hull of a nonempty point set (exact, any dimension)."""
    pts = sorted({as_fractions(p) for p in points})
    if not pts:
        raise GeometryError("empty point set")
    if ambient is None:
        ambient = len(pts[0])
    if any(len(p) != ambient for p in pts):
        raise GeometryError("points of mixed dimension")
    gens = [clear_denominators((1,) + p) for p in pts]
    eqs, rays = cone_rays(gens, ambient + 1)
    dim = ambient - len(eqs)
    facets = _canonical_facets(rays, eqs, gens)
    vertices = _extreme_points(pts, facets, eqs, dim)
    return Polytope(ambient, role, vertices, eqs, facets, dim)


def _canonical_facets(rays, eqs, gens):
    # An extreme ray of the dual cone is a genuine facet exactly when it is
    # tight on some generator; otherwise it cuts out the empty face.
    out = set()
    for r in rays:
        if any(dot(r, g) == 0 for g in gens):
            out.add(_reduce_mod_equations(r, eqs))
    return tuple(sorted(out))


def _reduce_mod_equations(row, eqs):
    """Reduce a homogeneous row modulo the equation rows; positive primitive."""
    if not eqs:
        return primitive(row)
    work = [Fraction(x) for x in row]
    for e in eqs:
        piv = next(j for j, x in enumerate(e) if x)
        if work[piv]:
            f = work[piv] / e[piv]
            for j in range(len(work)):
                work[j] -= f * e[j]
    return clear_denominators(work)


def _extreme_points(pts, facets, eqs, dim):
    verts = []
    for p in pts:
        hp = (1,) + p
        tight = [f for f in facets if dot(f, hp) == 0]
        rows = [f[1:] for f in tight] + [e[1:] for e in eqs]
        rows = [r for r in rows if any(r)]
        rank = row_rank(rows) if rows else 0
        if rank == len(p):
            verts.append(p)
    if not verts:
        # Zero-dimensional hull: the single deduped point.
        verts = [pts[0]] if dim == 0 else verts
    return tuple(sorted(verts))


def polyhedron_generators(eq_rows, ineq_rows, ambient):
    """Solve a homogeneous H-system: returns (vertices, rays, lineality)."""
    rows = [(1,) + (0,) * ambient]
    rows.extend(clear_denominators(r) for r in ineq_rows)
    for e in eq_rows:
        e = clear_denominators(e)
        rows.append(tuple(e))
        rows.append(tuple(-x for x in e))
    lin, rays = cone_rays(rows, ambient + 1)
    vertices = []
    rec = []
    for r in rays:
        if r[0] > 0:
            vertices.append(tuple(Fraction(x, r[0]) for x in r[1:]))
        elif r[0] == 0:
            rec.append(primitive(r[1:]))
        else:
            raise GeometryError("homogenization produced a negative-height ray")
    lineality = tuple(l[1:] for l in lin)
    return tuple(sorted(vertices)), tuple(sorted(rec)), lineality


def polytope_from_hrep(eq_rows, ineq_rows, role, ambient):
    """Bounded polytope from a homogeneous H-description (may be redundant)."""
    vertices, rays, lineality = polyhedron_generators(eq_rows, ineq_rows, ambient)
    if rays or any(any(l) for l in lineality):
        raise GeometryError("H-description is unbounded")
    if not vertices:
        return None
    return convex_hull(vertices, role, ambient)


def intersect(p, q):
    """Intersection of two polytopes (None when empty)."""
    if p.ambient != q.ambient or p.role != q.role:
        raise GeometryError("incompatible polytopes")
    eqs = list(p.equations) + list(q.equations)
    ineqs = list(p.facets) + list(q.facets)
    return polytope_from_hrep(eqs, ineqs, p.role, p.ambient)


def polar_dual(p):
    """The polar {y : <x,y> <= 1 for all x in P}; requires 0 interior."""
    if p.equations:
        raise GeometryError("polar undefined")
    if any(f[0] <= 0 for f in p.facets):
        raise GeometryError("polar undefined")
    vertices = sorted(tuple(Fraction(-u, f[0]) for u in f[1:]) for f in p.facets)
    facets = tuple(sorted(clear_denominators((1,) + tuple(-x for x in v))
                          for v in p.vertices))
    return Polytope(p.ambient, opposite_role(p.role), tuple(vertices), (),
                    facets, p.ambient)


def is_reflexive(p):
    """Lattice polytope with 0 interior whose polar is again a lattice polytope."""
    if p.equations or not p.contains((0,) * p.ambient):
        return False
    if not p.interior_contains((0,) * p.ambient):
        return False
    if not p.is_lattice_polytope():
        return False
    return polar_dual(p).is_lattice_polytope()


def minkowski_sum(p, q):
    if p.ambient != q.ambient:
        raise GeometryError("ambient dimension mismatch")
    if p.role != q.role:
        raise GeometryError("role mismatch")
    sums = {tuple(a + b for a, b in zip(v, w))
            for v in p.vertices for w in q.vertices}
    return convex_hull(sums, p.role, p.ambient)


def minkowski_sum_all(polys):
    out = polys[0]
    for q in polys[1:]:
        out = minkowski_sum(out, q)
    return out


def dilate(p, k):
    """Scale by a positive rational factor."""
    k = Fraction(k)
    if k <= 0:
        raise GeometryError("dilation factor must be positive")
    verts = tuple(sorted(tuple(k * x for x in v) for v in p.vertices))
    eqs = tuple(sorted(clear_denominators((k * e[0],) + e[1:])
                       for e in p.equations))
    facets = tuple(sorted(clear_denominators((k * f[0],) + f[1:])
                          for f in p.facets))
    return Polytope(p.ambient, p.role, verts, eqs, facets, p.dim)


class Polyhedron:
    """Possibly unbounded polyhedron kept as generators plus its H-system."""

    __slots__ = ("ambient", "role", "vertices", "rays", "lineality",
                 "eq_rows", "ineq_rows")

    def __init__(self, ambient, role, vertices, rays, lineality,
                 eq_rows, ineq_rows):
        self.ambient = ambient
        self.role = role
        self.vertices = vertices
        self.rays = rays
        self.lineality = lineality
        self.eq_rows = eq_rows
        self.ineq_rows = ineq_rows

    @classmethod
    def from_hrep(cls, eq_rows, ineq_rows, role, ambient):
        vertices, rays, lineality = polyhedron_generators(eq_rows, ineq_rows,
                                                          ambient)
        if not vertices and not any(any(l) for l in lineality):
            return None
        if not vertices:
            # A nonempty polyhedron with no extreme points (pure lineality
            # component) still needs an anchor; solve the equation system.
            anchor = _any_point(eq_rows, ineq_rows, ambient)
            if anchor is None:
                return None
            vertices = (anchor,)
        return cls(ambient, role, vertices, rays, lineality,
                   tuple(tuple(e) for e in eq_rows),
                   tuple(tuple(r) for r in ineq_rows))

    def key(self):
        return (self.role, self.vertices, self.rays, self.lineality)

    def __eq__(self, other):
        return isinstance(other, Polyhedron) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return (f"Polyhedron(dim={self.dim()}, verts={len(self.vertices)}, "
                f"rays={len(self.rays)}, lin={len(self.lineality)})")

    def is_bounded(self):
        return not self.rays and not self.lineality

    def dim(self):
        base = self.vertices[0]
        rows = [clear_denominators(tuple(a - b for a, b in zip(v, base)))
                for v in self.vertices[1:]]
        rows += [tuple(r) for r in self.rays]
        rows += [tuple(l) for l in self.lineality]
        rows = [r for r in rows if any(r)]
        return row_rank(rows) if rows else 0

    def contains(self, point):
        hx = (1,) + as_fractions(point)
        return (all(dot(e, hx) == 0 for e in self.eq_rows)
                and all(dot(f, hx) >= 0 for f in self.ineq_rows))

    def as_polytope(self):
        if not self.is_bounded():
            raise GeometryError("polyhedron is unbounded")
        return convex_hull(self.vertices, self.role, self.ambient)


def _any_point(eq_rows, ineq_rows, ambient):
    """A rational point of the system, via the generator decomposition."""
    rows = [(1,) + (0,) * ambient]
    rows.extend(tuple(r) for r in ineq_rows)
    for e in eq_rows:
        rows.append(tuple(e))
        rows.append(tuple(-x for x in e))
    lin, rays = cone_rays(rows, ambient + 1)
    cand = [Fraction(0)] * (ambient + 1)
    for r in rays:
        for i in range(ambient + 1):
            cand[i] += r[i]
    if cand[0] == 0:
        return None
    return tuple(x / cand[0] for x in cand[1:])
