"""Exact double description for polyhedral cones.

The single entry point :func:`cone_rays` converts a homogeneous inequality
system into generators (lineality basis + extreme rays).  Both directions of
polytope conversion (V->H and H->V) reduce to it after homogenization; see
:mod:`nefsphere.polytope`.  All arithmetic is integer; rays are kept
primitive, so there is no coefficient blow-up.
"""

from .linalg import dot, identity, kernel_basis, primitive, row_rank


def cone_rays(ineqs, dim):
    """Generators of the cone {x in R^dim : a.x >= 0 for all a in ineqs}.

    Returns (lineality, rays): an HNF-canonical integer basis of the lineality
    space and the sorted primitive extreme rays modulo lineality.
    """
    rows = sorted({tuple(r) for r in ineqs if any(r)})
    if not rows:
        return identity(dim), ()
    lineality = kernel_basis(rows, dim)
    if lineality:
        # Quotient out the lineality: inequalities vanish on it, so they
        # descend to the coordinates complementary to the HNF pivot columns.
        pivcols = []
        for r in lineality:
            for j, x in enumerate(r):
                if x:
                    pivcols.append(j)
                    break
        free = [j for j in range(dim) if j not in pivcols]
        qrows = sorted({r for r in
                        (tuple(row[j] for j in free) for row in rows) if any(r)})
        qrays = _pointed_cone_rays(qrows, len(free))
        rays = []
        for q in qrays:
            lift = [0] * dim
            for j, t in zip(free, q):
                lift[j] = t
            rays.append(tuple(lift))
    else:
        rays = list(_pointed_cone_rays(rows, dim))
    return lineality, tuple(sorted(rays))


def _pointed_cone_rays(rows, dim):
    """Extreme rays of a pointed cone given by full-rank inequality rows."""
    if dim == 0:
        return ()
    # Initial simplicial cone from dim independent inequalities.
    base = []
    for r in rows:
        if row_rank(base + [r]) > len(base):
            base.append(r)
            if len(base) == dim:
                break
    if len(base) < dim:
        raise ValueError("cone is not pointed after lineality reduction")
    rest = [r for r in rows if r not in base]
    rays = []
    for j in range(dim):
        # Ray j of the initial cone: orthogonal to all base rows but row j,
        # oriented to the feasible side.
        minor_rows = [base[i] for i in range(dim) if i != j]
        v = _signed_kernel_vector(minor_rows, dim)
        s = dot(base[j], v)
        if s == 0:
            raise ValueError("degenerate initial cone")
        if s < 0:
            v = tuple(-x for x in v)
        rays.append(primitive(v))
    # Tightness bitmasks over the processed inequality list.
    processed = list(base)
    masks = {}
    for v in rays:
        m = 0
        for i, r in enumerate(processed):
            if dot(r, v) == 0:
                m |= 1 << i
        masks[v] = m
    for r in rest:
        vals = {v: dot(r, v) for v in rays}
        if all(s >= 0 for s in vals.values()):
            idx = len(processed)
            processed.append(r)
            for v in rays:
                if vals[v] == 0:
                    masks[v] |= 1 << idx
            continue
        pos = [v for v in rays if vals[v] > 0]
        zero = [v for v in rays if vals[v] == 0]
        neg = [v for v in rays if vals[v] < 0]
        new_rays = []
        for p in pos:
            for n in neg:
                common = masks[p] & masks[n]
                # Combinatorial adjacency: no third ray is tight on the
                # common tight set of p and n.
                adjacent = True
                for w in rays:
                    if w is p or w is n:
                        continue
                    if (masks[w] & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                combo = tuple(vals[p] * nx - vals[n] * px
                              for px, nx in zip(p, n))
                combo = primitive(combo)
                new_rays.append((combo, common))
        idx = len(processed)
        processed.append(r)
        next_rays = []
        next_masks = {}
        for v in pos:
            next_rays.append(v)
            next_masks[v] = masks[v]
        for v in zero:
            next_rays.append(v)
            next_masks[v] = masks[v] | (1 << idx)
        for v, common in new_rays:
            if v in next_masks:
                continue
            m = common | (1 << idx)
            # Recompute exact tightness (combo may be tight on more rows).
            mm = 0
            for i, rr in enumerate(processed):
                if dot(rr, v) == 0:
                    mm |= 1 << i
            next_masks[v] = mm
            next_rays.append(v)
        rays = next_rays
        masks = next_masks
    return tuple(sorted(rays))


def _signed_kernel_vector(rows, dim):
    """A nonzero integer vector orthogonal to dim-1 independent rows."""
    k = kernel_basis(rows, dim)
    if len(k) != 1:
        raise ValueError("expected a one-dimensional kernel")
    return k[0]
