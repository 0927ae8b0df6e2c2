"""Exact integer and rational linear algebra.

Everything in here works on plain tuples/lists of Python ints or Fractions;
matrices are sequences of row vectors.  All normal forms are deterministic so
downstream outputs are byte-reproducible.
"""

from fractions import Fraction
from math import gcd


def vec_gcd(v):
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g


def primitive(v):
    """Divide an integer vector by the gcd of its entries (0 stays 0)."""
    g = vec_gcd(v)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def primitive_signed(v):
    """Primitive vector with the first nonzero entry positive."""
    w = primitive(v)
    for x in w:
        if x:
            return w if x > 0 else tuple(-y for y in w)
    return w


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(c, a):
    return tuple(c * x for x in a)


def clear_denominators(v):
    """Scale a rational vector to a primitive integer vector (positive scale)."""
    denom = 1
    for x in v:
        if isinstance(x, Fraction):
            denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in v]
    return primitive(ints)


def mat_mul(a, b):
    bt = list(zip(*b))
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(m):
    return tuple(zip(*m))


def row_rank(rows):
    """Rank of a matrix with integer or Fraction entries (fraction-free)."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    row = 0
    for col in range(ncols):
        piv = None
        for i in range(row, len(m)):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        for i in range(row + 1, len(m)):
            if m[i][col]:
                f = m[i][col] / m[row][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[row])]
        row += 1
        rank += 1
    return rank


def det(rows):
    """Determinant of a square integer matrix via fraction-free Bareiss."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[-1][-1]


def solve_rational(a_rows, b):
    """Solve A x = b exactly; returns a tuple of Fractions or None if inconsistent.

    When the system is underdetermined the solution with free variables set to
    zero (in elimination order) is returned, which keeps results deterministic.
    """
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a_rows, b)]
    nrows = len(m)
    ncols = len(a_rows[0]) if a_rows else 0
    pivots = []
    row = 0
    for col in range(ncols):
        piv = None
        for i in range(row, nrows):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = m[row][col]
        m[row] = [x / inv for x in m[row]]
        for i in range(nrows):
            if i != row and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[row])]
        pivots.append(col)
        row += 1
        if row == nrows:
            break
    for i in range(row, nrows):
        if m[i][ncols]:
            return None
    x = [Fraction(0)] * ncols
    for r, col in enumerate(pivots):
        x[col] = m[r][ncols]
    return tuple(x)


def invert_rational(rows):
    """Inverse of a square matrix over the rationals; None if singular."""
    n = len(rows)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(rows)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        inv = m[col][col]
        m[col] = [x / inv for x in m[col]]
        for i in range(n):
            if i != col and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return tuple(tuple(r[n:]) for r in m)


def hermite_normal_form(rows):
    """Row-style Hermite normal form of an integer matrix.

    Returns the canonical basis of the row lattice: pivots positive, entries
    above each pivot reduced to [0, pivot), zero rows dropped, one row per
    pivot column in order.
    """
    m = [list(r) for r in rows if any(r)]
    if not m:
        return ()
    ncols = len(m[0])
    out = []
    row = 0
    for col in range(ncols):
        piv = None
        for i in range(row, len(m)):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        # Euclidean elimination below the pivot.
        for i in range(row + 1, len(m)):
            while m[i][col]:
                q = m[row][col] // m[i][col]
                m[row] = [a - q * b for a, b in zip(m[row], m[i])]
                m[row], m[i] = m[i], m[row]
        if m[row][col] < 0:
            m[row] = [-a for a in m[row]]
        row += 1
        if row == len(m):
            break
    m = [r for r in m if any(r)]
    # Reduce entries above pivots.
    pivcols = []
    for r in m:
        for j, x in enumerate(r):
            if x:
                pivcols.append(j)
                break
    for i in range(len(m) - 1, -1, -1):
        col = pivcols[i]
        p = m[i][col]
        for k in range(i):
            q = m[k][col] // p
            if q:
                m[k] = [a - q * b for a, b in zip(m[k], m[i])]
    return tuple(tuple(r) for r in m)


def kernel_basis(rows, ncols=None):
    """Canonical basis of the saturated integer kernel {x : A x = 0}.

    The result spans all integer solutions (it is saturated: any integer
    vector in the rational kernel is an integer combination of the basis).
    """
    rows = [tuple(r) for r in rows]
    if ncols is None:
        if not rows:
            raise ValueError("kernel_basis needs ncols for an empty matrix")
        ncols = len(rows[0])
    # Column-style HNF on A, tracking the unimodular column transform.
    m = [list(r) for r in rows]
    u = [list(r) for r in identity(ncols)]  # columns of u track column ops

    def col(mat, j):
        return [mat[i][j] for i in range(len(mat))]

    def addcol(mat, dst, src, q):
        for i in range(len(mat)):
            mat[i][dst] += q * mat[i][src]

    def swapcol(mat, a, b):
        for i in range(len(mat)):
            mat[i][a], mat[i][b] = mat[i][b], mat[i][a]

    colpos = 0
    for r in range(len(m)):
        piv = None
        for j in range(colpos, ncols):
            if m[r][j]:
                piv = j
                break
        if piv is None:
            continue
        swapcol(m, colpos, piv)
        swapcol(u, colpos, piv)
        for j in range(colpos + 1, ncols):
            while m[r][j]:
                q = m[r][colpos] // m[r][j]
                addcol(m, colpos, j, -q)
                addcol(u, colpos, j, -q)
                swapcol(m, colpos, j)
                swapcol(u, colpos, j)
        colpos += 1
        if colpos == ncols:
            break
    kernel_cols = [j for j in range(ncols)
                   if all(m[i][j] == 0 for i in range(len(m)))]
    basis = [tuple(u[i][j] for i in range(ncols)) for j in kernel_cols]
    return hermite_normal_form(basis)


def saturated_perp_basis(ms, ambient):
    """Canonical basis of {x in Z^ambient : <m, x> = 0 for all m in ms}.

    Empty input yields the identity basis of Z^ambient.
    """
    rows = [tuple(int(x) for x in m) for m in ms]
    rows = [r for r in rows if any(r)]
    if not rows:
        return identity(ambient)
    return kernel_basis(rows, ambient)


def saturated_span_basis(vectors, ncols=None):
    """Canonical basis of the saturation of the integer span of the vectors."""
    vectors = [tuple(v) for v in vectors if any(v)]
    if ncols is None:
        if not vectors:
            raise ValueError("saturated_span_basis needs ncols when empty")
        ncols = len(vectors[0])
    if not vectors:
        return ()
    perp = kernel_basis(vectors, ncols)
    if not perp:
        return identity(ncols)
    return kernel_basis(perp, ncols)


def smith_normal_form(rows):
    """Elementary divisors of an integer matrix.

    Returns (divisors, rank) where divisors is the full chain d1 | d2 | ...
    of nonzero invariant factors, all positive.
    """
    m = [list(r) for r in rows]
    m = [r for r in m if r]
    if not m or not m[0]:
        return (), 0
    nrows, ncols = len(m), len(m[0])
    divisors = []
    top = 0
    while top < nrows and top < ncols:
        # Find a pivot with minimal absolute value in the working block.
        piv = None
        best = None
        for i in range(top, nrows):
            for j in range(top, ncols):
                v = abs(m[i][j])
                if v and (best is None or v < best):
                    best = v
                    piv = (i, j)
        if piv is None:
            break
        pi, pj = piv
        m[top], m[pi] = m[pi], m[top]
        for r in m:
            r[top], r[pj] = r[pj], r[top]
        while True:
            # Clear the pivot column.
            dirty = False
            for i in range(top + 1, nrows):
                if m[i][top]:
                    q = m[i][top] // m[top][top]
                    m[i] = [a - q * b for a, b in zip(m[i], m[top])]
                    if m[i][top]:
                        m[top], m[i] = m[i], m[top]
                        dirty = True
            # Clear the pivot row.
            for j in range(top + 1, ncols):
                if m[top][j]:
                    q = m[top][j] // m[top][top]
                    for r in m:
                        r[j] -= q * r[top]
                    if m[top][j]:
                        for r in m:
                            r[j], r[top] = r[top], r[j]
                        dirty = True
            if not dirty:
                break
        # Enforce divisibility of the remaining block by the pivot.
        p = m[top][top]
        bad = None
        for i in range(top + 1, nrows):
            for j in range(top + 1, ncols):
                if m[i][j] % p:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            m[top] = [a + b for a, b in zip(m[top], m[bad])]
            continue
        divisors.append(abs(p))
        top += 1
    return tuple(divisors), len(divisors)


def complete_to_unimodular(rows, ncols):
    """Extend a saturated integer basis to a basis of Z^ncols.

    rows must be linearly independent and span a saturated sublattice; the
    returned matrix has the given rows first and determinant +-1.
    """
    rows = [tuple(r) for r in rows]
    if not rows:
        return identity(ncols)
    # Column-style reduction A U = [L 0] with U unimodular.  Then the first
    # len(rows) rows of U^-1 span the same saturated lattice as `rows`, and
    # its remaining rows complete any basis of that lattice.
    m = [list(r) for r in rows]
    u = [list(r) for r in identity(ncols)]
    colpos = 0
    for r in range(len(m)):
        piv = None
        for j in range(colpos, ncols):
            if m[r][j]:
                piv = j
                break
        if piv is None:
            continue
        for mat in (m, u):
            for row_ in mat:
                row_[colpos], row_[piv] = row_[piv], row_[colpos]
        for j in range(colpos + 1, ncols):
            while m[r][j]:
                q = m[r][colpos] // m[r][j]
                for mat in (m, u):
                    for row_ in mat:
                        row_[colpos] -= q * row_[j]
                for mat in (m, u):
                    for row_ in mat:
                        row_[colpos], row_[j] = row_[j], row_[colpos]
        colpos += 1
    if colpos != len(rows):
        raise ValueError("rows are not linearly independent")
    uinv = invert_rational(u)
    full = list(rows)
    for i in range(colpos, ncols):
        full.append(tuple(int(x) for x in uinv[i]))
    mat = tuple(full)
    d = det(mat)
    if abs(d) != 1:
        raise ValueError("basis is not saturated; cannot complete unimodularly")
    if d == -1:
        mat = mat[:-1] + (tuple(-x for x in mat[-1]),)
    return mat
