"""Integral simplicial homology via sparse elimination and Smith form.

Two usage modes:

* :class:`SimplicialComplex` materializes a complex (fine for desk-size
  inputs, discriminant components, oracles in tests).
* :func:`order_complex_homology` computes the homology of the order complex
  of a finite poset degree by degree, holding only two chain levels at a
  time.  This is what makes second barycentric subdivisions tractable.

Unit pivots are eliminated sparsely (no coefficient growth); whatever is
left goes through the dense Smith normal form for exact torsion.
"""

from heapq import heappush, heappop

from .linalg import smith_normal_form


def sparse_rank_and_divisors(columns, want_divisors=True):
    """Rank and elementary divisors of a sparse integer matrix.

    `columns` is a list of dicts row->value (consumed).  Divisors of 1 are
    included so the count equals the rank.
    """
    col_entries = {}
    row_cols = {}
    for ci, col in enumerate(columns):
        live = {r: v for r, v in col.items() if v}
        if live:
            col_entries[ci] = live
            for r in live:
                row_cols.setdefault(r, set()).add(ci)
    rank = 0
    heap = []
    for r, cols in row_cols.items():
        heappush(heap, (len(cols), r))
    # Rows with no unit entry are parked until an elimination touches them;
    # whatever is still parked at the end goes to the dense Smith step.
    parked = {}
    while heap:
        nnz, r = heappop(heap)
        cols = row_cols.get(r)
        if not cols:
            continue
        if len(cols) != nnz:
            heappush(heap, (len(cols), r))
            continue
        if parked.get(r) == nnz:
            continue
        # Pick a unit entry in this row, preferring short columns.
        pivot_col = None
        best = None
        for c in cols:
            v = col_entries[c][r]
            if v == 1 or v == -1:
                size = len(col_entries[c])
                if best is None or size < best:
                    best = size
                    pivot_col = c
        if pivot_col is None:
            parked[r] = nnz
            continue
        parked.pop(r, None)
        pcol = col_entries.pop(pivot_col)
        pval = pcol[r]
        for rr in pcol:
            s = row_cols.get(rr)
            if s is not None and pivot_col in s:
                s.discard(pivot_col)
                parked.pop(rr, None)
                heappush(heap, (len(s), rr))
        del row_cols[r]
        rank += 1
        targets = [c for c in cols if c != pivot_col]
        for c in targets:
            col = col_entries[c]
            f = col[r] * pval  # pval is +-1, so f/pval == f*pval
            for rr, vv in pcol.items():
                if rr == r:
                    continue
                new = col.get(rr, 0) - f * vv
                if new:
                    if rr not in col:
                        row_cols.setdefault(rr, set()).add(c)
                    parked.pop(rr, None)
                    heappush(heap, (len(row_cols[rr]), rr))
                    col[rr] = new
                else:
                    if rr in col:
                        del col[rr]
                        s = row_cols.get(rr)
                        if s is not None:
                            s.discard(c)
                            parked.pop(rr, None)
                            heappush(heap, (len(s), rr))
            del col[r]
            if not col:
                del col_entries[c]
    divisors = [1] * rank
    # Dense leftover block: rows/cols that never saw a unit pivot.
    if col_entries:
        live_rows = sorted({r for col in col_entries.values() for r in col})
        idx = {r: i for i, r in enumerate(live_rows)}
        dense = []
        for c in sorted(col_entries):
            row = [0] * len(live_rows)
            for r, v in col_entries[c].items():
                row[idx[r]] = v
            dense.append(row)
        divs, extra_rank = smith_normal_form(dense)
        rank += extra_rank
        divisors.extend(divs)
    if not want_divisors:
        return rank, ()
    return rank, tuple(divisors)


def boundary_columns(simplices, face_index):
    """Sparse boundary columns for a list of k-simplices (k >= 1)."""
    cols = []
    for s in simplices:
        col = {}
        sign = 1
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            col[face_index[face]] = sign
            sign = -sign
        cols.append(col)
    return cols


class SimplicialComplex:
    """A finite simplicial complex on hashable vertex labels."""

    def __init__(self, by_dim):
        self.by_dim = {k: tuple(sorted(v)) for k, v in by_dim.items() if v}

    @classmethod
    def from_simplices(cls, simplices):
        """Close a set of simplices (tuples of vertices) under faces."""
        seen = set()
        stack = [tuple(sorted(set(s))) for s in simplices]
        for s in stack:
            if not s:
                raise ValueError("empty simplex")
        while stack:
            s = stack.pop()
            if s in seen:
                continue
            seen.add(s)
            if len(s) > 1:
                for i in range(len(s)):
                    stack.append(s[:i] + s[i + 1:])
        by_dim = {}
        for s in seen:
            by_dim.setdefault(len(s) - 1, []).append(s)
        return cls(by_dim)

    @property
    def dim(self):
        return max(self.by_dim) if self.by_dim else -1

    def f_vector(self):
        return tuple(len(self.by_dim.get(k, ())) for k in range(self.dim + 1))

    def euler_characteristic(self):
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector()))

    def simplices(self, k):
        return self.by_dim.get(k, ())

    def vertices(self):
        return tuple(s[0] for s in self.by_dim.get(0, ()))

    def homology(self):
        """Unreduced integral homology: [(betti_k, torsion divisors)] for all k."""
        top = self.dim
        if top < 0:
            return []
        ranks = {}
        torsion = {}
        for k in range(1, top + 1):
            lower = self.by_dim.get(k - 1, ())
            upper = self.by_dim.get(k, ())
            face_index = {s: i for i, s in enumerate(lower)}
            cols = boundary_columns(upper, face_index)
            r, divs = sparse_rank_and_divisors(cols)
            ranks[k] = r
            torsion[k] = tuple(d for d in divs if d > 1)
        out = []
        for k in range(top + 1):
            n_k = len(self.by_dim.get(k, ()))
            betti = n_k - ranks.get(k, 0) - ranks.get(k + 1, 0)
            out.append((betti, torsion.get(k + 1, ())))
        return out

    def connected_components(self):
        """Vertex sets of the components (edges induce the relation)."""
        parent = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for v in self.vertices():
            parent[v] = v
        for e in self.by_dim.get(1, ()):
            a, b = find(e[0]), find(e[1])
            if a != b:
                parent[a] = b
        groups = {}
        for v in self.vertices():
            groups.setdefault(find(v), []).append(v)
        return [tuple(sorted(g)) for g in
                sorted(groups.values(), key=lambda g: sorted(g)[0])]

    def full_subcomplex(self, vertex_subset):
        keep = set(vertex_subset)
        by_dim = {}
        for k, simps in self.by_dim.items():
            sel = [s for s in simps if all(v in keep for v in s)]
            if sel:
                by_dim[k] = sel
        return SimplicialComplex(by_dim)

    def is_pure(self):
        if self.dim < 0:
            return True
        top = self.by_dim[self.dim]
        covered = set()
        for s in top:
            for i in range(len(s)):
                covered.add(s[:i] + s[i + 1:])
        for k in range(self.dim):
            for s in self.by_dim.get(k, ()):
                if k == self.dim - 1 and s not in covered:
                    return False
        return True

    def is_closed_pseudomanifold(self):
        """Pure, and every codim-1 simplex lies in exactly two top simplices."""
        top = self.dim
        if top <= 0:
            return True
        if not self.is_pure():
            return False
        counts = {}
        for s in self.by_dim[top]:
            for i in range(len(s)):
                f = s[:i] + s[i + 1:]
                counts[f] = counts.get(f, 0) + 1
        return all(c == 2 for c in counts.values()) and \
            len(counts) == len(self.by_dim.get(top - 1, ()))

    def barycentric_subdivision(self):
        """The order complex of the face poset, vertices = old simplices."""
        all_simps = sorted(s for simps in self.by_dim.values() for s in simps)
        chains = order_complex_chains(all_simps)
        by_dim = {}
        for level, chain_list in enumerate(chains):
            if chain_list:
                by_dim[level] = chain_list
        return SimplicialComplex(by_dim)


def _subset_successors(simplices):
    """For each simplex, the sorted ids of its strict supersets in the list."""
    index = {s: i for i, s in enumerate(simplices)}
    succ = [[] for _ in simplices]
    for s, i in index.items():
        n = len(s)
        if n == 1:
            continue
        for mask in range(1, (1 << n) - 1):
            sub = tuple(s[j] for j in range(n) if mask >> j & 1)
            k = index.get(sub)
            if k is not None:
                succ[k].append(i)
    for lst in succ:
        lst.sort()
    return succ


def order_complex_chains(simplices):
    """All chains of the face poset, as tuples of simplex ids, by length-1."""
    succ = _subset_successors(simplices)
    levels = []
    current = [(i,) for i in range(len(simplices))]
    while current:
        levels.append(tuple(current))
        nxt = []
        for ch in current:
            for j in succ[ch[-1]]:
                nxt.append(ch + (j,))
        current = nxt
    return levels


def order_complex_homology(n_elements, successors):
    """Homology of the order complex of a poset given by strict successors.

    successors[i] lists all j with element_i < element_j.  Chains are built
    level by level; only two adjacent levels are alive at any time.
    """
    if n_elements == 0:
        return []
    prev = [(i,) for i in range(n_elements)]
    counts = [len(prev)]
    ranks = []
    torsions = []
    level = 1
    while True:
        nxt = []
        for ch in prev:
            for j in successors[ch[-1]]:
                nxt.append(ch + (j,))
        if not nxt:
            break
        counts.append(len(nxt))
        face_index = {ch: i for i, ch in enumerate(prev)}
        cols = boundary_columns(nxt, face_index)
        del face_index
        r, divs = sparse_rank_and_divisors(cols)
        ranks.append(r)
        torsions.append(tuple(d for d in divs if d > 1))
        prev = nxt
        level += 1
    out = []
    for k in range(len(counts)):
        rk = ranks[k - 1] if k >= 1 else 0
        rk1 = ranks[k] if k < len(ranks) else 0
        tor = torsions[k] if k < len(torsions) else ()
        out.append((counts[k] - rk - rk1, tor))
    return out
