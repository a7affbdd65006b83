"""Slow reference computations that share no code with the package.

Vectors are plain tuples of 0/1, matrices are lists of such tuples, and
subgroups are explicit sets of tuples closed under addition.
"""

from __future__ import annotations

import itertools


def vec_add(a, b):
    return tuple((x + y) % 2 for x, y in zip(a, b))


def dense_rank(rows):
    """Row rank over Z/2 by textbook elimination on lists."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                m[i] = [(a + b) % 2 for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def all_vectors(n):
    return list(itertools.product((0, 1), repeat=n))


def closure(generators, n):
    """The subgroup generated by ``generators``, by repeated addition."""
    group = {tuple([0] * n)}
    frontier = set(group)
    while frontier:
        new = set()
        for g in frontier:
            for x in generators:
                s = vec_add(g, x)
                if s not in group:
                    new.add(s)
        group |= new
        frontier = new
    return frozenset(group)


def kernel_by_enumeration(rows, ncols):
    return {v for v in all_vectors(ncols) if all(sum(a * b for a, b in zip(r, v)) % 2 == 0 for r in rows)}


def quotient_betti(vertex_facets, dim, colors):
    """Betti numbers of P x (Z/2)^N / ~ from explicit equivalence classes.

    ``vertex_facets`` lists each vertex's facet indices, ``colors`` one 0/1
    tuple per facet.  Faces are frozensets of facets; the cells of a face are
    the orbits of (Z/2)^N under its group, held as frozensets of vectors.
    """
    n_amb = len(colors[0])
    faces = set()
    for vf in vertex_facets:
        for size in range(len(vf) + 1):
            for sub in itertools.combinations(sorted(vf), size):
                faces.add(frozenset(sub))
    space = all_vectors(n_amb)
    cells = {d: [] for d in range(dim + 1)}
    for f in faces:
        group = closure([colors[i] for i in f], n_amb)
        orbits = {frozenset(vec_add(g, h) for h in group) for g in space}
        for orb in orbits:
            cells[dim - len(f)].append((f, orb))
    index = {d: {c: i for i, c in enumerate(cells[d])} for d in cells}
    ranks = {0: 0, dim + 1: 0}
    for d in range(1, dim + 1):
        rows = []
        for f, orb in cells[d]:
            row = [0] * len(cells[d - 1])
            g = next(iter(orb))
            for j, (f2, orb2) in enumerate(cells[d - 1]):
                if f < f2 and len(f2) == len(f) + 1 and g in orb2:
                    row[j] = (row[j] + 1) % 2
            rows.append(row)
        ranks[d] = dense_rank(rows) if rows and rows[0] else 0
    return tuple(len(cells[d]) - ranks[d] - ranks[d + 1] for d in range(dim + 1))


def h_vector_sympy(face_counts_by_codim, n):
    """h-vector by symbolic expansion; ``face_counts_by_codim[i]`` counts codim-i faces."""
    import sympy

    t = sympy.symbols("t")
    poly = sympy.expand(sum(face_counts_by_codim[i] * (t - 1) ** (n - i) for i in range(n + 1)))
    return tuple(int(sympy.Poly(poly, t).coeff_monomial(t ** (n - i))) for i in range(n + 1))
