"""Combinatorial simple polytopes.

A simple polytope is given by its vertex-facet incidence only.  A face is
identified by the set of facets containing it, packed as an int bitmask
(facet ``i`` is bit ``i``); the whole polytope is the empty mask.  For a
simple polytope every subset of a vertex's facet set names a face, and a face
of codimension ``c`` lies in exactly ``c`` facets.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

__all__ = [
    "PolytopeError",
    "SimplePolytope",
    "ProductSignature",
    "from_incidence",
    "simplex",
    "polygon",
    "product",
    "product_of_simplices",
    "f_vector",
    "h_vector",
    "two_face_census",
    "is_product_of_simplices",
    "factor_product_of_simplices",
    "minimal_nonfaces",
    "facets_not_through_vertex",
    "facet_polytope",
    "mask_to_facets",
    "facets_to_mask",
]


class PolytopeError(ValueError):
    pass


def facets_to_mask(facets: Iterable[int]) -> int:
    m = 0
    for f in facets:
        m |= 1 << f
    return m


def mask_to_facets(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def _face_key(mask: int) -> tuple[int, tuple[int, ...]]:
    return (mask.bit_count(), mask_to_facets(mask))


@dataclass(frozen=True)
class ProductSignature:
    """Simplex dimensions ``(n_1, ..., n_r)`` of a product of simplices."""

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        parts = tuple(int(p) for p in self.parts)
        if not parts:
            raise PolytopeError("a product signature needs at least one simplex")
        if any(p < 1 for p in parts):
            raise PolytopeError(f"simplex dimensions must be positive, got {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def dim(self) -> int:
        return sum(self.parts)

    @property
    def r(self) -> int:
        return len(self.parts)

    def sorted(self) -> ProductSignature:
        return ProductSignature(tuple(sorted(self.parts)))

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


@dataclass(frozen=True)
class SimplePolytope:
    """A simple polytope up to combinatorial type.

    Build it with :func:`from_incidence` (or one of the constructors below),
    which validates the incidence data.  ``vertex_masks[v]`` is the facet set
    of vertex ``v``.
    """

    dim: int
    facet_count: int
    vertex_masks: tuple[int, ...]
    facet_names: tuple[str, ...]
    name: str = field(default="", compare=False)

    @property
    def vertex_count(self) -> int:
        return len(self.vertex_masks)

    @property
    def k(self) -> int:
        """Number of facets not through a vertex, ``facet_count - dim``."""
        return self.facet_count - self.dim

    @property
    def full_mask(self) -> int:
        return (1 << self.facet_count) - 1

    def vertex_facets(self, v: int) -> tuple[int, ...]:
        return mask_to_facets(self.vertex_masks[v])

    @cached_property
    def faces(self) -> tuple[int, ...]:
        """Every face mask, ordered by codimension then by facet tuple."""
        seen: set[int] = set()
        for vm in self.vertex_masks:
            facets = mask_to_facets(vm)
            for size in range(len(facets) + 1):
                for sub in itertools.combinations(facets, size):
                    seen.add(facets_to_mask(sub))
        return tuple(sorted(seen, key=_face_key))

    @cached_property
    def face_set(self) -> frozenset[int]:
        return frozenset(self.faces)

    def face_dim(self, face: int) -> int:
        return self.dim - face.bit_count()

    def is_face(self, mask: int) -> bool:
        return mask in self.face_set

    @cached_property
    def faces_by_dim(self) -> tuple[tuple[int, ...], ...]:
        buckets: list[list[int]] = [[] for _ in range(self.dim + 1)]
        for f in self.faces:
            buckets[self.face_dim(f)].append(f)
        return tuple(tuple(b) for b in buckets)

    @cached_property
    def face_boundary(self) -> dict[int, tuple[int, ...]]:
        """For each face, the faces one dimension lower contained in it."""
        fs = self.face_set
        out: dict[int, tuple[int, ...]] = {}
        for f in self.faces:
            subs = []
            rest = self.full_mask & ~f
            while rest:
                low = rest & -rest
                rest ^= low
                if f | low in fs:
                    subs.append(f | low)
            out[f] = tuple(sorted(subs, key=_face_key))
        return out

    def vertices_of_face(self, face: int) -> list[int]:
        return [v for v, vm in enumerate(self.vertex_masks) if vm & face == face]

    def face_label(self, face: int) -> str:
        if face == 0:
            return "P"
        return "&".join(self.facet_names[i] for i in mask_to_facets(face))


def from_incidence(
    dim: int,
    facet_count: int,
    vertex_facets: Sequence[Iterable[int]],
    facet_names: Sequence[str] | None = None,
    name: str = "",
) -> SimplePolytope:
    """Validate vertex-facet incidence data and build a :class:`SimplePolytope`.

    Raises :class:`PolytopeError` with ``"not simple"``, ``"degenerate input"``
    or ``"not a valid simple polytope incidence"`` for the respective defects.
    """
    if dim < 1:
        raise PolytopeError(f"dimension must be at least 1, got {dim}")
    if facet_count < dim + 1:
        raise PolytopeError(f"a {dim}-polytope needs at least {dim + 1} facets, got {facet_count}")
    if facet_names is None:
        facet_names = tuple(f"F{i}" for i in range(facet_count))
    facet_names = tuple(facet_names)
    if len(facet_names) != facet_count:
        raise PolytopeError(f"{len(facet_names)} facet names for {facet_count} facets")
    if len(set(facet_names)) != facet_count:
        raise PolytopeError("facet names must be distinct")

    masks: list[int] = []
    seen: dict[int, int] = {}
    for v, facets in enumerate(vertex_facets):
        facets = list(facets)
        for f in facets:
            if not 0 <= f < facet_count:
                raise PolytopeError(f"vertex {v}: facet index {f} out of range 0..{facet_count - 1}")
        mask = facets_to_mask(facets)
        if len(facets) != dim or mask.bit_count() != dim:
            raise PolytopeError(
                f"not simple: vertex {v} lies in {mask.bit_count()} distinct facets, expected {dim}"
            )
        if mask in seen:
            raise PolytopeError(f"degenerate input: vertices {seen[mask]} and {v} have identical facet sets")
        seen[mask] = v
        masks.append(mask)
    if not masks:
        raise PolytopeError("no vertices given")

    p = SimplePolytope(dim, facet_count, tuple(masks), facet_names, name)
    _check_polytopal(p)
    return p


def _check_polytopal(p: SimplePolytope) -> None:
    bad = "not a valid simple polytope incidence"
    union = 0
    for vm in p.vertex_masks:
        union |= vm
    if union != p.full_mask:
        missing = mask_to_facets(p.full_mask & ~union)
        raise PolytopeError(f"{bad}: facets {list(missing)} contain no vertex")
    # Diamond property for every length-2 interval of the face lattice,
    # including those ending at the empty face (each edge has two vertices).
    fs = p.face_set
    for edge in p.faces_by_dim[1] if p.dim >= 1 else ():
        n_ends = len(p.vertices_of_face(edge))
        if n_ends != 2:
            raise PolytopeError(f"{bad}: edge {p.face_label(edge)} has {n_ends} vertices")
    for f in p.faces:
        for g in p.face_boundary[f]:
            for h in p.face_boundary[g]:
                between = [x for x in p.face_boundary[f] if x & h == x and x in fs]
                if len(between) != 2:
                    raise PolytopeError(
                        f"{bad}: face {p.face_label(h)} lies in {len(between)} facets of {p.face_label(f)}"
                    )


def simplex(n: int) -> SimplePolytope:
    """The n-simplex; vertex ``i`` is opposite facet ``i``."""
    full = set(range(n + 1))
    return from_incidence(n, n + 1, [sorted(full - {i}) for i in range(n + 1)], name=f"simplex{n}")


def polygon(sides: int) -> SimplePolytope:
    """Polygon with cyclically numbered edges; vertex ``i`` is edge ``i`` ∩ edge ``i+1``."""
    if sides < 3:
        raise PolytopeError("a polygon needs at least 3 sides")
    return from_incidence(2, sides, [(i, (i + 1) % sides) for i in range(sides)], name=f"{sides}-gon")


def product(p: SimplePolytope, q: SimplePolytope) -> SimplePolytope:
    """Cartesian product; facets of ``p`` come first, then those of ``q``."""
    verts = []
    for pv in p.vertex_masks:
        for qv in q.vertex_masks:
            verts.append(mask_to_facets(pv) + tuple(p.facet_count + f for f in mask_to_facets(qv)))
    names = tuple(f"{n}" for n in p.facet_names) + tuple(f"{n}'" for n in q.facet_names)
    if len(set(names)) != len(names):
        names = tuple(f"F{i}" for i in range(p.facet_count + q.facet_count))
    return from_incidence(
        p.dim + q.dim, p.facet_count + q.facet_count, verts, names, name=f"{p.name or 'P'}x{q.name or 'Q'}"
    )


def _signature(sig: ProductSignature | Sequence[int]) -> ProductSignature:
    return sig if isinstance(sig, ProductSignature) else ProductSignature(tuple(sig))


def product_of_simplices(sig: ProductSignature | Sequence[int]) -> SimplePolytope:
    """The product ``Δ^{n_1} × ... × Δ^{n_r}``.

    Facets are numbered block by block: ``F^i_j`` (the facet opposite vertex
    ``j`` of the ``i``-th simplex, both 1-based in the name ``F{i}_{j}``) has
    index ``sum(n_1 + 1, ..., n_{i-1} + 1) + j``.  Vertices are listed in
    lexicographic order of ``(j_1, ..., j_r)``; vertex ``v_{j_1...j_r}`` lies on
    every facet except the ``F^i_{j_i}``.
    """
    sig = _signature(sig)
    offsets = []
    names = []
    off = 0
    for i, n_i in enumerate(sig.parts, start=1):
        offsets.append(off)
        names.extend(f"F{i}_{j}" for j in range(n_i + 1))
        off += n_i + 1
    total = off
    verts = []
    for js in itertools.product(*(range(n_i + 1) for n_i in sig.parts)):
        omit = {offsets[i] + j for i, j in enumerate(js)}
        verts.append([f for f in range(total) if f not in omit])
    return from_incidence(sig.dim, total, verts, names, name=f"prod{sig}")


def f_vector(p: SimplePolytope) -> tuple[int, ...]:
    """Face counts ``(f_0, ..., f_n)`` by dimension, ending with ``f_n = 1``."""
    return tuple(len(b) for b in p.faces_by_dim)


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def h_vector(p: SimplePolytope) -> tuple[int, ...]:
    """h-vector from ``sum_i f_{i-1} (t - 1)^(n - i)``.

    Here ``f_{i-1}`` counts faces of codimension ``i`` (``f_{-1} = 1``), and
    ``h_i`` is the coefficient of ``t^(n-i)``.
    """
    n = p.dim
    fv = f_vector(p)
    total = [0] * (n + 1)  # index = power of t
    for i in range(n + 1):
        count = fv[n - i]
        term = [1]
        for _ in range(n - i):
            term = _poly_mul(term, [-1, 1])
        for power, c in enumerate(term):
            total[power] += count * c
    return tuple(total[n - i] for i in range(n + 1))


def two_face_census(p: SimplePolytope) -> Counter[int]:
    """Multiset of edge counts of the 2-dimensional faces."""
    if p.dim < 2:
        raise PolytopeError("two-face census needs dimension at least 2")
    return Counter(len(p.vertices_of_face(f)) for f in p.faces_by_dim[2])


def minimal_nonfaces(p: SimplePolytope) -> list[int]:
    """Minimal facet sets with empty intersection, sorted by size then index."""
    fs = p.face_set
    out = []
    for size in range(2, p.dim + 2):
        for combo in itertools.combinations(range(p.facet_count), size):
            m = facets_to_mask(combo)
            if m in fs:
                continue
            if all(m & ~(1 << f) in fs for f in combo):
                out.append(m)
    return out


def factor_product_of_simplices(p: SimplePolytope) -> ProductSignature | None:
    """Direct factorization of ``p`` as a product of simplices.

    The minimal non-faces of ``Δ^{n_1} × ... × Δ^{n_r}`` are exactly its
    factor classes ``{F^i_0, ..., F^i_{n_i}}``, which partition the facets.
    The candidate factorization read off from them is accepted only when the
    vertex incidence is literally that of :func:`product_of_simplices`.
    Parts are returned in order of each class's lowest facet index.
    """
    classes = minimal_nonfaces(p)
    union = 0
    for c in classes:
        if union & c:
            return None
        union |= c
    if union != p.full_mask:
        return None
    classes.sort(key=lambda c: c & -c)
    parts = tuple(c.bit_count() - 1 for c in classes)
    if sum(parts) != p.dim:
        return None
    expected = set()
    for picks in itertools.product(*(mask_to_facets(c) for c in classes)):
        expected.add(p.full_mask & ~facets_to_mask(picks))
    if expected != set(p.vertex_masks):
        return None
    return ProductSignature(parts)


def is_product_of_simplices(p: SimplePolytope) -> tuple[bool, ProductSignature | None]:
    """Recognize products of simplices from the 2-faces.

    For ``dim >= 3`` the answer is "every 2-face is a triangle or a square";
    polygons must themselves be triangles or squares and a segment always
    qualifies.  When the answer is yes the factorization witness from
    :func:`factor_product_of_simplices` is attached (``None`` if that fails,
    which callers should treat as a disagreement).
    """
    if p.dim == 1:
        verdict = True
    elif p.dim == 2:
        verdict = p.vertex_count in (3, 4)
    else:
        verdict = set(two_face_census(p)) <= {3, 4}
    if not verdict:
        return False, None
    return True, factor_product_of_simplices(p)


def facets_not_through_vertex(p: SimplePolytope, v: int) -> tuple[int, ...]:
    if not 0 <= v < p.vertex_count:
        raise PolytopeError(f"vertex {v} out of range 0..{p.vertex_count - 1}")
    return mask_to_facets(p.full_mask & ~p.vertex_masks[v])


def facet_polytope(p: SimplePolytope, facet: int) -> tuple[SimplePolytope, tuple[int, ...]]:
    """The facet ``facet`` as an (n-1)-polytope.

    Returns the polytope and ``parents``: facet ``j`` of the result is
    ``F_facet ∩ F_parents[j]``.
    """
    if p.dim < 2:
        raise PolytopeError("facets of a segment are points")
    if not 0 <= facet < p.facet_count:
        raise PolytopeError(f"facet {facet} out of range")
    bit = 1 << facet
    parents = tuple(
        j for j in range(p.facet_count) if j != facet and (bit | (1 << j)) in p.face_set
    )
    index = {j: i for i, j in enumerate(parents)}
    verts = [
        [index[j] for j in mask_to_facets(vm & ~bit)] for vm in p.vertex_masks if vm & bit
    ]
    names = tuple(f"{p.facet_names[facet]}&{p.facet_names[j]}" for j in parents)
    fname = f"{p.name or 'P'}/{p.facet_names[facet]}"
    return from_incidence(p.dim - 1, len(parents), verts, names, name=fname), parents
