"""The identification space ``P × (Z/2)^N / ~`` as a finite cell complex.

For a facet coloring ``Λ`` of a simple polytope ``P`` the group of a face
``f`` is ``G(f) = span{Λ(F) : F ⊇ f}`` and ``(p, w) ~ (p, w')`` iff
``w - w'`` lies in the group of the face whose relative interior contains
``p``.  The quotient has one cell per pair ``(f, w + G(f))``; the closed cell
is a copy of ``f`` and its boundary is the sum of the cells
``(f', w + G(f'))`` over the facets ``f'`` of ``f``.  Every closed cell embeds,
so mod-2 incidence numbers are all 1.

Small covers, real moment-angle manifolds and glued-back principal bundles
are the special cases ``Λ = μ``, ``Λ = basis coloring`` and ``Λ = compiled``.
The number of ``d``-cells is ``sum over d-faces f of 2^(N - dim G(f))``; see
:func:`predicted_cell_count` before building anything large.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

from .coloring import FacetColoring
from .gf2 import GF2Vector, rank_of_rows, reduce_rows
from .polytope import ProductSignature, SimplePolytope, mask_to_facets

__all__ = [
    "Cell",
    "BettiVector",
    "QuotientComplex",
    "ComplexError",
    "build",
    "betti",
    "hrk",
    "components",
    "euler_characteristic",
    "sphere_product_betti",
    "predicted_cell_count",
    "export_chain_complex",
    "parse_chain_complex",
    "UnionFind",
]


class ComplexError(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class Cell:
    face: int
    rep: int

    def coset_rep(self, ambient: int) -> GF2Vector:
        return GF2Vector(self.rep, ambient)


@dataclass(frozen=True)
class BettiVector:
    """Mod-2 Betti numbers ``(β_0, ..., β_n)``."""

    values: tuple[int, ...]

    @property
    def hrk(self) -> int:
        return sum(self.values)

    @property
    def euler(self) -> int:
        return sum((-1) ** i * b for i, b in enumerate(self.values))

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> int:
        return self.values[i]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, BettiVector):
            return self.values == other.values
        if isinstance(other, (tuple, list)):
            return self.values == tuple(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.values)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.values)) + ")"


class UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra < rb:
            self.parent[rb] = ra
        else:
            self.parent[ra] = rb
        return True


def _bits_of(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def _canon(g: int, basis: Sequence[int]) -> int:
    for b in basis:
        if g & (b & -b):
            g ^= b
    return g


class QuotientComplex:
    """Cells, boundary matrices and homology of ``P × (Z/2)^N / ~``.

    ``cells[d]`` lists the ``d``-cells in lexicographic order of (face, coset
    representative).  ``boundary[d][i]`` is the boundary of ``cells[d][i]`` as
    an int bitset over the indices of ``cells[d-1]`` (``boundary[0]`` is all
    zeros).
    """

    def __init__(
        self,
        polytope: SimplePolytope,
        coloring: FacetColoring,
        cells: tuple[tuple[Cell, ...], ...],
        boundary: tuple[tuple[int, ...], ...],
        face_groups: dict[int, tuple[int, ...]],
    ) -> None:
        self.polytope = polytope
        self.coloring = coloring
        self.ambient = coloring.ambient
        self.cells = cells
        self.boundary = boundary
        self.face_groups = face_groups
        self.index = tuple({c: i for i, c in enumerate(cs)} for cs in cells)

    @property
    def dim(self) -> int:
        return self.polytope.dim

    def cell_counts(self) -> tuple[int, ...]:
        return tuple(len(cs) for cs in self.cells)

    @property
    def size(self) -> int:
        return sum(self.cell_counts())

    @cached_property
    def face_independent(self) -> bool:
        return all(
            len(self.face_groups[f]) == f.bit_count() for f in self.polytope.faces
        )

    @cached_property
    def boundary_ranks(self) -> tuple[int, ...]:
        """``rank ∂_d`` for ``d = 0..n`` (``rank ∂_0 = 0``)."""
        return (0,) + tuple(rank_of_rows(self.boundary[d]) for d in range(1, self.dim + 1))

    @cached_property
    def betti(self) -> BettiVector:
        return self._betti_from(self.cell_counts(), self.boundary_ranks)

    def _betti_from(self, counts: Sequence[int], ranks: Sequence[int]) -> BettiVector:
        n = self.dim
        vals = []
        for d in range(n + 1):
            nxt = ranks[d + 1] if d < n else 0
            vals.append(counts[d] - ranks[d] - nxt)
        return BettiVector(tuple(vals))

    @property
    def hrk(self) -> int:
        return self.betti.hrk

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * c for d, c in enumerate(self.cell_counts()))

    @cached_property
    def vertex_components(self) -> tuple[int, ...]:
        """Component label (0, 1, ... in order of first appearance) of every 0-cell."""
        uf = UnionFind(len(self.cells[0]))
        if self.dim >= 1:
            for row in self.boundary[1]:
                ends = _bits_of(row)
                for e in ends[1:]:
                    uf.union(ends[0], e)
        labels: dict[int, int] = {}
        out = []
        for v in range(len(self.cells[0])):
            out.append(labels.setdefault(uf.find(v), len(labels)))
        return tuple(out)

    @property
    def components(self) -> int:
        return len(set(self.vertex_components))

    @cached_property
    def cell_components(self) -> tuple[tuple[int, ...], ...]:
        """Component label of every cell, by dimension."""
        p = self.polytope
        first_vertex = {}
        for f in p.faces:
            for vm in p.vertex_masks:
                if vm & f == f:
                    first_vertex[f] = vm
                    break
        vindex = self.index[0]
        vlabel = self.vertex_components
        out = []
        for cs in self.cells:
            labels = []
            for c in cs:
                vm = first_vertex[c.face]
                rep = _canon(c.rep, self.face_groups[vm])
                labels.append(vlabel[vindex[Cell(vm, rep)]])
            out.append(tuple(labels))
        return tuple(out)

    def subcomplex_betti(self, keep: Sequence[Sequence[bool]]) -> BettiVector:
        """Betti numbers of the subcomplex made of the cells flagged in ``keep``.

        ``keep[d][i]`` flags ``cells[d][i]``.  The flagged cells must be closed
        under taking boundaries.
        """
        counts = []
        ranks = [0]
        for d in range(self.dim + 1):
            counts.append(sum(1 for x in keep[d] if x))
        for d in range(1, self.dim + 1):
            allowed = 0
            for i, x in enumerate(keep[d - 1]):
                if x:
                    allowed |= 1 << i
            rows = []
            for i, x in enumerate(keep[d]):
                if x:
                    row = self.boundary[d][i]
                    if row & ~allowed:
                        raise ComplexError("selected cells are not closed under boundary")
                    rows.append(row)
            ranks.append(rank_of_rows(rows))
        return self._betti_from(counts, ranks)

    @cached_property
    def component_bettis(self) -> tuple[BettiVector, ...]:
        """Betti vector of each connected component, in label order."""
        labels = self.cell_components
        out = []
        for comp in range(self.components):
            keep = [[lab == comp for lab in ls] for ls in labels]
            out.append(self.subcomplex_betti(keep))
        return tuple(out)

    def component_betti(self, comp: int = 0) -> BettiVector:
        if self.components == 1:
            return self.betti
        return self.component_bettis[comp]

    def face_restriction_betti(self, face_predicate: Callable[[int], bool]) -> BettiVector:
        """Betti numbers of the subcomplex over the faces accepted by ``face_predicate``."""
        keep = [[face_predicate(c.face) for c in cs] for cs in self.cells]
        return self.subcomplex_betti(keep)

    def check_boundary_squared(self) -> bool:
        for d in range(2, self.dim + 1):
            lower = self.boundary[d - 1]
            for row in self.boundary[d]:
                acc = 0
                for j in _bits_of(row):
                    acc ^= lower[j]
                if acc:
                    return False
        return True

    def structural_checks(self) -> dict[str, bool]:
        """Invariants every complex must satisfy, by name.

        Poincaré duality is only checked for face-independent colorings.
        """
        b = self.betti
        checks = {
            "boundary_squared_zero": self.check_boundary_squared(),
            "euler_cells_equals_betti": self.euler_characteristic() == b.euler,
            "beta0_equals_components": b[0] == self.components,
        }
        if self.face_independent:
            checks["poincare_duality"] = b.values == b.values[::-1]
        return checks

    def cell(self, d: int, i: int) -> Cell:
        return self.cells[d][i]


def predicted_cell_count(p: SimplePolytope, coloring: FacetColoring) -> int:
    n_amb = coloring.ambient
    return sum(1 << (n_amb - len(reduce_rows(coloring.face_rows(f)))) for f in p.faces)


def build(p: SimplePolytope, coloring: FacetColoring, check: bool = True) -> QuotientComplex:
    """Construct the quotient complex of ``coloring`` over ``p``.

    With ``check`` (default) the construction asserts ``∂∘∂ = 0``.
    """
    if coloring.polytope is not p and coloring.polytope != p:
        raise ComplexError("coloring does not belong to this polytope")
    n_amb = coloring.ambient
    full = (1 << n_amb) - 1
    groups: dict[int, tuple[int, ...]] = {}
    for f in p.faces:
        groups[f] = tuple(reduce_rows(coloring.face_rows(f)))

    cells: list[tuple[Cell, ...]] = []
    for d in range(p.dim + 1):
        layer = []
        for f in p.faces_by_dim[d]:
            pivots = 0
            for b in groups[f]:
                pivots |= b & -b
            free = _bits_of(full & ~pivots)
            reps = []
            for choice in itertools.product((0, 1), repeat=len(free)):
                r = 0
                for bit, pos in zip(choice, free):
                    if bit:
                        r |= 1 << pos
                reps.append(r)
            reps.sort()
            layer.extend(Cell(f, r) for r in reps)
        cells.append(tuple(layer))

    index = [{c: i for i, c in enumerate(cs)} for cs in cells]
    boundary: list[tuple[int, ...]] = [tuple(0 for _ in cells[0])]
    fb = p.face_boundary
    for d in range(1, p.dim + 1):
        lower = index[d - 1]
        rows = []
        for c in cells[d]:
            row = 0
            for g in fb[c.face]:
                row |= 1 << lower[Cell(g, _canon(c.rep, groups[g]))]
            rows.append(row)
        boundary.append(tuple(rows))

    qc = QuotientComplex(p, coloring, tuple(cells), tuple(boundary), groups)
    if check and not qc.check_boundary_squared():
        raise ComplexError("boundary of boundary is non-zero")
    return qc


def betti(c: QuotientComplex) -> BettiVector:
    return c.betti


def hrk(c: QuotientComplex) -> int:
    return c.hrk


def components(c: QuotientComplex) -> int:
    return c.components


def euler_characteristic(c: QuotientComplex) -> int:
    return c.euler_characteristic()


def sphere_product_betti(sig: ProductSignature | Sequence[int]) -> BettiVector:
    """Mod-2 Betti numbers of ``S^{n_1} × ... × S^{n_r}``."""
    parts = sig.parts if isinstance(sig, ProductSignature) else tuple(sig)
    acc = [1]
    for n_i in parts:
        sphere = [1] + [0] * (n_i - 1) + [1]
        out = [0] * (len(acc) + len(sphere) - 1)
        for i, a in enumerate(acc):
            for j, s in enumerate(sphere):
                out[i + j] += a * s
        acc = out
    return BettiVector(tuple(acc))


def export_chain_complex(c: QuotientComplex) -> str:
    """Plain-text dump of cells and boundary matrices.

    Format::

        chain-complex <dim> ambient <N>
        cells <d> <count>
        <facet indices joined by ',' or '-' for the top face> <coset bit-string>
        ...
        boundary <d> <rows> <cols>
        <row as bit-string over the (d-1)-cells>
        ...

    ``boundary`` blocks appear for ``d = 1..dim`` after all ``cells`` blocks.
    """
    lines = [f"chain-complex {c.dim} ambient {c.ambient}"]
    for d, cs in enumerate(c.cells):
        lines.append(f"cells {d} {len(cs)}")
        for cell in cs:
            facets = ",".join(map(str, mask_to_facets(cell.face))) or "-"
            lines.append(f"{facets} {GF2Vector(cell.rep, c.ambient).to_bitstring() or '-'}")
    for d in range(1, c.dim + 1):
        ncols = len(c.cells[d - 1])
        lines.append(f"boundary {d} {len(c.cells[d])} {ncols}")
        for row in c.boundary[d]:
            lines.append(GF2Vector(row, ncols).to_bitstring())
    return "\n".join(lines) + "\n"


def parse_chain_complex(text: str) -> tuple[list[list[tuple[tuple[int, ...], str]]], list[list[str]]]:
    """Read back :func:`export_chain_complex` output as ``(cells, boundaries)``.

    ``boundaries[d-1]`` holds the bit-string rows of ``∂_d``.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0].split()
    if header[0] != "chain-complex":
        raise ValueError("not a chain complex export")
    dim = int(header[1])
    cells: list[list[tuple[tuple[int, ...], str]]] = []
    bounds: list[list[str]] = []
    i = 1
    while i < len(lines):
        head = lines[i].split()
        if head[0] == "cells":
            count = int(head[2])
            block = []
            for ln in lines[i + 1 : i + 1 + count]:
                facets, rep = ln.split()
                block.append((() if facets == "-" else tuple(map(int, facets.split(","))), "" if rep == "-" else rep))
            cells.append(block)
            i += 1 + count
        elif head[0] == "boundary":
            count = int(head[2])
            bounds.append(lines[i + 1 : i + 1 + count])
            i += 1 + count
        else:
            raise ValueError(f"unexpected line {lines[i]!r}")
    if len(cells) != dim + 1 or len(bounds) != dim:
        raise ValueError("truncated chain complex export")
    return cells, bounds
