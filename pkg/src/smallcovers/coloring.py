"""Facet colorings of simple polytopes.

Covers characteristic functions, the basis coloring behind the real
moment-angle manifold, panel colorings of the vertex-cut core and their
compilation into a single facet coloring whose quotient is the principal
bundle, plus the two reductions (inclusion and projection) and the
rank-raising extension sequence used on towers of double covers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .gf2 import GF2Vector, LengthMismatchError, rank_of_rows, reduce_rows
from .polytope import SimplePolytope, facets_not_through_vertex, facet_polytope, mask_to_facets

__all__ = [
    "ColoringError",
    "CapExceededError",
    "DEFAULT_COLORING_CAP",
    "FacetColoring",
    "PanelColoring",
    "validate_characteristic",
    "characteristic_violation",
    "require_characteristic",
    "moment_angle_coloring",
    "coloring_rank",
    "count_panel_colorings",
    "enumerate_panel_colorings",
    "panel_coloring_at",
    "compile_glueback",
    "embed_coloring",
    "project_coloring",
    "Extension",
    "extension_sequence",
    "induced_facet_coloring",
    "standard_coloring",
]

DEFAULT_COLORING_CAP = 24


class ColoringError(ValueError):
    pass


class CapExceededError(ValueError):
    pass


def _as_vector(c: GF2Vector | str, length: int | None) -> GF2Vector:
    v = GF2Vector.from_bitstring(c) if isinstance(c, str) else c
    if length is not None and v.length != length:
        raise LengthMismatchError(f"color {v} has length {v.length}, expected {length}")
    return v


@dataclass(frozen=True)
class FacetColoring:
    """One color in (Z/2)^ambient per facet of ``polytope``."""

    polytope: SimplePolytope
    ambient: int
    colors: tuple[GF2Vector, ...]

    def __post_init__(self) -> None:
        colors = tuple(_as_vector(c, self.ambient) for c in self.colors)
        if len(colors) != self.polytope.facet_count:
            raise ColoringError(
                f"{len(colors)} colors for a polytope with {self.polytope.facet_count} facets"
            )
        object.__setattr__(self, "colors", colors)

    @classmethod
    def from_bitstrings(cls, polytope: SimplePolytope, colors: Sequence[str]) -> FacetColoring:
        vecs = [GF2Vector.from_bitstring(c) for c in colors]
        if not vecs:
            raise ColoringError("empty coloring")
        return cls(polytope, vecs[0].length, tuple(vecs))

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple(c.bits for c in self.colors)

    def face_rows(self, face: int) -> list[int]:
        return [self.colors[i].bits for i in mask_to_facets(face)]

    def to_bitstrings(self) -> list[str]:
        return [c.to_bitstring() for c in self.colors]

    def is_characteristic(self) -> bool:
        return characteristic_violation(self) is None


@dataclass(frozen=True)
class PanelColoring:
    """Colors in (Z/2)^ambient for the panels, i.e. the facets missing a base vertex.

    ``panels`` are facet indices in ascending order.
    """

    panels: tuple[int, ...]
    ambient: int
    colors: tuple[GF2Vector, ...]

    def __post_init__(self) -> None:
        colors = tuple(_as_vector(c, self.ambient) for c in self.colors)
        if len(colors) != len(self.panels):
            raise ColoringError(f"{len(colors)} colors for {len(self.panels)} panels")
        if list(self.panels) != sorted(set(self.panels)):
            raise ColoringError(f"panels must be distinct and ascending, got {self.panels}")
        object.__setattr__(self, "panels", tuple(self.panels))
        object.__setattr__(self, "colors", colors)

    @classmethod
    def from_bitstrings(
        cls, panels: Sequence[int], colors: Sequence[str], ambient: int | None = None
    ) -> PanelColoring:
        vecs = [GF2Vector.from_bitstring(c) for c in colors]
        if ambient is None:
            if not vecs:
                raise ColoringError("ambient rank needed for an empty panel list")
            ambient = vecs[0].length
        return cls(tuple(panels), ambient, tuple(vecs))

    @classmethod
    def zero(cls, panels: Sequence[int], ambient: int) -> PanelColoring:
        return cls(tuple(panels), ambient, tuple(GF2Vector.zero(ambient) for _ in panels))

    @property
    def k(self) -> int:
        return len(self.panels)

    def to_bitstrings(self) -> list[str]:
        return [c.to_bitstring() for c in self.colors]

    def label(self) -> str:
        return " ".join(self.to_bitstrings()) if self.ambient else "-" * self.k

    def is_maximally_independent(self) -> bool:
        return coloring_rank(self) == self.k


def characteristic_violation(c: FacetColoring) -> int | None:
    """First vertex whose facet colors are dependent, or ``None``."""
    for v, vm in enumerate(c.polytope.vertex_masks):
        rows = c.face_rows(vm)
        if rank_of_rows(rows) != len(rows):
            return v
    return None


def validate_characteristic(c: FacetColoring) -> bool:
    """True iff the colors at every vertex are linearly independent."""
    return characteristic_violation(c) is None


def require_characteristic(c: FacetColoring) -> None:
    v = characteristic_violation(c)
    if v is not None:
        p = c.polytope
        names = "{" + ",".join(p.facet_names[i] for i in p.vertex_facets(v)) + "}"
        raise ColoringError(f"not a characteristic function: colors dependent at vertex {v} {names}")


def moment_angle_coloring(p: SimplePolytope) -> FacetColoring:
    """Facet ``i`` gets the standard basis vector ``e_i`` of (Z/2)^facet_count."""
    n = p.facet_count
    return FacetColoring(p, n, tuple(GF2Vector.basis(i, n) for i in range(n)))


def coloring_rank(lam: PanelColoring) -> int:
    return rank_of_rows(c.bits for c in lam.colors)


def count_panel_colorings(k: int, m: int) -> int:
    return 1 << (k * m)


def _check_cap(k: int, m: int, cap: int) -> None:
    if k * m > cap:
        raise CapExceededError(
            f"enumerating (Z2)^{m}-colorings of {k} panels needs 2^{k * m} cases; cap is m*k <= {cap}"
        )


def panel_coloring_at(panels: Sequence[int], m: int, index: int) -> PanelColoring:
    """The coloring at position ``index`` of the lexicographic enumeration.

    The colors' bit-strings, concatenated panel by panel, read as a binary
    number (first character most significant) give ``index``.
    """
    k = len(panels)
    colors = []
    for j in range(k):
        chunk = (index >> (m * (k - 1 - j))) & ((1 << m) - 1)
        # chunk is MSB-first in bit-string order; reverse into coordinate bits
        bits = 0
        for i in range(m):
            if (chunk >> (m - 1 - i)) & 1:
                bits |= 1 << i
        colors.append(GF2Vector(bits, m))
    return PanelColoring(tuple(panels), m, tuple(colors))


def enumerate_panel_colorings(
    k: int | Sequence[int],
    m: int,
    cap: int = DEFAULT_COLORING_CAP,
    start: int = 0,
    stop: int | None = None,
) -> Iterator[PanelColoring]:
    """Stream every (Z/2)^m-coloring of ``k`` panels in lexicographic order.

    ``k`` is either a panel count (panels then are ``0..k-1``) or the panel
    list itself.  ``start``/``stop`` select an index range so the stream can
    be split between workers.
    """
    panels = tuple(range(k)) if isinstance(k, int) else tuple(k)
    _check_cap(len(panels), m, cap)
    total = count_panel_colorings(len(panels), m)
    stop = total if stop is None else min(stop, total)
    for index in range(start, stop):
        yield panel_coloring_at(panels, m, index)


def compile_glueback(mu: FacetColoring, v0: int, lam: PanelColoring) -> FacetColoring:
    """Fold a characteristic function and a panel coloring into one coloring.

    Facets through ``v0`` get ``(mu(F), 0)``, panels get ``(mu(P), lam(P))`` in
    (Z/2)^(n+m).  The quotient of this coloring is the principal
    (Z/2)^m-bundle glued back from the vertex-cut core, with the bundle
    action on the trailing ``m`` coordinates.
    """
    p = mu.polytope
    if mu.ambient != p.dim:
        raise ColoringError(f"characteristic function must take values in (Z2)^{p.dim}, got (Z2)^{mu.ambient}")
    require_characteristic(mu)
    panels = facets_not_through_vertex(p, v0)
    if tuple(lam.panels) != panels:
        raise ColoringError(f"panel list {list(lam.panels)} does not match facets {list(panels)} missing vertex {v0}")
    extra = {f: lam.colors[j] for j, f in enumerate(panels)}
    zero = GF2Vector.zero(lam.ambient)
    colors = tuple(mu.colors[f].concat(extra.get(f, zero)) for f in range(p.facet_count))
    out = FacetColoring(p, p.dim + lam.ambient, colors)
    # Face independence is inherited from mu; keep it checked anyway.
    require_characteristic(out)
    return out


def embed_coloring(lam: PanelColoring, target: int) -> PanelColoring:
    """Compose with the standard inclusion (Z/2)^m -> (Z/2)^target."""
    if target < lam.ambient:
        raise ColoringError(f"cannot include (Z2)^{lam.ambient} into (Z2)^{target}")
    return PanelColoring(lam.panels, target, tuple(GF2Vector(c.bits, target) for c in lam.colors))


def project_coloring(lam: PanelColoring, target: int) -> PanelColoring:
    """Change basis so the colors span the first coordinates, then project to (Z/2)^target.

    The new coordinates of a color are its coefficients against the reduced
    echelon basis of the span of the colors, so the rank is preserved.
    """
    basis = reduce_rows(c.bits for c in lam.colors)
    if target < len(basis):
        raise ColoringError(f"target (Z2)^{target} is smaller than the coloring rank {len(basis)}")
    pivots = [b & -b for b in basis]
    colors = []
    for c in lam.colors:
        bits = 0
        for i, p in enumerate(pivots):
            if c.bits & p:
                bits |= 1 << i
        colors.append(GF2Vector(bits, target))
    return PanelColoring(lam.panels, target, tuple(colors))


@dataclass(frozen=True)
class Extension:
    """Colorings ``λ_0, ..., λ_{r-m}`` of increasing rank.

    ``panel_order`` lists panel positions with the ``m`` basis panels first;
    ``omegas`` are the vectors completing a basis of (Z/2)^r.
    """

    colorings: tuple[PanelColoring, ...]
    panel_order: tuple[int, ...]
    omegas: tuple[GF2Vector, ...]

    def __len__(self) -> int:
        return len(self.colorings)

    def __iter__(self):
        return iter(self.colorings)

    def __getitem__(self, j: int) -> PanelColoring:
        return self.colorings[j]


def extension_sequence(lam: PanelColoring, target: int | None = None) -> Extension:
    """Raise the rank of ``lam`` one step at a time until it is maximally independent.

    ``lam`` is first moved into (Z/2)^r with ``r = target`` (default: the panel
    count) by inclusion or by rank-preserving projection.  The first panels
    whose colors are independent (scanning in panel order) form the basis
    block; the remaining panels are then recolored in order with the first
    standard basis vectors not yet in the span.
    """
    r = lam.k if target is None else target
    if r < lam.k:
        raise ColoringError(f"target rank {r} below panel count {lam.k} can never be maximally independent")
    lam0 = embed_coloring(lam, r) if lam.ambient <= r else project_coloring(lam, r)

    basis_pos: list[int] = []
    rows: list[int] = []
    for j, c in enumerate(lam0.colors):
        if rank_of_rows(rows + [c.bits]) > len(rows):
            rows.append(c.bits)
            basis_pos.append(j)
    m = len(rows)
    others = [j for j in range(lam0.k) if j not in basis_pos]
    order = tuple(basis_pos + others)

    omegas: list[GF2Vector] = []
    current = list(rows)
    for i in range(r):
        if len(omegas) == lam0.k - m:
            break
        e = 1 << i
        if rank_of_rows(current + [e]) > len(current):
            current.append(e)
            omegas.append(GF2Vector(e, r))

    seq = [lam0]
    colors = list(lam0.colors)
    for j, pos in enumerate(others):
        colors[pos] = omegas[j]
        seq.append(PanelColoring(lam0.panels, r, tuple(colors)))
    return Extension(tuple(seq), order, tuple(omegas))


def induced_facet_coloring(c: FacetColoring, facet: int) -> tuple[FacetColoring, int]:
    """Coloring induced on facet ``facet`` modulo the facet's own color.

    Facet ``F ∩ F_j`` of the facet polytope gets ``c(F_j)`` reduced into
    (Z/2)^ambient / <c(F)>, written in the coordinates left after dropping the
    pivot coordinate of ``c(F)``.  Returns the coloring and the new ambient rank.
    When ``c(F) = 0`` nothing is divided out.
    """
    fp, parents = facet_polytope(c.polytope, facet)
    own = c.colors[facet].bits
    if own == 0:
        return FacetColoring(fp, c.ambient, tuple(c.colors[j] for j in parents)), c.ambient
    pivot = (own & -own).bit_length() - 1
    low = (1 << pivot) - 1
    new_len = c.ambient - 1
    colors = []
    for j in parents:
        bits = c.colors[j].bits
        if bits >> pivot & 1:
            bits ^= own
        bits = (bits & low) | ((bits >> (pivot + 1)) << pivot)
        colors.append(GF2Vector(bits, new_len))
    return FacetColoring(fp, new_len, tuple(colors)), new_len


def standard_coloring(panels: Sequence[int]) -> PanelColoring:
    """The maximally independent coloring ``P_j -> e_j`` in (Z/2)^k."""
    k = len(panels)
    return PanelColoring(tuple(panels), k, tuple(GF2Vector.basis(j, k) for j in range(k)))
