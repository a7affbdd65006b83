"""Linear algebra over Z/2 on int bitsets.

Coordinate ``i`` of a vector of length ``N`` is stored in bit ``i`` of a
Python int, so the bit-string ``"101"`` is ``e_1 + e_3`` and has value
``0b101``.  Python ints are unbounded, which gives the multi-word fallback
for free; every desk-scale instance fits in a single 64-bit word anyway.

Pivots are always taken at the *lowest* set coordinate.  A reduced basis
therefore has its pivot coordinates cleared in every other row, and the
canonical representative of a coset ``g + H`` is ``g`` with every pivot
coordinate of ``H`` cleared.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

__all__ = [
    "GF2Vector",
    "GF2Matrix",
    "Subgroup",
    "LengthMismatchError",
    "SubgroupTooLargeError",
    "DEFAULT_ENUMERATION_CAP",
    "rank",
    "rank_of_rows",
    "reduce_rows",
    "kernel_basis",
    "coset_canonical",
    "enumerate_subgroup",
    "span_contains",
    "span",
]

DEFAULT_ENUMERATION_CAP = 20


class LengthMismatchError(ValueError):
    pass


class SubgroupTooLargeError(ValueError):
    pass


def _mask(length: int) -> int:
    return (1 << length) - 1


@dataclass(frozen=True, order=True)
class GF2Vector:
    """A fixed-length vector over Z/2 packed into an int."""

    bits: int
    length: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("length must be non-negative")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError(f"bits {self.bits:#x} do not fit in length {self.length}")

    @classmethod
    def zero(cls, length: int) -> GF2Vector:
        return cls(0, length)

    @classmethod
    def basis(cls, i: int, length: int) -> GF2Vector:
        """Standard basis vector with a single 1 at (0-based) coordinate ``i``."""
        if not 0 <= i < length:
            raise IndexError(f"coordinate {i} out of range for length {length}")
        return cls(1 << i, length)

    @classmethod
    def from_bitstring(cls, text: str) -> GF2Vector:
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a bit-string: {text!r}")
        bits = 0
        for i, ch in enumerate(text):
            if ch == "1":
                bits |= 1 << i
        return cls(bits, len(text))

    @classmethod
    def from_sequence(cls, entries: Iterable[int]) -> GF2Vector:
        entries = list(entries)
        bits = 0
        for i, e in enumerate(entries):
            if e & 1:
                bits |= 1 << i
        return cls(bits, len(entries))

    def to_bitstring(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.length))

    def to_tuple(self) -> tuple[int, ...]:
        return tuple((self.bits >> i) & 1 for i in range(self.length))

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __len__(self) -> int:
        return self.length

    def __add__(self, other: GF2Vector) -> GF2Vector:
        if not isinstance(other, GF2Vector):
            return NotImplemented
        _check_lengths(self.length, other.length)
        return GF2Vector(self.bits ^ other.bits, self.length)

    __xor__ = __add__
    __sub__ = __add__

    def is_zero(self) -> bool:
        return self.bits == 0

    def weight(self) -> int:
        return self.bits.bit_count()

    def concat(self, other: GF2Vector) -> GF2Vector:
        """Direct sum ``(self, other)``: ``other`` occupies the trailing coordinates."""
        return GF2Vector(self.bits | (other.bits << self.length), self.length + other.length)

    def __str__(self) -> str:
        return self.to_bitstring()


def _check_lengths(a: int, b: int) -> None:
    if a != b:
        raise LengthMismatchError(f"length mismatch: {a} != {b}")


def reduce_rows(rows: Iterable[int]) -> list[int]:
    """Reduced row-echelon basis of the span of ``rows``.

    Each returned row has a distinct pivot (its lowest set bit) that is clear
    in every other returned row.  Rows are sorted by pivot.
    """
    basis: list[int] = []
    for r in rows:
        for b in basis:
            if r & (b & -b):
                r ^= b
        if r:
            p = r & -r
            basis = [b ^ r if b & p else b for b in basis]
            basis.append(r)
    basis.sort(key=lambda b: b & -b)
    return basis


def rank_of_rows(rows: Iterable[int]) -> int:
    """Rank of a list of int-packed rows.

    This is the hot path of every Betti computation, so it keeps a plain
    echelon list keyed by pivot bit instead of a fully reduced basis.
    """
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            p = r & -r
            b = pivots.get(p)
            if b is None:
                pivots[p] = r
                break
            r ^= b
    return len(pivots)


@dataclass(frozen=True)
class GF2Matrix:
    """Matrix over Z/2 stored as int-packed rows of a common length."""

    rows: tuple[int, ...]
    ncols: int
    _echelon: tuple[int, ...] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        limit = 1 << self.ncols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ValueError(f"row {r:#x} does not fit in {self.ncols} columns")

    @classmethod
    def from_vectors(cls, vectors: Sequence[GF2Vector], ncols: int | None = None) -> GF2Matrix:
        if ncols is None:
            if not vectors:
                raise ValueError("column count needed for an empty matrix")
            ncols = vectors[0].length
        for v in vectors:
            _check_lengths(v.length, ncols)
        return cls(tuple(v.bits for v in vectors), ncols)

    @classmethod
    def from_bitstrings(cls, rows: Sequence[str], ncols: int | None = None) -> GF2Matrix:
        return cls.from_vectors([GF2Vector.from_bitstring(r) for r in rows], ncols)

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> GF2Matrix:
        return cls.from_vectors([GF2Vector.from_sequence(r) for r in rows], ncols)

    @classmethod
    def identity(cls, n: int) -> GF2Matrix:
        return cls(tuple(1 << i for i in range(n)), n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> GF2Matrix:
        return cls((0,) * nrows, ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def row(self, i: int) -> GF2Vector:
        return GF2Vector(self.rows[i], self.ncols)

    def echelon(self) -> tuple[int, ...]:
        if self._echelon is None:
            object.__setattr__(self, "_echelon", tuple(reduce_rows(self.rows)))
        return self._echelon  # type: ignore[return-value]

    def transpose(self) -> GF2Matrix:
        cols = []
        for j in range(self.ncols):
            c = 0
            for i, r in enumerate(self.rows):
                if (r >> j) & 1:
                    c |= 1 << i
            cols.append(c)
        return GF2Matrix(tuple(cols), len(self.rows))

    def apply(self, v: GF2Vector) -> GF2Vector:
        """Matrix-vector product ``self @ v``."""
        _check_lengths(v.length, self.ncols)
        out = 0
        for i, r in enumerate(self.rows):
            if (r & v.bits).bit_count() & 1:
                out |= 1 << i
        return GF2Vector(out, len(self.rows))

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]


@dataclass(frozen=True)
class Subgroup:
    """Subgroup of (Z/2)^N held as a reduced row-echelon basis."""

    basis: tuple[int, ...]
    length: int

    def __post_init__(self) -> None:
        reduced = tuple(reduce_rows(self.basis))
        if len(reduced) != len(self.basis):
            raise ValueError("subgroup basis rows must be linearly independent")
        limit = 1 << self.length
        if any(b >= limit for b in reduced):
            raise ValueError("basis row does not fit in ambient length")
        object.__setattr__(self, "basis", reduced)

    @classmethod
    def trivial(cls, length: int) -> Subgroup:
        return cls((), length)

    @classmethod
    def full(cls, length: int) -> Subgroup:
        return cls(tuple(1 << i for i in range(length)), length)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def order(self) -> int:
        return 1 << len(self.basis)

    @property
    def pivot_mask(self) -> int:
        m = 0
        for b in self.basis:
            m |= b & -b
        return m

    def basis_vectors(self) -> list[GF2Vector]:
        return [GF2Vector(b, self.length) for b in self.basis]

    def matrix(self) -> GF2Matrix:
        return GF2Matrix(self.basis, self.length)

    def __contains__(self, v: GF2Vector) -> bool:
        return span_contains(self, v)

    def canonical_bits(self, g: int) -> int:
        for b in self.basis:
            if g & (b & -b):
                g ^= b
        return g


def span(vectors: Iterable[GF2Vector], length: int) -> Subgroup:
    """Subgroup generated by ``vectors``."""
    rows = []
    for v in vectors:
        _check_lengths(v.length, length)
        rows.append(v.bits)
    return Subgroup(tuple(reduce_rows(rows)), length)


def rank(m: GF2Matrix) -> int:
    """Dimension of the row space of ``m``."""
    if m._echelon is not None:
        return len(m._echelon)
    return rank_of_rows(m.rows)


def kernel_basis(m: GF2Matrix) -> Subgroup:
    """The subgroup ``{v : m v = 0}`` of (Z/2)^ncols."""
    n = m.ncols
    # Row-reduce m, then read the null space off the free columns.
    ech = reduce_rows(m.rows)
    pivot_of = {(b & -b).bit_length() - 1: b for b in ech}
    free = [j for j in range(n) if j not in pivot_of]
    vecs = []
    for j in free:
        v = 1 << j
        for p, row in pivot_of.items():
            if (row >> j) & 1:
                v |= 1 << p
        vecs.append(v)
    return Subgroup(tuple(vecs), n)


def coset_canonical(g: GF2Vector, h: Subgroup) -> GF2Vector:
    """Canonical representative of ``g + h``: ``g`` with ``h``'s pivot coordinates cleared."""
    _check_lengths(g.length, h.length)
    return GF2Vector(h.canonical_bits(g.bits), g.length)


def enumerate_subgroup(h: Subgroup, cap: int = DEFAULT_ENUMERATION_CAP) -> list[GF2Vector]:
    """All ``2**dim`` elements of ``h`` in Gray-code order over the basis coefficients."""
    if h.dim > cap:
        raise SubgroupTooLargeError(
            f"subgroup of dimension {h.dim} exceeds the enumeration cap {cap}"
        )
    return [GF2Vector(bits, h.length) for bits in _gray_walk(h.basis)]


def _gray_walk(basis: Sequence[int]) -> Iterator[int]:
    cur = 0
    yield cur
    for step in range(1, 1 << len(basis)):
        cur ^= basis[(step & -step).bit_length() - 1]
        yield cur


def span_contains(h: Subgroup, v: GF2Vector) -> bool:
    _check_lengths(v.length, h.length)
    return h.canonical_bits(v.bits) == 0
