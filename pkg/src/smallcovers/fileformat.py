"""Plain-text polytope files.

Grammar (one item per line, ``#`` starts a comment)::

    name: <text>                      optional
    dim: <n>
    facets: <count>                   or  facets: <name> <name> ...
    vertices:
      <facet> <facet> ...             one vertex per line, n facets each;
      ...                             facets by index or by name
    coloring <label>: <bits> <bits> ...   optional, one bit-string per facet

Keys may appear in any order except that vertex lines follow ``vertices:``.
Bit-string ``i`` colors facet ``i``; its first character is coordinate 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .coloring import FacetColoring
from .gf2 import GF2Vector
from .polytope import PolytopeError, SimplePolytope, from_incidence

__all__ = ["PolytopeFile", "ParseError", "parse_polytope", "load_polytope", "format_polytope", "parse_bitstrings"]


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None) -> None:
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"line {line}: "
        elif where:
            where += " "
        super().__init__(where + message)
        self.line = line


@dataclass
class PolytopeFile:
    polytope: SimplePolytope
    colorings: dict[str, list[str]] = field(default_factory=dict)

    def coloring(self, label: str | None = None) -> FacetColoring:
        if label is None:
            if "mu" in self.colorings:
                label = "mu"
            elif self.colorings:
                label = next(iter(self.colorings))
            else:
                raise KeyError("the file defines no coloring")
        if label not in self.colorings:
            raise KeyError(f"no coloring named {label!r}; have {sorted(self.colorings)}")
        return FacetColoring.from_bitstrings(self.polytope, self.colorings[label])


def parse_bitstrings(text: str) -> list[str]:
    """Split a coloring literal like ``"10 01,11"`` and validate each bit-string."""
    items = [t for t in text.replace(",", " ").split() if t]
    for t in items:
        GF2Vector.from_bitstring(t)
    lengths = {len(t) for t in items}
    if len(lengths) > 1:
        raise ValueError(f"bit-strings of different lengths: {items}")
    return items


def parse_polytope(text: str, source: str | None = None) -> PolytopeFile:
    dim = None
    facet_count = None
    names: list[str] | None = None
    name = ""
    vertex_lines: list[tuple[int, list[str]]] = []
    colorings: dict[str, tuple[int, list[str]]] = {}
    in_vertices = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        key = key.strip()
        head = key.split()[0] if key else ""
        if sep and head in ("name", "dim", "facets", "vertices", "coloring"):
            in_vertices = False
            value = value.strip()
            if head == "name":
                name = value
            elif head == "dim":
                try:
                    dim = int(value)
                except ValueError:
                    raise ParseError(f"dim: expected an integer, got {value!r}", lineno, source) from None
            elif head == "facets":
                toks = value.split()
                if len(toks) == 1 and toks[0].isdigit():
                    facet_count = int(toks[0])
                elif toks:
                    names = toks
                    facet_count = len(toks)
                else:
                    raise ParseError("facets: expected a count or a list of names", lineno, source)
            elif head == "vertices":
                in_vertices = True
                if value:
                    raise ParseError("vertices: list vertices on the following lines", lineno, source)
            else:
                parts = key.split()
                if len(parts) != 2:
                    raise ParseError("coloring: expected 'coloring <label>: <bits> ...'", lineno, source)
                try:
                    colorings[parts[1]] = (lineno, parse_bitstrings(value))
                except ValueError as e:
                    raise ParseError(f"coloring {parts[1]}: {e}", lineno, source) from None
            continue
        if in_vertices:
            vertex_lines.append((lineno, line.replace(",", " ").split()))
            continue
        raise ParseError(f"unrecognized line {raw.strip()!r}", lineno, source)

    if dim is None:
        raise ParseError("missing field 'dim'", source=source)
    if facet_count is None:
        raise ParseError("missing field 'facets'", source=source)
    if not vertex_lines:
        raise ParseError("missing field 'vertices'", source=source)

    lookup = {n: i for i, n in enumerate(names)} if names else {}
    verts = []
    for lineno, toks in vertex_lines:
        facets = []
        for t in toks:
            if t in lookup:
                facets.append(lookup[t])
            elif t.lstrip("-").isdigit():
                facets.append(int(t))
            else:
                raise ParseError(f"vertex: unknown facet {t!r}", lineno, source)
        if len(facets) != dim:
            raise ParseError(f"vertex: expected {dim} facets, got {len(facets)}", lineno, source)
        verts.append(facets)
    try:
        p = from_incidence(dim, facet_count, verts, names, name=name or (Path(source).stem if source else ""))
    except PolytopeError as e:
        raise ParseError(str(e), source=source) from None

    out = {}
    for label, (lineno, bits) in colorings.items():
        if len(bits) != facet_count:
            raise ParseError(f"coloring {label}: {len(bits)} colors for {facet_count} facets", lineno, source)
        out[label] = bits
    return PolytopeFile(p, out)


def load_polytope(path: str | Path) -> PolytopeFile:
    path = Path(path)
    return parse_polytope(path.read_text(), source=str(path))


def format_polytope(p: SimplePolytope, colorings: dict[str, list[str]] | None = None) -> str:
    lines = []
    if p.name:
        lines.append(f"name: {p.name}")
    lines.append(f"dim: {p.dim}")
    default = [f"F{i}" for i in range(p.facet_count)]
    if list(p.facet_names) == default:
        lines.append(f"facets: {p.facet_count}")
        lines.append("vertices:")
        for v in range(p.vertex_count):
            lines.append("  " + " ".join(map(str, p.vertex_facets(v))))
    else:
        lines.append("facets: " + " ".join(p.facet_names))
        lines.append("vertices:")
        for v in range(p.vertex_count):
            lines.append("  " + " ".join(p.facet_names[i] for i in p.vertex_facets(v)))
    for label, bits in (colorings or {}).items():
        lines.append(f"coloring {label}: " + " ".join(bits))
    return "\n".join(lines) + "\n"
