"""Bundled test polytopes, each with at least one characteristic function ``mu``."""

from __future__ import annotations

from importlib import resources

from ..fileformat import PolytopeFile, parse_polytope

__all__ = ["names", "load"]

_SUFFIX = ".poly"


def names() -> list[str]:
    root = resources.files(__name__)
    return sorted(p.name[: -len(_SUFFIX)] for p in root.iterdir() if p.name.endswith(_SUFFIX))


def load(name: str) -> PolytopeFile:
    res = resources.files(__name__) / f"{name}{_SUFFIX}"
    if not res.is_file():
        raise KeyError(f"no catalog polytope {name!r}; available: {', '.join(names())}")
    return parse_polytope(res.read_text(), source=f"catalog/{name}{_SUFFIX}")
