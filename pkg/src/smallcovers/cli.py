"""Command-line front end.

Exit status: 0 when every check in the run passed, 1 when one failed,
2 on usage or input errors.  ``PATH`` may also name a bundled catalog
polytope (see ``smallcovers catalog``).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from . import catalog
from .coloring import (
    DEFAULT_COLORING_CAP,
    CapExceededError,
    ColoringError,
    FacetColoring,
    PanelColoring,
    moment_angle_coloring,
    require_characteristic,
)
from .complex import build, export_chain_complex, predicted_cell_count
from .fileformat import ParseError, PolytopeFile, load_polytope, parse_bitstrings
from .polytope import (
    f_vector,
    facets_not_through_vertex,
    h_vector,
    is_product_of_simplices,
    two_face_census,
)
from .verify import (
    CLAIMS,
    VerificationReport,
    check_all_towers,
    check_betti_equals_h,
    check_component_count,
    check_double_cover_tower,
    check_euler_relation,
    check_facial_restriction,
    check_hcc,
    check_max_independent_dominance,
    check_reductions,
    find_equality_colorings,
)

log = logging.getLogger("smallcovers")

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MOMENT_ANGLE_MAX_FACETS = 16
SOFT_CELL_THRESHOLD = 200_000
EXTRA_CLAIMS = ("facial", "reductions")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    path: str
    m: int = 1
    vertex: str = "auto"
    cap: int = DEFAULT_COLORING_CAP
    format: str = "text"
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.cap < 1:
            raise UsageError("--cap must be at least 1")
        if self.m < 0:
            raise UsageError("--m must be non-negative")
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")


def _open(path: str) -> PolytopeFile:
    p = Path(path)
    if p.exists():
        return load_polytope(p)
    try:
        return catalog.load(path)
    except KeyError:
        raise UsageError(f"{path}: no such file or catalog polytope") from None


def _coloring(pf: PolytopeFile, literal: str | None, label: str | None) -> FacetColoring:
    if literal is not None:
        try:
            bits = parse_bitstrings(literal)
        except ValueError as e:
            raise UsageError(f"--mu: {e}") from None
        if len(bits) != pf.polytope.facet_count:
            raise UsageError(f"--mu: {len(bits)} colors for {pf.polytope.facet_count} facets")
        return FacetColoring.from_bitstrings(pf.polytope, bits)
    try:
        return pf.coloring(label)
    except KeyError as e:
        raise UsageError(f"{e.args[0]}; pass --mu") from None


def _vertex(cfg: RunConfig, pf: PolytopeFile) -> int:
    if cfg.vertex == "auto":
        return 0
    try:
        v = int(cfg.vertex)
    except ValueError:
        raise UsageError(f"--vertex must be an index or 'auto', got {cfg.vertex!r}") from None
    if not 0 <= v < pf.polytope.vertex_count:
        raise UsageError(f"--vertex {v} out of range 0..{pf.polytope.vertex_count - 1}")
    return v


def _emit(cfg: RunConfig, payload: dict[str, Any], text: str) -> None:
    if cfg.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def cmd_info(cfg: RunConfig) -> int:
    pf = _open(cfg.path)
    p = pf.polytope
    fv, hv = f_vector(p), h_vector(p)
    census = dict(sorted(two_face_census(p).items())) if p.dim >= 2 else {}
    is_prod, sig = is_product_of_simplices(p)
    prod_text = f"yes {sig}" if is_prod and sig is not None else ("yes" if is_prod else "no")
    census_text = " ".join(f"{n}-gon x{c}" for n, c in census.items()) or "-"
    text = "\n".join(
        [
            f"polytope: {p.name}",
            f"dim={p.dim} facets={p.facet_count} vertices={p.vertex_count} k={p.k}",
            f"f={_tup(fv)} h={_tup(hv)} product-of-simplices: {prod_text}",
            f"two-faces: {census_text}",
        ]
    )
    _emit(
        cfg,
        {
            "polytope": p.name,
            "dim": p.dim,
            "facets": p.facet_count,
            "f_vector": list(fv),
            "h_vector": list(hv),
            "two_face_census": {str(k): v for k, v in census.items()},
            "product_of_simplices": is_prod,
            "signature": list(sig.parts) if sig is not None else None,
        },
        text,
    )
    return EXIT_PASS


def _tup(xs: Sequence[int]) -> str:
    return "(" + ",".join(map(str, xs)) + ")"


def _complex_summary(cfg: RunConfig, label: str, c, export: str | None) -> int:
    b = c.betti
    checks = c.structural_checks()
    ok = all(checks.values())
    if export:
        Path(export).write_text(export_chain_complex(c))
    text = f"{label}: β={b} hrk={b.hrk} χ={c.euler_characteristic()} components={c.components} cells={_tup(c.cell_counts())}"
    if not ok:
        text += "\nstructural check failed: " + ", ".join(k for k, v in checks.items() if not v)
    _emit(
        cfg,
        {
            "label": label,
            "betti": list(b.values),
            "hrk": b.hrk,
            "euler": c.euler_characteristic(),
            "components": c.components,
            "cells": list(c.cell_counts()),
            "checks": checks,
        },
        text,
    )
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_cover(cfg: RunConfig, mu_literal: str | None, label: str | None, export: str | None) -> int:
    pf = _open(cfg.path)
    mu = _coloring(pf, mu_literal, label)
    if mu.ambient != pf.polytope.dim:
        raise UsageError(f"a characteristic function takes values in (Z2)^{pf.polytope.dim}")
    try:
        require_characteristic(mu)
    except ColoringError as e:
        raise UsageError(str(e)) from None
    return _complex_summary(cfg, f"small cover over {pf.polytope.name}", build(pf.polytope, mu), export)


def cmd_moment_angle(cfg: RunConfig, max_facets: int, export: str | None) -> int:
    pf = _open(cfg.path)
    p = pf.polytope
    if p.facet_count > max_facets:
        raise UsageError(
            f"{p.facet_count} facets means 2^{p.facet_count} copies of the polytope; "
            f"refusing above the cap of {max_facets} facets (--max-facets)"
        )
    mu0 = moment_angle_coloring(p)
    cells = predicted_cell_count(p, mu0)
    if cells > SOFT_CELL_THRESHOLD:
        log.warning("building %d cells; this may take a while", cells)
    return _complex_summary(cfg, f"real moment-angle manifold of {p.name}", build(p, mu0), export)


def _run_claim(
    claim: str, pf: PolytopeFile, mu: FacetColoring, v0: int, cfg: RunConfig, lam_literal: str | None
) -> VerificationReport:
    p = pf.polytope
    if claim == "hcc":
        return check_hcc(p, mu, v0, cfg.m, cfg.cap, cfg.jobs)
    if claim == "equality":
        return find_equality_colorings(p, mu, v0, cfg.m, cfg.cap, cfg.jobs)[1]
    if claim == "components":
        return check_component_count(p, mu, v0, cfg.m, cfg.cap, cfg.jobs)
    if claim == "dominance":
        return check_max_independent_dominance(p, mu, v0, cfg.cap, cfg.jobs)
    if claim == "tower":
        if lam_literal is None:
            return check_all_towers(p, mu, v0, cfg.m, cfg.cap)
        panels = facets_not_through_vertex(p, v0)
        try:
            lam = PanelColoring.from_bitstrings(panels, parse_bitstrings(lam_literal))
        except (ValueError, ColoringError) as e:
            raise UsageError(f"--lambda: {e}") from None
        return check_double_cover_tower(p, mu, v0, lam)
    if claim == "euler":
        if p.dim != 2:
            raise UsageError("claim 'euler' needs a 2-dimensional polytope")
        return check_euler_relation(p, mu, v0, cfg.m, cfg.cap, cfg.jobs)
    if claim == "betti-h":
        return check_betti_equals_h(p, mu)
    if claim == "facial":
        return check_facial_restriction(p, mu, v0)
    if claim == "reductions":
        return check_reductions(p, mu, v0, cfg.m, cap=cfg.cap)
    raise UsageError(f"unknown claim {claim!r}; choose from {', '.join(CLAIMS + EXTRA_CLAIMS)}")


_VERTEX_DEPENDENT = {"panel_order", "omegas"}


def cmd_verify(
    cfg: RunConfig,
    claim: str,
    mu_literal: str | None,
    label: str | None,
    lam_literal: str | None,
    cross_check: bool,
) -> int:
    if claim not in CLAIMS + EXTRA_CLAIMS:
        raise UsageError(f"unknown claim {claim!r}; choose from {', '.join(CLAIMS + EXTRA_CLAIMS)}")
    pf = _open(cfg.path)
    mu = _coloring(pf, mu_literal, label)
    try:
        require_characteristic(mu)
    except ColoringError as e:
        raise UsageError(str(e)) from None
    v0 = _vertex(cfg, pf)
    reports = [_run_claim(claim, pf, mu, v0, cfg, lam_literal)]
    if cross_check and lam_literal is None and pf.polytope.vertex_count > 1:
        v1 = 1 if v0 == 0 else 0
        other = _run_claim(claim, pf, mu, v1, cfg, None)
        a = {k: v for k, v in reports[0].stats.items() if k not in _VERTEX_DEPENDENT}
        b = {k: v for k, v in other.stats.items() if k not in _VERTEX_DEPENDENT}
        if a != b:
            other.passed = False
            other.problems.append(f"statistics differ between base vertices {v0} and {v1}")
        reports.append(other)
    if cfg.format == "json":
        print(json.dumps({"reports": [r.to_dict() for r in reports]}, sort_keys=True))
    else:
        print("\n".join(r.to_text() for r in reports))
    return EXIT_PASS if all(r.passed for r in reports) else EXIT_FAIL


def cmd_catalog(cfg: RunConfig) -> int:
    items = catalog.names()
    _emit(cfg, {"catalog": items}, "\n".join(items))
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="smallcovers", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser, path: bool = True) -> None:
        if path:
            sp.add_argument("path", help="polytope file or catalog name")
        sp.add_argument("--format", choices=("text", "json"), default="text")

    def coloring_opts(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--mu", help="characteristic function as bit-strings, one per facet")
        sp.add_argument("--coloring", help="named coloring from the file (default: mu)")

    sp = sub.add_parser("info", help="f/h-vectors, 2-faces and product recognition")
    common(sp)

    sp = sub.add_parser("cover", help="homology of a small cover")
    common(sp)
    coloring_opts(sp)
    sp.add_argument("--export", metavar="FILE", help="write the chain complex as text")

    sp = sub.add_parser("moment-angle", help="homology of the real moment-angle manifold")
    common(sp)
    sp.add_argument("--max-facets", type=int, default=MOMENT_ANGLE_MAX_FACETS)
    sp.add_argument("--export", metavar="FILE", help="write the chain complex as text")

    sp = sub.add_parser("verify", help="run one theorem check")
    common(sp)
    coloring_opts(sp)
    sp.add_argument("--claim", required=True, choices=CLAIMS + EXTRA_CLAIMS)
    sp.add_argument("--m", type=int, default=1, help="bundle rank")
    sp.add_argument("--vertex", default="auto", help="base vertex index, or 'auto' for vertex 0")
    sp.add_argument("--cap", type=int, default=DEFAULT_COLORING_CAP, help="largest m*k to enumerate")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--lambda", dest="lam", help="panel coloring for --claim tower")
    sp.add_argument("--cross-check", action="store_true", help="repeat with a second base vertex")

    sp = sub.add_parser("catalog", help="list bundled polytopes")
    common(sp, path=False)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg = RunConfig(
            command=args.command,
            path=getattr(args, "path", ""),
            m=getattr(args, "m", 1),
            vertex=getattr(args, "vertex", "auto"),
            cap=getattr(args, "cap", DEFAULT_COLORING_CAP),
            format=args.format,
            jobs=getattr(args, "jobs", 1),
        )
        if args.command == "info":
            return cmd_info(cfg)
        if args.command == "cover":
            return cmd_cover(cfg, args.mu, args.coloring, args.export)
        if args.command == "moment-angle":
            return cmd_moment_angle(cfg, args.max_facets, args.export)
        if args.command == "verify":
            return cmd_verify(cfg, args.claim, args.mu, args.coloring, args.lam, args.cross_check)
        return cmd_catalog(cfg)
    except (UsageError, ParseError, CapExceededError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
