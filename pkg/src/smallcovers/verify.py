"""Exhaustive and targeted checks of the lower bound hrk >= 2^m and its equality case.

Every check walks colorings of the panels (the facets missing a base
vertex ``v0``), glues back the principal bundle with
:func:`~smallcovers.coloring.compile_glueback`, builds the quotient complex
and compares what it computes with what the theory predicts.  The result is
a :class:`VerificationReport`; a failing report always carries the exact
coloring that failed as bit-strings.

Sweeps over ``Col_m`` can be split across worker processes (``jobs > 1``).
Outcomes are merged in coloring-index order, so reports do not depend on
the number of workers.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Iterable, Sequence

from .coloring import (
    DEFAULT_COLORING_CAP,
    FacetColoring,
    PanelColoring,
    _check_cap,
    coloring_rank,
    compile_glueback,
    count_panel_colorings,
    embed_coloring,
    enumerate_panel_colorings,
    extension_sequence,
    induced_facet_coloring,
    panel_coloring_at,
    project_coloring,
    require_characteristic,
    standard_coloring,
)
from .complex import build, sphere_product_betti
from .polytope import (
    SimplePolytope,
    f_vector,
    facets_not_through_vertex,
    h_vector,
    is_product_of_simplices,
)

log = logging.getLogger(__name__)

__all__ = [
    "VerificationReport",
    "ColoringOutcome",
    "CLAIMS",
    "survey",
    "polytope_problems",
    "check_hcc",
    "find_equality_colorings",
    "check_equality_characterization",
    "check_component_count",
    "check_max_independent_dominance",
    "check_double_cover_tower",
    "check_all_towers",
    "check_euler_relation",
    "check_betti_equals_h",
    "check_facial_restriction",
    "check_reductions",
]


@dataclass
class VerificationReport:
    claim: str
    instance: dict[str, Any]
    passed: bool
    stats: dict[str, Any] = field(default_factory=dict)
    witnesses: list[str] = field(default_factory=list)
    counterexample: str | None = None
    problems: list[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> VerificationReport:
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> VerificationReport:
        return cls.from_dict(json.loads(text))

    def to_text(self) -> str:
        inst = " ".join(f"{k}={_fmt(v)}" for k, v in self.instance.items())
        lines = [f"[{self.status}] {self.claim}: {inst}"]
        for k, v in self.stats.items():
            lines.append(f"  {k}: {_fmt(v)}")
        if self.witnesses:
            shown = self.witnesses[:8]
            more = f" (+{len(self.witnesses) - 8} more)" if len(self.witnesses) > 8 else ""
            lines.append(f"  witnesses: {'; '.join(shown)}{more}")
        if self.counterexample is not None:
            lines.append(f"  counterexample: {self.counterexample}")
        for p in self.problems[:10]:
            lines.append(f"  problem: {p}")
        return "\n".join(lines)


def _fmt(v: Any) -> str:
    if isinstance(v, (list, tuple)):
        return "(" + ",".join(_fmt(x) for x in v) + ")"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_fmt(x)}" for k, x in v.items()) + "}"
    return str(v)


@dataclass(frozen=True)
class ColoringOutcome:
    """What the complex of one glued-back coloring looks like."""

    index: int
    coloring: str
    rank: int
    betti: tuple[int, ...]
    components: int
    component_bettis: tuple[tuple[int, ...], ...]
    euler: int
    failed_checks: tuple[str, ...]
    cells: int

    @property
    def hrk(self) -> int:
        return sum(self.betti)


def _instance(p: SimplePolytope, mu: FacetColoring, v0: int | None = None, **extra: Any) -> dict[str, Any]:
    inst: dict[str, Any] = {
        "polytope": p.name or f"{p.dim}-polytope/{p.facet_count} facets",
        "mu": mu.to_bitstrings(),
    }
    if v0 is not None:
        inst["v0"] = v0
    inst.update(extra)
    return inst


def polytope_problems(p: SimplePolytope) -> list[str]:
    """Dehn–Sommerville and ``sum h = f_0``; empty list when both hold."""
    h = h_vector(p)
    out = []
    if h != h[::-1]:
        out.append(f"h-vector {h} is not palindromic")
    if sum(h) != f_vector(p)[0]:
        out.append(f"sum of h-vector {sum(h)} != vertex count {f_vector(p)[0]}")
    return out


def _outcome(p: SimplePolytope, mu: FacetColoring, v0: int, lam: PanelColoring, index: int) -> ColoringOutcome:
    c = build(p, compile_glueback(mu, v0, lam))
    failed = tuple(name for name, ok in c.structural_checks().items() if not ok)
    comps = c.components
    cb = tuple(b.values for b in c.component_bettis) if comps > 1 else (c.betti.values,)
    return ColoringOutcome(
        index=index,
        coloring=lam.label(),
        rank=coloring_rank(lam),
        betti=c.betti.values,
        components=comps,
        component_bettis=cb,
        euler=c.euler_characteristic(),
        failed_checks=failed,
        cells=c.size,
    )


def _survey_range(args: tuple) -> list[ColoringOutcome]:
    p, mu, v0, m, start, stop = args
    panels = facets_not_through_vertex(p, v0)
    return [_outcome(p, mu, v0, panel_coloring_at(panels, m, i), i) for i in range(start, stop)]


def survey(
    p: SimplePolytope,
    mu: FacetColoring,
    v0: int,
    m: int,
    cap: int = DEFAULT_COLORING_CAP,
    jobs: int = 1,
) -> list[ColoringOutcome]:
    """Outcomes for every coloring in ``Col_m``, in enumeration order."""
    require_characteristic(mu)
    panels = facets_not_through_vertex(p, v0)
    _check_cap(len(panels), m, cap)
    total = count_panel_colorings(len(panels), m)
    if jobs <= 1 or total < 64:
        return _survey_range((p, mu, v0, m, 0, total))
    chunk = max(16, total // (jobs * 4))
    tasks = [(p, mu, v0, m, s, min(s + chunk, total)) for s in range(0, total, chunk)]
    out: list[ColoringOutcome] = []
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for part in pool.map(_survey_range, tasks):
            out.extend(part)
    out.sort(key=lambda o: o.index)
    return out


def _structural_problems(outcomes: Iterable[ColoringOutcome]) -> list[str]:
    return [f"{o.coloring}: {', '.join(o.failed_checks)}" for o in outcomes if o.failed_checks]


def _histogram(values: Iterable[int]) -> dict[str, int]:
    hist: dict[int, int] = {}
    for v in values:
        hist[v] = hist.get(v, 0) + 1
    return {str(k): hist[k] for k in sorted(hist)}


def check_hcc(
    p: SimplePolytope,
    mu: FacetColoring,
    v0: int,
    m: int,
    cap: int = DEFAULT_COLORING_CAP,
    jobs: int = 1,
    outcomes: Sequence[ColoringOutcome] | None = None,
) -> VerificationReport:
    """``hrk >= 2^m`` for every glued-back bundle in ``Col_m``."""
    if outcomes is None:
        outcomes = survey(p, mu, v0, m, cap, jobs)
    bound = 1 << m
    violations = [o for o in outcomes if o.hrk < bound]
    equal = [o for o in outcomes if o.hrk == bound]
    problems = _structural_problems(outcomes) + polytope_problems(p)
    hrks = [o.hrk for o in outcomes]
    return VerificationReport(
        claim="hcc",
        instance=_instance(p, mu, v0, m=m),
        passed=not violations and not problems,
        stats={
            "colorings": len(outcomes),
            "bound": bound,
            "min_hrk": min(hrks),
            "max_hrk": max(hrks),
            "hrk_histogram": _histogram(hrks),
            "violations": len(violations),
            "equality_count": len(equal),
        },
        witnesses=[o.coloring for o in equal],
        counterexample=violations[0].coloring if violations else None,
        problems=problems,
    )


def find_equality_colorings(
    p: SimplePolytope,
    mu: FacetColoring,
    v0: int,
    m: int,
    cap: int = DEFAULT_COLORING_CAP,
    jobs: int = 1,
    outcomes: Sequence[ColoringOutcome] | None = None,
) -> tuple[list[PanelColoring], VerificationReport]:
    """All colorings in ``Col_m`` with ``hrk = 2^m``, checked against the theory.

    The report fails if equality occurs over a polytope that is not a
    product of simplices, or if some component of an equality witness has a
    Betti vector different from the matching product of spheres.
    """
    if outcomes is None:
        outcomes = survey(p, mu, v0, m, cap, jobs)
    panels = facets_not_through_vertex(p, v0)
    bound = 1 << m
    equal = [o for o in outcomes if o.hrk == bound]
    is_prod, sig = is_product_of_simplices(p)
    expected = sphere_product_betti(sig).values if sig is not None else None
    problems = _structural_problems(outcomes) + polytope_problems(p)
    if equal and not is_prod:
        problems.append(f"equality over a polytope that is not a product of simplices ({len(equal)} colorings)")
    if is_prod and sig is None:
        problems.append("two-face census says product of simplices but factorization failed")
    connected = 0
    counterexample = None
    for o in equal:
        if o.components == 1:
            connected += 1
        if expected is not None:
            for cb in o.component_bettis:
                if cb != expected:
                    problems.append(f"{o.coloring}: component Betti {cb} != sphere product {expected}")
                    counterexample = counterexample or o.coloring
    found = [panel_coloring_at(panels, m, o.index) for o in equal]
    report = VerificationReport(
        claim="equality",
        instance=_instance(p, mu, v0, m=m),
        passed=not problems,
        stats={
            "colorings": len(outcomes),
            "equality_count": len(equal),
            "connected_equality_count": connected,
            "product_of_simplices": is_prod,
            "signature": list(sig.parts) if sig is not None else None,
            "sphere_product_betti": list(expected) if expected is not None else None,
        },
        witnesses=[o.coloring for o in equal],
        counterexample=counterexample,
        problems=problems,
    )
    return found, report


def check_equality_characterization(
    p: SimplePolytope,
    mu: FacetColoring,
    v0: int,
    ms: Sequence[int],
    cap: int = DEFAULT_COLORING_CAP,
    jobs: int = 1,
    surveys: dict[int, Sequence[ColoringOutcome]] | None = None,
) -> VerificationReport:
    """Equality ``hrk = 2^m`` occurs for some ``m`` in ``ms`` iff ``p`` is a product of simplices."""
    surveys = surveys or {}
    per_m = {}
    problems: list[str] = []
    witnesses: list[str] = []
    for m in ms:
        found, rep = find_equality_colorings(p, mu, v0, m, cap, jobs, surveys.get(m))
        per_m[str(m)] = len(found)
        problems.extend(f"m={m}: {x}" for x in rep.problems)
        witnesses.extend(f"m={m}: {w}" for w in rep.witnesses)
    is_prod, sig = is_product_of_simplices(p)
    exists = any(per_m.values())
    if exists != is_prod:
        problems.append(
            f"equality {'exists' if exists else 'never occurs'} for m in {list(ms)} "
            f"but product-of-simplices is {is_prod}"
        )
    return VerificationReport(
        claim="equality-iff-product",
        instance=_instance(p, mu, v0, ms=list(ms)),
        passed=not problems,
        stats={
            "equality_counts": per_m,
            "product_of_simplices": is_prod,
            "signature": list(sig.parts) if sig is not None else None,
        },
        witnesses=witnesses,
        problems=problems,
    )


def check_component_count(
    p: SimplePolytope,
    mu: FacetColoring,
    v0: int,
    m: int,
    cap: int = DEFAULT_COLORING_CAP,
    jobs: int = 1,
    outcomes: Sequence[ColoringOutcome] | None = None,
) -> VerificationReport:
    """``2^(m - rank)`` components, all with the same Betti vector."""
    if outcomes is None:
        outcomes = survey(p, mu, v0, m, cap, jobs)
    problems = _structural_problems(outcomes)
    bad = None
    for o in outcomes:
        want = 1 << (m - o.rank)
        if o.components != want:
            problems.append(f"{o.coloring}: {o.components} components, expected {want}")
            bad = bad or o.coloring
        if len(set(o.component_bettis)) != 1:
            problems.append(f"{o.coloring}: components have different Betti vectors {o.component_bettis}")
            bad = bad or o.coloring
    return VerificationReport(
        claim="components",
        instance=_instance(p, mu, v0, m=m),
        passed=not problems,
        stats={
            "colorings": len(outcomes),
            "rank_histogram": _histogram(o.rank for o in outcomes),
            "component_histogram": _histogram(o.components for o in outcomes),
        },
        counterexample=bad,
        problems=problems,
    )


def check_max_independent_dominance(
    p: SimplePolytope,
    mu: FacetColoring,
    v0: int,
    cap: int = DEFAULT_COLORING_CAP,
    jobs: int = 1,
    outcomes: Sequence[ColoringOutcome] | None = None,
) -> VerificationReport:
    """Over ``Col_k``, every maximally independent coloring attains the minimum hrk."""
    k = len(facets_not_through_vertex(p, v0))
    if outcomes is None:
        outcomes = survey(p, mu, v0, k, cap, jobs)
    lowest = min(o.hrk for o in outcomes)
    maxind = [o for o in outcomes if o.rank == k]
    values = sorted({o.hrk for o in maxind})
    problems = _structural_problems(outcomes)
    bad = next((o.coloring for o in maxind if o.hrk != lowest), None)
    if bad is not None:
        problems.append(f"maximally independent coloring {bad} does not attain the minimum {lowest}")
    if len(values) > 1:
        problems.append(f"maximally independent colorings disagree on hrk: {values}")
    return VerificationReport(
        claim="dominance",
        instance=_instance(p, mu, v0, m=k),
        passed=not problems,
        stats={
            "colorings": len(outcomes),
            "min_hrk": lowest,
            "maximally_independent": len(maxind),
            "max_independent_hrk": values,
            "argmin_count": sum(1 for o in outcomes if o.hrk == lowest),
        },
        counterexample=bad,
        problems=problems,
    )


def check_double_cover_tower(
    p: SimplePolytope, mu: FacetColoring, v0: int, lam: PanelColoring
) -> VerificationReport:
    """Walk ``K_0 <- K_1 <- ... <- K_{r-m}`` and bound each step by ``hrk(K_j) <= 2 hrk(K_{j-1})``.

    ``K_j`` is the component through the identity coset of the bundle glued
    from ``λ_j``.  Besides the bound, each ``K_j`` must have exactly twice
    the cells of ``K_{j-1}`` (it double covers it).  A step with ratio exactly
    2 would force a trivial double cover of a connected space; such steps
    are reported under ``doubling_steps``.
    """
    ext = extension_sequence(lam)
    ranks, hrks, sizes = [], [], []
    problems: list[str] = []
    for lj in ext:
        c = build(p, compile_glueback(mu, v0, lj))
        problems.extend(f"{lj.label()}: {n} failed" for n, ok in c.structural_checks().items() if not ok)
        labels = c.cell_components
        keep = [[lab == 0 for lab in ls] for ls in labels]
        b = c.subcomplex_betti(keep) if c.components > 1 else c.betti
        ranks.append(coloring_rank(lj))
        hrks.append(b.hrk)
        sizes.append(sum(sum(1 for x in ks if x) for ks in keep))
    doubling = []
    for j in range(1, len(ext)):
        if ranks[j] != ranks[j - 1] + 1:
            problems.append(f"rank does not increase by one at step {j}: {ranks}")
        if hrks[j] > 2 * hrks[j - 1]:
            problems.append(f"step {j}: hrk {hrks[j]} > 2 * {hrks[j - 1]}")
        if hrks[j] == 2 * hrks[j - 1]:
            doubling.append(j)
        if sizes[j] != 2 * sizes[j - 1]:
            problems.append(f"step {j}: component has {sizes[j]} cells, expected {2 * sizes[j - 1]}")
    if ranks[-1] != lam.k:
        problems.append(f"tower ends at rank {ranks[-1]}, not maximally independent")
    return VerificationReport(
        claim="tower",
        instance=_instance(p, mu, v0, m=lam.ambient, lam=lam.to_bitstrings()),
        passed=not problems,
        stats={
            "steps": len(ext) - 1,
            "ranks": ranks,
            "hrk": hrks,
            "panel_order": list(ext.panel_order),
            "omegas": [w.to_bitstring() for w in ext.omegas],
            "doubling_steps": doubling,
            "contradiction_trigger": bool(len(ext) > 1 and hrks[-1] == (hrks[0] << (len(ext) - 1))),
        },
        counterexample=None if not problems else lam.label(),
        problems=problems,
    )


def check_all_towers(
    p: SimplePolytope,
    mu: FacetColoring,
    v0: int,
    m: int,
    cap: int = DEFAULT_COLORING_CAP,
) -> VerificationReport:
    """:func:`check_double_cover_tower` for every coloring in ``Col_m``."""
    panels = facets_not_through_vertex(p, v0)
    problems: list[str] = []
    worst = 0.0
    lengths: list[int] = []
    doubling = 0
    bad = None
    count = 0
    for lam in enumerate_panel_colorings(panels, m, cap):
        rep = check_double_cover_tower(p, mu, v0, lam)
        count += 1
        lengths.append(rep.stats["steps"])
        hr = rep.stats["hrk"]
        for a, b in zip(hr, hr[1:]):
            worst = max(worst, b / a)
        doubling += len(rep.stats["doubling_steps"])
        if not rep.passed:
            problems.extend(rep.problems)
            bad = bad or rep.counterexample
    return VerificationReport(
        claim="tower",
        instance=_instance(p, mu, v0, m=m),
        passed=not problems,
        stats={
            "towers": count,
            "steps_histogram": _histogram(lengths),
            "max_step_ratio": round(worst, 6),
            "doubling_steps": doubling,
        },
        counterexample=bad,
        problems=problems,
    )


def check_euler_relation(
    p: SimplePolytope,
    mu: FacetColoring,
    v0: int,
    m: int,
    cap: int = DEFAULT_COLORING_CAP,
    jobs: int = 1,
    outcomes: Sequence[ColoringOutcome] | None = None,
) -> VerificationReport:
    """``χ(M) = 2^m χ(Q)`` for surfaces."""
    if p.dim != 2:
        raise ValueError(f"the Euler relation check needs a polygon, got dimension {p.dim}")
    base = build(p, mu)
    chi_q = base.euler_characteristic()
    if outcomes is None:
        outcomes = survey(p, mu, v0, m, cap, jobs)
    want = (1 << m) * chi_q
    bad = [o for o in outcomes if o.euler != want]
    problems = _structural_problems(outcomes)
    problems.extend(f"{o.coloring}: χ = {o.euler}, expected {want}" for o in bad)
    return VerificationReport(
        claim="euler",
        instance=_instance(p, mu, v0, m=m),
        passed=not problems,
        stats={"colorings": len(outcomes), "chi_small_cover": chi_q, "chi_expected": want},
        counterexample=bad[0].coloring if bad else None,
        problems=problems,
    )


def check_betti_equals_h(p: SimplePolytope, mu: FacetColoring) -> VerificationReport:
    """Small-cover Betti numbers equal the h-vector, and ``β_{n-1} = k``."""
    require_characteristic(mu)
    c = build(p, mu)
    b = c.betti.values
    h = h_vector(p)
    problems = [f"{n} failed" for n, ok in c.structural_checks().items() if not ok]
    problems += polytope_problems(p)
    if b != h:
        problems.append(f"Betti {b} != h-vector {h}")
    if b[p.dim - 1] != p.k:
        problems.append(f"β_{p.dim - 1} = {b[p.dim - 1]}, expected k = {p.k}")
    return VerificationReport(
        claim="betti-h",
        instance=_instance(p, mu),
        passed=not problems,
        stats={"betti": list(b), "h_vector": list(h), "k": p.k, "hrk": sum(b)},
        problems=problems,
    )


def check_facial_restriction(
    p: SimplePolytope,
    mu: FacetColoring,
    v0: int,
    lam: PanelColoring | None = None,
) -> VerificationReport:
    """Restrictions of a maximally independent bundle to facets.

    For each facet ``F`` the part of the total space lying over ``F`` is
    a bundle over the small cover of ``F``.  Its hrk must not exceed that of
    the whole space, and computing it as a subcomplex must agree with
    building it from scratch over the facet polytope with the induced
    coloring.
    """
    panels = facets_not_through_vertex(p, v0)
    lam = lam or standard_coloring(panels)
    if coloring_rank(lam) != len(panels):
        raise ValueError("facial restriction is checked on maximally independent colorings")
    big = compile_glueback(mu, v0, lam)
    total = build(p, big)
    parent_hrk = total.hrk
    problems = [f"{n} failed" for n, ok in total.structural_checks().items() if not ok]
    per_facet = []
    for f in range(p.facet_count):
        bit = 1 << f
        sub = total.face_restriction_betti(lambda face, bit=bit: bool(face & bit))
        induced, _ = induced_facet_coloring(big, f)
        direct = build(induced.polytope, induced).betti
        per_facet.append(sub.hrk)
        # the subcomplex lives in dimension n - 1, its top entry is zero
        if sub.values[-1] != 0 or sub.values[:-1] != direct.values:
            problems.append(f"facet {p.facet_names[f]}: subcomplex Betti {sub} != induced build {direct}")
        if sub.hrk > parent_hrk:
            problems.append(f"facet {p.facet_names[f]}: hrk {sub.hrk} > total {parent_hrk}")
    return VerificationReport(
        claim="facial-restriction",
        instance=_instance(p, mu, v0, lam=lam.to_bitstrings()),
        passed=not problems,
        stats={"total_hrk": parent_hrk, "facet_hrk": per_facet},
        problems=problems,
    )


def check_reductions(
    p: SimplePolytope,
    mu: FacetColoring,
    v0: int,
    m: int,
    extra: int = 1,
    cap: int = DEFAULT_COLORING_CAP,
) -> VerificationReport:
    """The inclusion and projection moves on colorings rescale hrk by the predicted powers of 2.

    For each coloring in ``Col_m``: including into (Z/2)^(m+extra) multiplies
    hrk by ``2^extra``; a pure change of basis (projection onto m coordinates)
    leaves it unchanged; projecting onto ``rank`` coordinates divides it by
    ``2^(m - rank)``.
    """
    panels = facets_not_through_vertex(p, v0)
    problems: list[str] = []
    count = 0

    def h(lam: PanelColoring) -> int:
        return build(p, compile_glueback(mu, v0, lam)).hrk

    for lam in enumerate_panel_colorings(panels, m, cap):
        count += 1
        base = h(lam)
        r = coloring_rank(lam)
        up = h(embed_coloring(lam, m + extra))
        if up != base << extra:
            problems.append(f"{lam.label()}: included hrk {up} != 2^{extra} * {base}")
        same = h(project_coloring(lam, m))
        if same != base:
            problems.append(f"{lam.label()}: basis change moved hrk {base} -> {same}")
        down = h(project_coloring(lam, r))
        if base != down << (m - r):
            problems.append(f"{lam.label()}: hrk {base} != 2^{m - r} * projected {down}")
    return VerificationReport(
        claim="reductions",
        instance=_instance(p, mu, v0, m=m, extra=extra),
        passed=not problems,
        stats={"colorings": count},
        problems=problems,
    )


CLAIMS = ("hcc", "equality", "components", "dominance", "tower", "euler", "betti-h")
