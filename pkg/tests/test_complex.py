import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import quotient_betti
from smallcovers import catalog
from smallcovers.coloring import (
    FacetColoring,
    PanelColoring,
    coloring_rank,
    compile_glueback,
    enumerate_panel_colorings,
    moment_angle_coloring,
    validate_characteristic,
)
from smallcovers.complex import (
    BettiVector,
    ComplexError,
    build,
    export_chain_complex,
    parse_chain_complex,
    predicted_cell_count,
    sphere_product_betti,
)
from smallcovers.gf2 import GF2Vector
from smallcovers.polytope import (
    facets_not_through_vertex,
    h_vector,
    polygon,
    product_of_simplices,
    simplex,
)

SQUARE = product_of_simplices((1, 1))
TRIANGLE = simplex(2)
PENTAGON = polygon(5)


def fc(p, *bits):
    return FacetColoring.from_bitstrings(p, bits)


def oracle(p, coloring):
    vf = [p.vertex_facets(v) for v in range(p.vertex_count)]
    return quotient_betti(vf, p.dim, [c.to_tuple() for c in coloring.colors])


def all_characteristic(p):
    """Every characteristic function of ``p`` into (Z/2)^dim."""
    nonzero = range(1, 1 << p.dim)
    for combo in itertools.product(nonzero, repeat=p.facet_count):
        c = FacetColoring(p, p.dim, tuple(GF2Vector(b, p.dim) for b in combo))
        if validate_characteristic(c):
            yield c


def test_interval_moment_angle_is_a_circle():
    c = build(simplex(1), moment_angle_coloring(simplex(1)))
    assert c.cell_counts() == (4, 4)
    assert c.betti == (1, 1)
    assert c.euler_characteristic() == 0 and c.components == 1


def test_square_torus():
    c = build(polygon(4), fc(polygon(4), "10", "01", "10", "01"))
    assert c.cell_counts() == (4, 8, 4)
    assert c.betti == (1, 2, 1) and c.hrk == 4
    assert c.euler_characteristic() == 0


def test_real_projective_plane():
    c = build(TRIANGLE, fc(TRIANGLE, "10", "01", "11"))
    assert c.betti == (1, 1, 1) and c.hrk == 3
    assert c.cell_counts() == (3, 6, 4) and c.euler_characteristic() == 1


def test_pentagon_moment_angle_is_genus_five():
    c = build(PENTAGON, moment_angle_coloring(PENTAGON))
    assert c.cell_counts() == (40, 80, 32)
    assert c.betti == (1, 10, 1) and c.hrk == 12
    assert c.euler_characteristic() == -8


def test_pentagon_small_cover():
    c = build(PENTAGON, fc(PENTAGON, "10", "01", "10", "01", "11"))
    assert c.betti == (1, 3, 1) and c.hrk == 5 and c.euler_characteristic() == -1


def test_moment_angle_of_simplices_are_spheres():
    for n in range(1, 5):
        c = build(simplex(n), moment_angle_coloring(simplex(n)))
        assert c.hrk == 2
        assert c.betti == sphere_product_betti((n,))


def test_moment_angle_prism_is_s2_times_s1():
    p = product_of_simplices((2, 1))
    assert build(p, moment_angle_coloring(p)).betti == (1, 1, 1, 1)


def test_glueback_examples():
    mu = fc(TRIANGLE, "11", "10", "01")
    sphere = build(TRIANGLE, compile_glueback(mu, 0, PanelColoring.from_bitstrings((0,), ["1"])))
    assert sphere.betti == (1, 0, 1)
    two_planes = build(TRIANGLE, compile_glueback(mu, 0, PanelColoring.zero((0,), 1)))
    assert two_planes.betti == (2, 2, 2) and two_planes.components == 2

    sq_mu = fc(SQUARE, "10", "10", "01", "01")
    torus = build(SQUARE, compile_glueback(sq_mu, 0, PanelColoring.from_bitstrings((0, 2), ["10", "01"])))
    assert torus.betti == (1, 2, 1) and torus.hrk == 4

    pent_mu = fc(PENTAGON, "10", "01", "10", "01", "11")
    zero = PanelColoring.zero(facets_not_through_vertex(PENTAGON, 0), 2)
    copies = build(PENTAGON, compile_glueback(pent_mu, 0, zero))
    assert copies.components == 4 and copies.hrk == 4 * 5
    assert copies.component_bettis == tuple(BettiVector((1, 3, 1)) for _ in range(4))


def test_square_rank_one_bundle_has_two_components():
    sq_mu = fc(SQUARE, "10", "10", "01", "01")
    lam = PanelColoring.from_bitstrings((0, 2), ["10", "10"])
    c = build(SQUARE, compile_glueback(sq_mu, 0, lam))
    assert c.components == 2
    assert len(set(c.component_bettis)) == 1


def test_euler_relation_pentagon_full_rank():
    mu = fc(PENTAGON, "10", "01", "10", "01", "11")
    lam = PanelColoring.from_bitstrings(facets_not_through_vertex(PENTAGON, 0), ["100", "010", "001"])
    assert build(PENTAGON, compile_glueback(mu, 0, lam)).euler_characteristic() == -8


def test_sphere_product_betti_examples():
    assert sphere_product_betti((1, 1)) == (1, 2, 1)
    assert sphere_product_betti((2, 1)) == (1, 1, 1, 1)
    assert sphere_product_betti((4,)) == (1, 0, 0, 0, 1)
    assert sphere_product_betti((4,)).hrk == 2


def test_betti_vector_helpers():
    b = BettiVector((1, 10, 1))
    assert b.hrk == 12 and b.euler == -8 and str(b) == "(1,10,1)"


def test_build_rejects_foreign_coloring():
    with pytest.raises(ComplexError):
        build(PENTAGON, fc(polygon(4), "10", "01", "10", "01"))


@pytest.mark.parametrize(
    "p, bits",
    [
        (simplex(1), ["10", "01"]),
        (polygon(4), ["10", "01", "10", "01"]),
        (polygon(4), ["10", "01", "10", "11"]),
        (TRIANGLE, ["10", "01", "11"]),
        (PENTAGON, ["10", "01", "10", "01", "11"]),
        (TRIANGLE, ["111", "100", "010"]),
        (SQUARE, ["1010", "1000", "0101", "0100"]),
        (SQUARE, ["1010", "1000", "0110", "0100"]),
        (SQUARE, ["100", "100", "010", "010"]),
        (simplex(3), ["100", "010", "001", "111"]),
        (product_of_simplices((2, 1)), ["100", "010", "110", "001", "001"]),
        (PENTAGON, ["10", "10", "10", "10", "10"]),
    ],
)
def test_betti_matches_orbit_oracle(p, bits):
    c = fc(p, *bits)
    assert build(p, c).betti == oracle(p, c)


@pytest.mark.parametrize("name", ["simplex2", "square", "pentagon", "hexagon", "simplex3"])
def test_betti_equals_h_for_every_characteristic_function(name):
    p = catalog.load(name).polytope
    h = h_vector(p)
    seen = 0
    for mu in all_characteristic(p):
        assert build(p, mu).betti == h
        seen += 1
    assert seen > 0


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["cube", "prism_2_1", "pentagon_prism"]), st.data())
def test_betti_equals_h_sampled_in_dim_three(name, data):
    p = catalog.load(name).polytope
    bits = data.draw(st.lists(st.integers(1, 7), min_size=p.facet_count, max_size=p.facet_count))
    mu = FacetColoring(p, 3, tuple(GF2Vector(b, 3) for b in bits))
    if validate_characteristic(mu):
        assert build(p, mu).betti == h_vector(p)


def _signatures(max_dim):
    def rec(remaining, smallest):
        if remaining == 0:
            yield ()
            return
        for part in range(smallest, remaining + 1):
            for rest in rec(remaining - part, part):
                yield (part,) + rest

    for n in range(1, max_dim + 1):
        yield from rec(n, 1)


@pytest.mark.parametrize("sig", list(_signatures(5)), ids=str)
def test_moment_angle_of_products_of_simplices(sig):
    p = product_of_simplices(sig)
    c = build(p, moment_angle_coloring(p))
    assert c.hrk == 2 ** len(sig)
    assert c.betti == sphere_product_betti(sig)


@pytest.mark.parametrize(
    "name, m",
    [("square", 1), ("square", 2), ("square", 3), ("square", 4), ("square", 5),
     ("pentagon", 1), ("pentagon", 2), ("pentagon", 3), ("pentagon", 4),
     ("simplex2", 1), ("simplex2", 4), ("prism_2_1", 2)],
)
def test_component_count_formula(name, m):
    f = catalog.load(name)
    p, mu = f.polytope, f.coloring()
    panels = facets_not_through_vertex(p, 0)
    for lam in enumerate_panel_colorings(panels, m):
        c = build(p, compile_glueback(mu, 0, lam))
        assert c.components == 2 ** (m - coloring_rank(lam))
        assert c.hrk >= 2**m


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from(["simplex2", "square", "pentagon", "simplex3", "prism_2_1", "cube"]),
    st.integers(0, 3),
    st.data(),
)
def test_structural_invariants(name, m, data):
    f = catalog.load(name)
    p, mu = f.polytope, f.coloring()
    v0 = data.draw(st.integers(0, p.vertex_count - 1))
    panels = facets_not_through_vertex(p, v0)
    bits = data.draw(st.lists(st.integers(0, (1 << m) - 1), min_size=len(panels), max_size=len(panels)))
    lam = PanelColoring(panels, m, tuple(GF2Vector(b, m) for b in bits))
    c = build(p, compile_glueback(mu, v0, lam))
    checks = c.structural_checks()
    assert all(checks.values()), checks
    assert "poincare_duality" in checks
    assert c.size == predicted_cell_count(p, c.coloring)
    assert sum(c.cell_counts()) == c.size
    assert sum(b.hrk for b in c.component_bettis) == c.hrk


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["square", "pentagon", "simplex2"]), st.data())
def test_degenerate_colorings_still_give_chain_complexes(name, data):
    p = catalog.load(name).polytope
    n = data.draw(st.integers(1, 3))
    bits = data.draw(st.lists(st.integers(0, (1 << n) - 1), min_size=p.facet_count, max_size=p.facet_count))
    c = FacetColoring(p, n, tuple(GF2Vector(b, n) for b in bits))
    qc = build(p, c)
    checks = qc.structural_checks()
    assert checks["boundary_squared_zero"] and checks["euler_cells_equals_betti"]
    assert checks["beta0_equals_components"]
    assert ("poincare_duality" in checks) == validate_characteristic(c)
    assert qc.betti == oracle(p, c)


def test_export_roundtrip():
    c = build(TRIANGLE, fc(TRIANGLE, "10", "01", "11"))
    text = export_chain_complex(c)
    assert text.splitlines()[0] == "chain-complex 2 ambient 2"
    cells, bounds = parse_chain_complex(text)
    assert [len(x) for x in cells] == list(c.cell_counts())
    assert len(bounds) == 2
    assert cells[2] == [((), "00"), ((), "10"), ((), "01"), ((), "11")]
    for d in (1, 2):
        for i, row in enumerate(bounds[d - 1]):
            assert GF2Vector.from_bitstring(row).bits == c.boundary[d][i]


def test_parse_chain_complex_rejects_garbage():
    with pytest.raises(ValueError):
        parse_chain_complex("hello\n")
    with pytest.raises(ValueError):
        parse_chain_complex("chain-complex 1 ambient 1\ncells 0 1\n0 0\n")
