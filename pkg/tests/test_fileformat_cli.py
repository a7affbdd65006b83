import json

import pytest

from smallcovers import catalog
from smallcovers.cli import main
from smallcovers.fileformat import ParseError, format_polytope, load_polytope, parse_bitstrings, parse_polytope
from smallcovers.polytope import f_vector, polygon, product_of_simplices
from smallcovers.verify import VerificationReport

PENTAGON_TEXT = """\
# a pentagon
name: pentagon
dim: 2
facets: 5
vertices:
  0 1
  1 2
  2 3
  3 4
  4 0
coloring mu: 10 01 10 01 11
"""


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_basic():
    pf = parse_polytope(PENTAGON_TEXT)
    assert pf.polytope.name == "pentagon"
    assert f_vector(pf.polytope) == (5, 5, 1)
    assert pf.coloring().to_bitstrings() == ["10", "01", "10", "01", "11"]


def test_parse_named_facets():
    text = "dim: 2\nfacets: a b c\nvertices:\n a b\n b c\n a c\n"
    pf = parse_polytope(text)
    assert pf.polytope.facet_names == ("a", "b", "c")


def test_format_roundtrip():
    p = product_of_simplices((2, 1))
    text = format_polytope(p, {"mu": ["100", "010", "110", "001", "001"]})
    pf = parse_polytope(text)
    assert pf.polytope.vertex_masks == p.vertex_masks
    assert pf.polytope.facet_names == p.facet_names
    assert pf.colorings == {"mu": ["100", "010", "110", "001", "001"]}


def test_load_from_disk(tmp_path):
    path = tmp_path / "pent.poly"
    path.write_text(PENTAGON_TEXT)
    assert load_polytope(path).polytope.facet_count == 5


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("dim: 2\nfacets: 3\nvertices:\n 0 1\n 1 x\n 0 2\n", 5, "unknown facet"),
        ("dim: 2\nfacets: 3\nvertices:\n 0 1\n 1\n 0 2\n", 5, "expected 2 facets"),
        ("dim: two\n", 1, "expected an integer"),
        ("dim: 2\nfacets: 3\nbogus line\n", 3, "unrecognized line"),
        ("dim: 2\nfacets: 3\nvertices:\n 0 1\n 1 2\n 0 2\ncoloring mu: 10 01\n", 7, "2 colors for 3 facets"),
        ("dim: 2\nfacets: 3\nvertices:\n 0 1\n 1 2\n 0 2\ncoloring mu: 10 0x 11\n", 7, "coloring mu"),
    ],
)
def test_parse_errors_name_the_line(text, line, fragment):
    with pytest.raises(ParseError) as e:
        parse_polytope(text, source="t.poly")
    assert e.value.line == line
    assert f"t.poly:line {line}:" in str(e.value)
    assert fragment in str(e.value)


def test_parse_errors_missing_fields():
    with pytest.raises(ParseError, match="missing field 'vertices'"):
        parse_polytope("dim: 2\nfacets: 3\n")
    with pytest.raises(ParseError, match="not simple|degenerate|not a valid"):
        parse_polytope("dim: 2\nfacets: 4\nvertices:\n 0 1\n 1 2\n 0 2\n")


def test_parse_bitstrings():
    assert parse_bitstrings("10, 01 11") == ["10", "01", "11"]
    with pytest.raises(ValueError):
        parse_bitstrings("10 011")


def test_catalog_contents():
    names = catalog.names()
    for want in ["simplex1", "simplex2", "simplex3", "simplex4", "square", "pentagon", "hexagon", "cube",
                 "prism_2_1", "pentagon_prism", "hexagon_prism", "simplex2_x_simplex2"]:
        assert want in names
    with pytest.raises(KeyError):
        catalog.load("dodecahedron")
    assert catalog.load("hexagon").polytope.vertex_masks == polygon(6).vertex_masks


def test_cli_info_pentagon(capsys):
    code, out, _ = run(capsys, "info", "pentagon")
    assert code == 0
    assert "f=(5,5,1) h=(1,3,1) product-of-simplices: no" in out


def test_cli_info_cube(capsys):
    code, out, _ = run(capsys, "info", "cube")
    assert code == 0 and "product-of-simplices: yes (1,1,1)" in out


def test_cli_info_json(capsys):
    code, out, _ = run(capsys, "info", "prism_2_1", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["h_vector"] == [1, 2, 2, 1] and data["signature"] == [2, 1]


def test_cli_info_parse_error(capsys, tmp_path):
    path = tmp_path / "bad.poly"
    path.write_text("dim: 2\nfacets: 3\nvertices:\n 0 1\n 1 2 0\n 0 2\n")
    code, _, err = run(capsys, "info", str(path))
    assert code == 2 and "line 5" in err


def test_cli_cover_square(capsys):
    code, out, _ = run(capsys, "cover", "square", "--mu", "10,01,10,01")
    assert code == 0 and "β=(1,2,1) hrk=4 χ=0" in out


def test_cli_cover_bad_mu(capsys):
    code, _, err = run(capsys, "cover", "square", "--mu", "10 10 01 01")
    assert code == 2
    assert "not a characteristic function" in err and "vertex 0" in err


def test_cli_cover_rp3(capsys):
    code, out, _ = run(capsys, "cover", "simplex3")
    assert code == 0 and "β=(1,1,1,1) hrk=4" in out


def test_cli_cover_export(capsys, tmp_path):
    dest = tmp_path / "cc.txt"
    code, _, _ = run(capsys, "cover", "simplex2", "--export", str(dest))
    assert code == 0 and dest.read_text().startswith("chain-complex 2 ambient 2")


def test_cli_moment_angle(capsys):
    code, out, _ = run(capsys, "moment-angle", "prism_2_1")
    assert code == 0 and "β=(1,1,1,1) hrk=4" in out
    code, out, _ = run(capsys, "moment-angle", "pentagon")
    assert code == 0 and "β=(1,10,1) hrk=12 χ=-8" in out


def test_cli_moment_angle_refuses_large(capsys, tmp_path):
    path = tmp_path / "p20.poly"
    path.write_text(format_polytope(polygon(20)))
    code, _, err = run(capsys, "moment-angle", str(path))
    assert code == 2 and "cap of 16 facets" in err


def test_cli_verify_hcc(capsys):
    code, out, _ = run(capsys, "verify", "pentagon", "--claim", "hcc", "--m", "2")
    assert code == 0
    assert "[pass] hcc" in out and "colorings: 64" in out and "min_hrk: 8" in out


def test_cli_verify_equality_json_roundtrip(capsys):
    code, out, _ = run(capsys, "verify", "square", "--claim", "equality", "--m", "2", "--format", "json")
    assert code == 0
    rep = VerificationReport.from_dict(json.loads(out)["reports"][0])
    assert rep.passed and len(rep.witnesses) == 6
    assert VerificationReport.from_json(rep.to_json()) == rep


def test_cli_verify_components(capsys):
    code, out, _ = run(capsys, "verify", "square", "--claim", "components", "--m", "3")
    assert code == 0 and "colorings: 64" in out


def test_cli_verify_tower_with_lambda(capsys):
    code, out, _ = run(capsys, "verify", "pentagon", "--claim", "tower", "--lambda", "1 1 1")
    assert code == 0 and "hrk: (6,8,12)" in out


@pytest.mark.parametrize("claim", ["dominance", "euler", "betti-h", "facial", "reductions"])
def test_cli_verify_other_claims(capsys, claim):
    code, out, _ = run(capsys, "verify", "square", "--claim", claim, "--m", "1")
    assert code == 0 and "[pass]" in out


def test_cli_verify_cross_check(capsys):
    code, out, _ = run(capsys, "verify", "pentagon", "--claim", "hcc", "--m", "1", "--cross-check")
    assert code == 0 and out.count("[pass] hcc") == 2 and "v0=1" in out


def test_cli_verify_errors(capsys):
    code, _, err = run(capsys, "verify", "pentagon", "--claim", "hcc", "--m", "9")
    assert code == 2 and "cap" in err
    code, _, err = run(capsys, "verify", "cube", "--claim", "euler")
    assert code == 2
    code, _, err = run(capsys, "verify", "square", "--claim", "hcc", "--vertex", "9")
    assert code == 2 and "out of range" in err
    code, _, err = run(capsys, "verify", "nowhere", "--claim", "hcc")
    assert code == 2 and "no such file" in err
    with pytest.raises(SystemExit) as e:
        main(["verify", "square", "--claim", "nonsense"])
    assert e.value.code == 2


def test_cli_verify_json_is_deterministic_across_jobs(capsys):
    _, a, _ = run(capsys, "verify", "pentagon", "--claim", "hcc", "--m", "2", "--format", "json", "--jobs", "1")
    _, b, _ = run(capsys, "verify", "pentagon", "--claim", "hcc", "--m", "2", "--format", "json", "--jobs", "2")
    assert a == b


def test_cli_catalog(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0 and "pentagon" in out.split()
