import json

import pytest
from hypothesis import given, settings

from gridpaths.cli_io import (
    ParseError, RenderOptions, SchemaError, main, parse_cnf, parse_embedding, parse_graph, parse_rep, render_svg,
    write_cnf, write_embedding, write_graph, write_rep,
)
from gridpaths.constructions import build_end_eater, build_separator
from gridpaths.embedding import embed_auto
from gridpaths.graph_core import complete_graph, cycle_graph
from gridpaths.representation import Representation, Semantics
from gridpaths.sat_reduction import EXAMPLE_FORMULA, Formula

from test_graph_core import graphs

PHI0_CNF = "p cnf 2 3\n1 2 0\n1 -2 0\n-1 -2 0\n"


def test_rep_round_trip_byte_identical():
    text = write_rep(build_end_eater(1).rep)
    again = write_rep(parse_rep(text))
    assert again == text
    assert parse_rep(text) == build_end_eater(1).rep


def test_rep_canonical_key_order():
    a = Representation({"b": [(0, 0), (1, 0)], "a": [(0, 1), (0, 2)]})
    text = write_rep(a)
    assert text.index('"a"') < text.index('"b"')
    json.loads(text)


def test_phi0_dimacs():
    f = parse_cnf(PHI0_CNF)
    renamed = Formula(["x", "y"], [[({"1": "x", "2": "y"}[v], p) for v, p in c] for c in f.clauses])
    assert renamed == EXAMPLE_FORMULA
    assert parse_cnf(write_cnf(f)) == f


def test_bad_dimacs():
    with pytest.raises(ParseError):
        parse_cnf("1 2 0\n")


def test_malformed_point():
    with pytest.raises(SchemaError):
        parse_rep('{"semantics": "cpg", "paths": {"a": [[1], [1, 2]]}}')


@pytest.mark.parametrize("text", [
    "{not json",
    '{"paths": 3}',
    '{"semantics": "xyz", "paths": {}}',
    '{"paths": {"a": [[0, 0], [1, 1]]}}',
])
def test_schema_errors(text):
    with pytest.raises((ParseError, SchemaError)):
        parse_rep(text)


def test_graph_text_round_trip():
    g = complete_graph(4)
    assert parse_graph(write_graph(g)) == g
    assert parse_graph("# comment\ngraph t\nv a\nv b\ne a b\n").has_edge("a", "b")


def test_graph_parse_error_location():
    with pytest.raises(ParseError) as info:
        parse_graph("graph t\nv a\nq a b\n")
    assert info.value.line == 3


@settings(max_examples=50, deadline=None)
@given(graphs())
def test_graph_round_trip_property(g):
    assert parse_graph(write_graph(g)) == g


def test_embedding_round_trip():
    emb = embed_auto(cycle_graph(4))
    text = write_embedding(emb)
    assert write_embedding(parse_embedding(text)) == text


def test_empty_svg():
    svg = render_svg(Representation({}))
    assert svg.startswith("<svg") and "polyline" not in svg


def test_svg_polyline_count():
    rep = build_separator(1).rep
    assert render_svg(rep).count("<polyline") == len(rep)


def test_svg_epg_shading():
    rep = Representation({"a": [(0, 0), (3, 0)], "b": [(2, 0), (5, 0)]}, Semantics.EPG)
    assert 'class="shared"' in render_svg(rep)
    cpg = Representation({"a": [(0, 0), (3, 0)], "b": [(3, 0), (5, 0)]})
    assert 'class="shared"' not in render_svg(cpg)


def test_render_options():
    with pytest.raises(ValueError):
        RenderOptions(unit_px=2)
    svg = render_svg(Representation({"a<": [(0, 0), (1, 0)]}), RenderOptions(show_labels=True))
    assert "a&lt;" in svg


# -- command line ---------------------------------------------------------------

@pytest.fixture
def files(tmp_path):
    (tmp_path / "k4.graph").write_text(write_graph(complete_graph(4)))
    (tmp_path / "c5.graph").write_text(write_graph(cycle_graph(5)))
    (tmp_path / "phi0.cnf").write_text(PHI0_CNF)
    (tmp_path / "unsat.cnf").write_text("p cnf 1 2\n1 0\n-1 0\n")
    (tmp_path / "good.rep.json").write_text(write_rep(build_end_eater(1).rep))
    (tmp_path / "cross.rep.json").write_text(write_rep(Representation({"a": [(0, 0), (2, 0)],
                                                                       "b": [(1, -1), (1, 1)]})))
    return tmp_path


def run(*args):
    return main([str(a) for a in args])


def test_cli_verify(files):
    assert run("verify", "cpg", files / "good.rep.json") == 0
    assert run("verify", "cpg", files / "cross.rep.json") == 1
    assert run("verify", "epg", files / "cross.rep.json") == 0


def test_cli_solve(files, capsys):
    assert run("solve", "kcol", "--k", 3, files / "k4.graph") == 1
    assert run("solve", "kcol", "--k", 4, files / "k4.graph") == 0
    assert run("solve", "sat", files / "phi0.cnf") == 0
    assert "SAT 1=1,2=0" in capsys.readouterr().out
    assert run("solve", "sat", files / "unsat.cnf") == 1
    capsys.readouterr()
    assert run("solve", "mis", files / "c5.graph") == 0
    assert capsys.readouterr().out.splitlines()[0] == "2"


def test_cli_build_and_stats(files, capsys):
    prefix = files / "gv"
    assert run("build", "gv", "--out", prefix) == 0
    assert run("verify", "cpg", str(prefix) + ".rep.json", "--graph", str(prefix) + ".graph") == 0
    capsys.readouterr()
    assert run("stats", str(prefix) + ".rep.json") == 0
    stats = json.loads(capsys.readouterr().out)
    assert stats["f"] == 1 and stats["triangle_bound"]["bound"] == 1


def test_cli_reduce_sat(files, capsys):
    prefix = files / "g1"
    assert run("reduce", "sat", "--i", 1, files / "phi0.cnf", "--assignment", "auto", "--out", prefix) == 0
    for ext in (".graph", ".rep.json", ".map.json"):
        assert (files / ("g1" + ext)).exists()
    assert run("extract-assignment", files / "phi0.cnf", str(prefix) + ".rep.json") == 0
    assert capsys.readouterr().out.strip() == "1=1,2=0"
    assert run("reduce", "sat", files / "unsat.cnf") == 1
    assert run("reduce", "sat", files / "phi0.cnf", "--assignment", "1=1,2=1") == 1
    assert run("reduce", "sat", files / "phi0.cnf", "--assignment", "1=yes") == 2


def test_cli_3col_pipeline(files):
    emb = files / "c5.emb.json"
    assert run("embed", files / "c5.graph", "-o", emb) == 0
    assert run("reduce", "3col", files / "c5.graph", emb, "--out", files / "d") == 0
    assert run("verify", "epg", files / "d.rep.json", "--graph", files / "d.graph") == 0
    assert run("render", files / "d.rep.json", "-o", files / "d.svg") == 0
    assert (files / "d.svg").read_text().startswith("<svg")


def test_cli_refine_normalize_derive(files):
    assert run("refine", files / "good.rep.json", "--times", 2, "-o", files / "r.json") == 0
    assert parse_rep((files / "r.json").read_text()).refinement_level == 3
    assert run("derive", files / "good.rep.json", "-o", files / "e1.graph") == 0
    assert run("derive", files / "cross.rep.json") == 1
    rep = Representation({"a": [(0, 0), (0, 3)], "b": [(0, 2), (2, 2)]})
    (files / "p.rep.json").write_text(write_rep(rep))
    (files / "p.graph").write_text("graph p\nv a\nv b\ne a b\n")
    assert run("normalize", files / "p.graph", files / "p.rep.json") == 0
    assert run("normalize", files / "k4.graph", files / "p.rep.json") == 1


def test_cli_search(files, capsys):
    (files / "k3.graph").write_text(write_graph(complete_graph(3)))
    assert run("search-rep", files / "k3.graph", "--k", 0, "--side", 4) == 0
    assert parse_rep(capsys.readouterr().out)
    assert run("search-rep", files / "k4.graph", "--k", 0, "--side", 2) == 1


def test_cli_usage_errors(files):
    assert run("frobnicate") == 2
    assert run("verify", "cpg", files / "missing.json") == 2
    (files / "bad.json").write_text('{"paths": {"a": [[1], [2, 2]]}}')
    assert run("verify", "cpg", files / "bad.json") == 2
    assert run("reduce", "is", files / "k4.graph") == 2
