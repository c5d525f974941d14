from __future__ import annotations

from importlib import resources

import pytest
from hypothesis import given, settings

from cwb.dsl import DslError, parse, parse_poly, render, render_presentation
from cwb.exactpoly import D, LAM
from cwb.gdb import v_ab
from cwb.lca import builtin
from conftest import polys

TSV_TEXT = """algebra TSV(a,b) { generators: L,Y,M; bracket L L = (d+2*l)*L;
bracket L Y = (d+a*l+b)*Y; bracket L M = (d+2*(a−1)*l+2*b)*M; bracket Y Y = (d+2*l)*M; }"""


def test_parse_vir():
    doc = parse("algebra Vir() { generators: L; bracket L L = (d + 2*l)*L; }")
    assert doc.presentation().same_table(builtin("Vir"))


def test_parse_tsv_with_unicode_minus():
    doc = parse(TSV_TEXT)
    assert doc.params == ["a", "b"]
    assert doc.presentation().same_table(builtin("TSV"))


def test_glyphs_are_accepted():
    assert parse_poly("∂ + 2*λ") == D + 2 * LAM


def test_two_generator_factors_is_an_error():
    with pytest.raises(DslError) as err:
        parse("algebra X() { generators: L, Y; bracket L L = (d+2*l)*L*Y; }")
    assert "two generator factors" in str(err.value)


def test_conflicting_reverse_clause_is_an_error():
    with pytest.raises(DslError):
        parse("algebra X() { generators: L, Y; bracket L Y = d*Y; bracket Y L = d*Y; }")


def test_duplicate_clause_is_an_error():
    with pytest.raises(DslError):
        parse("algebra X() { generators: L; bracket L L = (d+2*l)*L; bracket L L = (d+2*l)*L; }")


def test_reserved_parameter_names():
    with pytest.raises(DslError):
        parse("algebra X(l) { generators: L; }")


def test_error_positions():
    with pytest.raises(DslError) as err:
        parse("algebra X() {\n  generators: L;\n  bracket L L = (d + 2*q)*L;\n}")
    assert err.value.line == 3


def test_product_blocks_reject_lambda():
    with pytest.raises(DslError):
        parse("algebra V() { generators: L; novikov L L = l*L; }")


def test_jobs_are_collected():
    doc = parse("algebra Vir() { generators: L; bracket L L = (d+2*l)*L; job h2 --deg 6 -o out.json; }")
    assert doc.jobs == [["h2", "--deg", "6", "-o", "out.json"]]


@pytest.mark.parametrize("name", ["Vir", "SV", "DSV", "TSV", "TSVc"])
def test_render_round_trip(name):
    A = builtin(name)
    assert parse(render_presentation(A)).presentation().same_table(A)


def test_document_round_trip_is_stable():
    doc = parse(TSV_TEXT)
    text = render(doc)
    assert render(parse(text)) == text


FILES = {"vir": ("Vir", {}), "sv": ("SV", {}), "dsv": ("DSV", {}), "tsv_ab": ("TSV", {}),
         "tsv_c": ("TSVc", {})}


@pytest.mark.parametrize("stem", sorted(FILES))
def test_family_files_match_builtins(stem):
    text = resources.files("cwb").joinpath("families", f"{stem}.lca").read_text()
    name, kw = FILES[stem]
    assert parse(text).presentation().same_table(builtin(name, **kw))


def test_bialgebra_file():
    text = resources.files("cwb").joinpath("families", "v_ab.lca").read_text()
    doc = parse(text)
    G = doc.bialgebra()
    assert G.circ == v_ab().circ and G.lie == v_ab().lie
    assert doc.presentation().same_table(builtin("TSV"))


@settings(max_examples=60, deadline=None)
@given(polys())
def test_polynomial_text_round_trip(p):
    assert parse_poly(str(p)) == p
