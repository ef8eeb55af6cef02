import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from acekb.model import UnknownPrefix
from acekb.store import Graph, Literal, RDF_TYPE, Resource, Triple
from acekb.syntax import ParseError, parse_turtle, serialize_turtle
from conftest import ex, triples_strategy


def test_single_statement():
    triples, prefixes = parse_turtle("@prefix ex: <urn:x:> . ex:a ex:b ex:c .")
    assert [(t.subject.iri.value, t.predicate.iri.value, t.object.iri.value)
            for t in triples] == [("urn:x:a", "urn:x:b", "urn:x:c")]
    assert prefixes["ex"] == "urn:x:"


def test_case_graph_three_edges():
    text = """
    @prefix ex: <http://aceso.example/#> .
    ex:child ex:has_parent ex:parent .
    ex:parent ex:i_p_h_t_r_i_i ex:harm1 .
    ex:harm1 ex:targets ex:child .
    """
    triples, _ = parse_turtle(text)
    assert len(triples) == 3
    assert triples[0].subject == Resource(ex("child"))
    assert triples[1].predicate == Resource(ex("i_p_h_t_r_i_i"))
    assert triples[2].object == Resource(ex("child"))


def test_typed_integer_literal_roundtrip():
    triples, prefixes = parse_turtle('@prefix ex: <urn:x:> . ex:i ex:freq "3"^^xsd:integer .')
    assert triples[0].object == Literal("3", "integer")
    reparsed, _ = parse_turtle(serialize_turtle(triples, prefixes))
    assert set(reparsed) == set(triples)


def test_sugar_forms():
    text = """
    @prefix ex: <urn:x:> .
    ex:a a ex:T ; ex:p ex:b, ex:c ; ex:q 3, 2.5, "s" .  # comment
    """
    triples, _ = parse_turtle(text)
    preds = [t.predicate.iri.value for t in triples]
    assert preds.count("urn:x:p") == 2
    assert preds.count("urn:x:q") == 3
    assert any(t.predicate == Resource(RDF_TYPE) for t in triples)
    objects = {t.object for t in triples if t.predicate.iri.value == "urn:x:q"}
    assert objects == {Literal("3", "integer"), Literal("2.5", "decimal"),
                       Literal("s", "string")}


def test_full_iri_and_date():
    triples, _ = parse_turtle(
        '<urn:x:a> <urn:x:when> "2020-01-02"^^<http://www.w3.org/2001/XMLSchema#date> .')
    assert triples[0].object == Literal("2020-01-02", "date")


def test_unknown_prefix_reported():
    with pytest.raises(UnknownPrefix):
        parse_turtle("nope:a nope:b nope:c .")


def test_parse_error_carries_span():
    with pytest.raises(ParseError) as err:
        parse_turtle("@prefix ex: <urn:x:> .\nex:a ex:b .")
    assert err.value.span.line == 2
    assert err.value.span.column >= 1


def test_bad_literal_for_datatype():
    with pytest.raises(ParseError):
        parse_turtle('@prefix ex: <urn:x:> . ex:a ex:b "x"^^xsd:integer .')


def test_unsupported_datatype():
    with pytest.raises(ParseError):
        parse_turtle('@prefix ex: <urn:x:> . ex:a ex:b "x"^^ex:custom .')


def test_empty_serialization_prefixes_only():
    out = serialize_turtle([], {"ex": "urn:x:"})
    assert "@prefix ex: <urn:x:> ." in out
    triples, _ = parse_turtle(out)
    assert triples == []


def test_serialization_is_sorted_and_deterministic():
    triples, prefixes = parse_turtle("""
    @prefix ex: <urn:x:> .
    ex:b ex:p ex:a . ex:a ex:p ex:b . ex:a ex:o ex:c .
    """)
    out1 = serialize_turtle(triples, prefixes)
    out2 = serialize_turtle(list(reversed(triples)), prefixes)
    assert out1 == out2
    lines = [l for l in out1.splitlines() if l and not l.startswith("@prefix")]
    assert lines == sorted(lines)


def test_string_escapes_roundtrip():
    g = [Triple(Resource(ex("a")), Resource(ex("p")),
                Literal('say "hi"\nnew\tline\\', "string"))]
    reparsed, _ = parse_turtle(serialize_turtle(g, {"ex": "http://aceso.example/#"}))
    assert set(reparsed) == set(g)


@given(st.lists(triples_strategy(), max_size=100))
@settings(max_examples=100)
def test_roundtrip_property(triples):
    prefixes = {"ex": "http://aceso.example/#"}
    out = serialize_turtle(triples, prefixes)
    reparsed, _ = parse_turtle(out)
    assert set(reparsed) == set(triples)
    graph_roundtrip = serialize_turtle(Graph(triples).triples(), prefixes)
    assert graph_roundtrip == out
