"""Turtle subset: `@prefix`, prefixed names, `<>` IRIs, the `a` keyword,
`;` and `,` lists, typed/plain/numeric literals, `#` comments. No blank
nodes or collections: skolem IRIs stand in for blank nodes everywhere.

The serializer emits one statement per triple in (subject, predicate,
object) lexicographic order of the expanded forms, so output is canonical
and round-trips to the identical triple set.
"""

from __future__ import annotations

from typing import Mapping

from ..model import Iri, UnknownPrefix, expand_curie
from ..store import RDF_TYPE, XSD, Literal, Resource, Term, Triple
from . import lex
from .errors import ParseError
from .lex import Cursor

XSD_TO_KIND = {
    XSD + "integer": "integer",
    XSD + "decimal": "decimal",
    XSD + "date": "date",
    XSD + "string": "string",
}
KIND_TO_XSD = {v: k for k, v in XSD_TO_KIND.items()}

BUILTIN_PREFIXES = {
    "xsd": XSD,
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "owl": "http://www.w3.org/2002/07/owl#",
}


def _expand(prefixes: Mapping[str, str], tok: lex.Token) -> Iri:
    try:
        if ":" in tok.text:
            return expand_curie(prefixes, tok.text)
        if "" in prefixes:
            return Iri(prefixes[""] + tok.text)
        raise UnknownPrefix("")
    except UnknownPrefix as exc:
        exc.span = tok.span  # attach location for reporting
        raise


def parse_iri(cur: Cursor, prefixes: Mapping[str, str]) -> Iri:
    if cur.at(lex.IRIREF):
        return Iri(cur.next().text[1:-1])
    if cur.at(lex.NAME):
        return _expand(prefixes, cur.next())
    return cur.fail("an IRI")


def parse_literal_token(cur: Cursor, prefixes: Mapping[str, str]) -> Literal:
    if cur.at(lex.INTEGER):
        return Literal(cur.next().text, "integer")
    if cur.at(lex.DECIMAL):
        return Literal(cur.next().text, "decimal")
    tok = cur.expect(lex.STRING)
    if cur.take(lex.PUNCT, "^^"):
        dt_tok = cur.peek()
        dt = parse_iri(cur, prefixes)
        kind = XSD_TO_KIND.get(dt.value)
        if kind is None:
            raise ParseError(dt_tok.span, "one of xsd:integer/decimal/date/string", dt.value)
        try:
            return Literal(tok.value, kind)
        except Exception:
            raise ParseError(tok.span, f"a valid {kind} literal", tok.value) from None
    return Literal(tok.value, "string")


def parse_turtle(
    text: str, base_prefixes: Mapping[str, str] | None = None
) -> tuple[list[Triple], dict[str, str]]:
    """All triples in source order plus the final prefix map."""
    prefixes: dict[str, str] = dict(BUILTIN_PREFIXES)
    prefixes.update(base_prefixes or {})
    cur = Cursor(lex.tokenize(text))
    triples: list[Triple] = []

    while not cur.at(lex.EOF):
        if cur.take(lex.ATPREFIX):
            name_tok = cur.expect(lex.NAME)
            if not name_tok.text.endswith(":"):
                raise ParseError(name_tok.span, "a prefix name ending in ':'", name_tok.text)
            iri_tok = cur.expect(lex.IRIREF)
            prefixes[name_tok.text[:-1]] = iri_tok.text[1:-1]
            cur.expect(lex.PUNCT, ".")
            continue
        subject = Resource(parse_iri(cur, prefixes))
        while True:
            if cur.at_name("a") and ":" not in cur.peek().text:
                cur.next()
                predicate = Resource(RDF_TYPE)
            else:
                predicate = Resource(parse_iri(cur, prefixes))
            while True:
                obj: Term
                if cur.at(lex.IRIREF) or cur.at(lex.NAME):
                    obj = Resource(parse_iri(cur, prefixes))
                else:
                    obj = parse_literal_token(cur, prefixes)
                triples.append(Triple(subject, predicate, obj))
                if not cur.take(lex.PUNCT, ","):
                    break
            if not cur.take(lex.PUNCT, ";"):
                break
            if cur.at(lex.PUNCT, "."):  # tolerate trailing ';'
                break
        cur.expect(lex.PUNCT, ".")
    return triples, prefixes


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

_STRING_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _escape(s: str) -> str:
    return "".join(_STRING_ESCAPES.get(c, c) for c in s)


def render_iri(iri: Iri, prefixes: Mapping[str, str]) -> str:
    best: tuple[int, str] | None = None
    for name, base in prefixes.items():
        if iri.value.startswith(base) and len(base) < len(iri.value) + 1:
            local = iri.value[len(base):]
            # the local part must survive our NAME token rule
            if all(c.isalnum() or c in "_-" for c in local):
                if best is None or len(base) > best[0]:
                    best = (len(base), f"{name}:{local}")
    return best[1] if best else f"<{iri.value}>"


def render_term(term: Term, prefixes: Mapping[str, str]) -> str:
    if isinstance(term, Resource):
        return render_iri(term.iri, prefixes)
    if term.datatype == "integer":
        return term.lexical
    if term.datatype == "decimal" and "." in term.lexical:
        return term.lexical
    if term.datatype == "string":
        return f'"{_escape(term.lexical)}"'
    return f'"{_escape(term.lexical)}"^^{render_iri(Iri(KIND_TO_XSD[term.datatype]), prefixes)}'


def serialize_turtle(triples: list[Triple] | set[Triple], prefixes: Mapping[str, str]) -> str:
    """Canonical serialization; parse_turtle(serialize_turtle(G)) == set(G)."""
    prefixes = dict(prefixes)
    needs_xsd = any(
        isinstance(t.object, Literal)
        and (t.object.datatype == "date"
             or (t.object.datatype == "decimal" and "." not in t.object.lexical))
        for t in triples
    )
    if needs_xsd and XSD not in prefixes.values():
        prefixes.setdefault("xsd", XSD)
    lines = [f"@prefix {name}: <{base}> ." for name, base in sorted(prefixes.items())]
    if lines:
        lines.append("")
    for t in sorted(set(triples), key=Triple.sort_key):
        pred = "a" if t.predicate.iri == RDF_TYPE else render_iri(t.predicate.iri, prefixes)
        lines.append(
            f"{render_iri(t.subject.iri, prefixes)} {pred} {render_term(t.object, prefixes)} ."
        )
    return "\n".join(lines) + "\n"
