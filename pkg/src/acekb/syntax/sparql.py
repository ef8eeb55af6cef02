"""Query grammar: PREFIX declarations, SELECT [DISTINCT] / ASK, a WHERE
block of triple patterns with FILTER expressions, ORDER BY and LIMIT.
Anything beyond the subset (OPTIONAL, UNION, ...) reports
UnsupportedSparqlFeature rather than a generic parse error."""

from __future__ import annotations

from typing import Mapping

from ..query import (
    BoolAnd, BoolNot, BoolOr, Comparison, FilterExpr, FunctionCall, Query,
)
from ..store import RDF_TYPE, Resource, TriplePattern, Var
from . import lex
from .common import parse_filter_call, parse_triples_statement, parse_var
from .errors import UnsupportedSparqlFeature
from .lex import Cursor
from .turtle import BUILTIN_PREFIXES, render_term

_UNSUPPORTED = {
    "OPTIONAL", "UNION", "MINUS", "GRAPH", "SERVICE", "BIND", "VALUES",
    "CONSTRUCT", "DESCRIBE", "INSERT", "DELETE", "GROUP", "HAVING", "OFFSET",
    "EXISTS", "REDUCED",
}


def _check_unsupported(cur: Cursor) -> None:
    tok = cur.peek()
    if tok.kind == lex.NAME and tok.text.upper() in _UNSUPPORTED:
        raise UnsupportedSparqlFeature(tok.text, tok.span)


def parse_query(text: str, base_prefixes: Mapping[str, str] | None = None) -> Query:
    prefixes: dict[str, str] = dict(BUILTIN_PREFIXES)
    prefixes.update(base_prefixes or {})
    cur = Cursor(lex.tokenize(text))

    while cur.at_name("PREFIX"):
        cur.next()
        name_tok = cur.expect(lex.NAME)
        if not name_tok.text.endswith(":"):
            cur.fail("a prefix name ending in ':'")
        iri_tok = cur.expect(lex.IRIREF)
        prefixes[name_tok.text[:-1]] = iri_tok.text[1:-1]

    _check_unsupported(cur)
    distinct = False
    projection: tuple[str, ...] = ()
    if cur.at_name("ASK"):
        cur.next()
        kind = "ASK"
    else:
        cur.expect_name("SELECT")
        kind = "SELECT"
        if cur.at_name("DISTINCT"):
            cur.next()
            distinct = True
        variables = [parse_var(cur).name]
        while cur.at(lex.VAR):
            variables.append(parse_var(cur).name)
        projection = tuple(variables)

    if cur.at_name("WHERE"):
        cur.next()
    cur.expect(lex.PUNCT, "{")
    patterns: list[TriplePattern] = []
    filters: list[FilterExpr] = []
    while not cur.at(lex.PUNCT, "}"):
        _check_unsupported(cur)
        if cur.at(lex.PUNCT, "{"):
            # nested groups exist only for UNION/OPTIONAL-style features
            raise UnsupportedSparqlFeature("group pattern", cur.peek().span)
        if cur.at_name("FILTER"):
            cur.next()
            filters.append(parse_filter_call(cur, prefixes))
            cur.take(lex.PUNCT, ".")
            continue
        patterns.extend(parse_triples_statement(cur, prefixes))
        if not cur.take(lex.PUNCT, ".") and not cur.at(lex.PUNCT, "}"):
            cur.fail("'.' or '}'")
    cur.expect(lex.PUNCT, "}")

    order_by: list[tuple[str, str]] = []
    limit: int | None = None
    while not cur.at(lex.EOF):
        _check_unsupported(cur)
        if cur.at_name("ORDER"):
            cur.next()
            cur.expect_name("BY")
            while True:
                if cur.at(lex.VAR):
                    order_by.append((parse_var(cur).name, "ASC"))
                elif cur.at_name("ASC") or cur.at_name("DESC"):
                    direction = cur.next().text.upper()
                    cur.expect(lex.PUNCT, "(")
                    order_by.append((parse_var(cur).name, direction))
                    cur.expect(lex.PUNCT, ")")
                else:
                    break
            if not order_by:
                cur.fail("an ordering key")
            continue
        if cur.at_name("LIMIT"):
            cur.next()
            limit = int(cur.expect(lex.INTEGER).text)
            continue
        cur.fail("ORDER BY, LIMIT, or end of query")

    return Query(
        kind=kind,
        projection=projection,
        distinct=distinct,
        bgp=tuple(patterns),
        filters=tuple(filters),
        order_by=tuple(order_by),
        limit=limit,
    )


# ---------------------------------------------------------------------------
# Serialization (queries re-serialize to parseable text)
# ---------------------------------------------------------------------------

def _render_pattern_term(t, prefixes: Mapping[str, str]) -> str:
    if isinstance(t, Var):
        return "?" + t.name
    return render_term(t, prefixes)


def render_filter(expr: FilterExpr, prefixes: Mapping[str, str]) -> str:
    if isinstance(expr, Comparison):
        return (f"{_render_pattern_term(expr.lhs, prefixes)} {expr.op} "
                f"{_render_pattern_term(expr.rhs, prefixes)}")
    if isinstance(expr, BoolAnd):
        return " && ".join(f"({render_filter(e, prefixes)})" for e in expr.operands)
    if isinstance(expr, BoolOr):
        return " || ".join(f"({render_filter(e, prefixes)})" for e in expr.operands)
    if isinstance(expr, BoolNot):
        return f"!({render_filter(expr.operand, prefixes)})"
    if isinstance(expr, FunctionCall):
        args = ", ".join(_render_pattern_term(a, prefixes) for a in expr.args)
        return f"{expr.name}({args})"
    raise TypeError(f"not a filter expression: {expr!r}")


def serialize_query(q: Query, prefixes: Mapping[str, str] | None = None) -> str:
    prefixes = dict(prefixes or {})
    lines = [f"PREFIX {name}: <{base}>" for name, base in sorted(prefixes.items())]
    if q.kind == "ASK":
        lines.append("ASK {")
    else:
        head = "SELECT DISTINCT" if q.distinct else "SELECT"
        lines.append(f"{head} {' '.join('?' + v for v in q.projection)}")
        lines.append("WHERE {")
    for p in q.bgp:
        pred = ("a" if isinstance(p.predicate, Resource) and p.predicate.iri == RDF_TYPE
                else _render_pattern_term(p.predicate, prefixes))
        lines.append(
            f"  {_render_pattern_term(p.subject, prefixes)} {pred} "
            f"{_render_pattern_term(p.object, prefixes)} ."
        )
    for f in q.filters:
        lines.append(f"  FILTER({render_filter(f, prefixes)})")
    lines.append("}")
    if q.order_by:
        keys = " ".join(
            ("?" + v) if d == "ASC" else f"DESC(?{v})" for v, d in q.order_by
        )
        lines.append(f"ORDER BY {keys}")
    if q.limit is not None:
        lines.append(f"LIMIT {q.limit}")
    return "\n".join(lines) + "\n"
