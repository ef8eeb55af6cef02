"""Triple-pattern blocks and filter expressions, shared by the query and
rule grammars. Both use turtle-style statements with `?variables`, the `a`
keyword, and `;`/`,` sugar, which desugars here to plain triple patterns."""

from __future__ import annotations

from typing import Callable, Mapping

from ..query import (
    BoolAnd, BoolNot, BoolOr, Comparison, FilterExpr, FunctionCall, Operand,
)
from ..store import RDF_TYPE, Literal, Resource, TriplePattern, Var
from . import lex
from .errors import ParseError
from .lex import Cursor
from .turtle import parse_iri, parse_literal_token

COMPARISON_OPS = ("=", "!=", "<", "<=", ">", ">=")

# term-position hook: the rule grammar injects NEW(?v) handling through this
TermHook = Callable[[Cursor], object]


def parse_var(cur: Cursor) -> Var:
    tok = cur.expect(lex.VAR)
    return Var(tok.text[1:])


def parse_pattern_term(
    cur: Cursor, prefixes: Mapping[str, str], extra: TermHook | None = None
):
    if extra is not None:
        special = extra(cur)
        if special is not None:
            return special
    if cur.at(lex.VAR):
        return parse_var(cur)
    if cur.at(lex.IRIREF) or cur.at(lex.NAME):
        return Resource(parse_iri(cur, prefixes))
    return parse_literal_token(cur, prefixes)


def parse_triples_statement(
    cur: Cursor, prefixes: Mapping[str, str], extra: TermHook | None = None
) -> list[TriplePattern]:
    """One `subject verb objects (; verb objects)*` statement, desugared."""
    patterns: list[TriplePattern] = []
    tok = cur.peek()
    subject = parse_pattern_term(cur, prefixes, extra)
    if isinstance(subject, Literal):
        raise ParseError(tok.span, "an IRI or variable subject", tok.text)
    while True:
        if cur.at(lex.VAR):
            predicate = parse_var(cur)
        elif cur.at_name("a") and ":" not in cur.peek().text:
            cur.next()
            predicate = Resource(RDF_TYPE)
        else:
            predicate = Resource(parse_iri(cur, prefixes))
        while True:
            obj = parse_pattern_term(cur, prefixes, extra)
            patterns.append(TriplePattern(subject, predicate, obj))
            if not cur.take(lex.PUNCT, ","):
                break
        if not cur.take(lex.PUNCT, ";"):
            break
        if cur.at(lex.PUNCT, ".") or cur.at(lex.PUNCT, "}"):
            break  # tolerate trailing ';'
    return patterns


# ---------------------------------------------------------------------------
# Filter expressions:  or := and ('||' and)* ; and := unary ('&&' unary)* ;
# unary := '!' unary | '(' or ')' | operand (op operand)? | name '(' args ')'
# ---------------------------------------------------------------------------

def parse_filter_call(cur: Cursor, prefixes: Mapping[str, str]) -> FilterExpr:
    cur.expect(lex.PUNCT, "(")
    expr = _parse_or(cur, prefixes)
    cur.expect(lex.PUNCT, ")")
    return expr


def _parse_or(cur: Cursor, prefixes: Mapping[str, str]) -> FilterExpr:
    parts = [_parse_and(cur, prefixes)]
    while cur.take(lex.PUNCT, "||"):
        parts.append(_parse_and(cur, prefixes))
    return parts[0] if len(parts) == 1 else BoolOr(tuple(parts))


def _parse_and(cur: Cursor, prefixes: Mapping[str, str]) -> FilterExpr:
    parts = [_parse_unary(cur, prefixes)]
    while cur.take(lex.PUNCT, "&&"):
        parts.append(_parse_unary(cur, prefixes))
    return parts[0] if len(parts) == 1 else BoolAnd(tuple(parts))


def _parse_operand(cur: Cursor, prefixes: Mapping[str, str]) -> Operand:
    if cur.at(lex.VAR):
        return parse_var(cur)
    if cur.at(lex.IRIREF) or (cur.at(lex.NAME) and ":" in cur.peek().text):
        return Resource(parse_iri(cur, prefixes))
    return parse_literal_token(cur, prefixes)


def _parse_unary(cur: Cursor, prefixes: Mapping[str, str]) -> FilterExpr:
    if cur.take(lex.PUNCT, "!"):
        return BoolNot(_parse_unary(cur, prefixes))
    if cur.at(lex.PUNCT, "("):
        cur.next()
        inner = _parse_or(cur, prefixes)
        cur.expect(lex.PUNCT, ")")
        return inner
    # bare name followed by '(' is a registered function call
    if cur.at(lex.NAME) and ":" not in cur.peek().text:
        name_tok = cur.next()
        cur.expect(lex.PUNCT, "(")
        args: list[Operand] = []
        if not cur.at(lex.PUNCT, ")"):
            args.append(_parse_operand(cur, prefixes))
            while cur.take(lex.PUNCT, ","):
                args.append(_parse_operand(cur, prefixes))
        cur.expect(lex.PUNCT, ")")
        return FunctionCall(name_tok.text, tuple(args))
    lhs = _parse_operand(cur, prefixes)
    for op in COMPARISON_OPS:
        if cur.at(lex.PUNCT, op):
            cur.next()
            rhs = _parse_operand(cur, prefixes)
            return Comparison(op, lhs, rhs)
    return cur.fail("a comparison operator")
