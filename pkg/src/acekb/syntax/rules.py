"""Rule grammar:

    RULE <name>
    WHEN { <turtle-style patterns with ?vars> [FILTER(...)] }
    THEN <action>+

where an action is `ASSERT { patterns, NEW(?v) allowed in term positions }`
or `RECOMMEND kind(args)` with kinds ask_question, schedule_appointment,
screen_for, notify. Names must be unique; every non-NEW head variable must
be bound in the body."""

from __future__ import annotations

from typing import Mapping

from ..query import FilterExpr, filter_variables
from ..rule_engine import (
    AssertTemplate, HeadPattern, NewVar, RecommendAction, Rule, RuleSet,
)
from ..store import Resource, TriplePattern, Var
from . import lex
from .common import parse_filter_call, parse_triples_statement, parse_var
from .errors import DuplicateRuleName, ParseError, UnboundHeadVariable
from .lex import Cursor
from .turtle import BUILTIN_PREFIXES, parse_iri, parse_literal_token


def _new_var_hook(cur: Cursor):
    if cur.at(lex.NAME, "NEW"):
        cur.next()
        cur.expect(lex.PUNCT, "(")
        var = parse_var(cur)
        cur.expect(lex.PUNCT, ")")
        return NewVar(var.name)
    return None


def _parse_block(cur: Cursor, prefixes: Mapping[str, str], allow_new: bool,
                 allow_filters: bool):
    patterns: list[TriplePattern] = []
    filters: list[FilterExpr] = []
    cur.expect(lex.PUNCT, "{")
    hook = _new_var_hook if allow_new else None
    while not cur.at(lex.PUNCT, "}"):
        if cur.at_name("FILTER") and allow_filters:
            cur.next()
            filters.append(parse_filter_call(cur, prefixes))
            cur.take(lex.PUNCT, ".")
            continue
        patterns.extend(parse_triples_statement(cur, prefixes, hook))
        if not cur.take(lex.PUNCT, ".") and not cur.at(lex.PUNCT, "}"):
            cur.fail("'.' or '}'")
    cur.expect(lex.PUNCT, "}")
    return patterns, filters


def parse_rules(text: str, base_prefixes: Mapping[str, str] | None = None) -> RuleSet:
    prefixes: dict[str, str] = dict(BUILTIN_PREFIXES)
    prefixes.update(base_prefixes or {})
    cur = Cursor(lex.tokenize(text))
    rules: list[Rule] = []
    names: set[str] = set()

    while cur.at_name("PREFIX"):
        cur.next()
        name_tok = cur.expect(lex.NAME)
        if not name_tok.text.endswith(":"):
            cur.fail("a prefix name ending in ':'")
        iri_tok = cur.expect(lex.IRIREF)
        prefixes[name_tok.text[:-1]] = iri_tok.text[1:-1]

    while not cur.at(lex.EOF):
        cur.expect_name("RULE")
        name_tok = cur.expect(lex.NAME)
        name = name_tok.text
        if name in names:
            raise DuplicateRuleName(name)
        names.add(name)
        cur.expect_name("WHEN")
        body, filters = _parse_block(cur, prefixes, allow_new=False, allow_filters=True)
        cur.expect_name("THEN")
        actions: list = []
        while cur.at_name("ASSERT") or cur.at_name("RECOMMEND"):
            if cur.at_name("ASSERT"):
                cur.next()
                head, _ = _parse_block(cur, prefixes, allow_new=True, allow_filters=False)
                actions.append(AssertTemplate(tuple(
                    HeadPattern(p.subject, p.predicate, p.object) for p in head
                )))
            else:
                cur.next()
                kind_tok = cur.expect(lex.NAME)
                cur.expect(lex.PUNCT, "(")
                args = []
                if not cur.at(lex.PUNCT, ")"):
                    args.append(_parse_action_arg(cur, prefixes))
                    while cur.take(lex.PUNCT, ","):
                        args.append(_parse_action_arg(cur, prefixes))
                cur.expect(lex.PUNCT, ")")
                try:
                    actions.append(RecommendAction(kind_tok.text, tuple(args)))
                except Exception as exc:
                    raise ParseError(kind_tok.span, "a valid recommendation", str(exc))
        if not actions:
            cur.fail("ASSERT or RECOMMEND")
        rule = Rule(name, tuple(body), tuple(filters), tuple(actions))
        _validate_scope(rule)
        rules.append(rule)
    return RuleSet(tuple(rules))


def _parse_action_arg(cur: Cursor, prefixes: Mapping[str, str]):
    if cur.at(lex.VAR):
        return parse_var(cur)
    if cur.at(lex.IRIREF) or cur.at(lex.NAME):
        return Resource(parse_iri(cur, prefixes))
    return parse_literal_token(cur, prefixes)


def _validate_scope(rule: Rule) -> None:
    body_vars: set[str] = set()
    for p in rule.body:
        body_vars |= p.variables()
    for f in rule.filters:
        for v in filter_variables(f):
            if v not in body_vars:
                raise UnboundHeadVariable(rule.name, v)
    for action in rule.actions:
        if isinstance(action, AssertTemplate):
            for hp in action.patterns:
                for term in (hp.subject, hp.predicate, hp.object):
                    if isinstance(term, Var) and term.name not in body_vars:
                        raise UnboundHeadVariable(rule.name, term.name)
        else:
            for arg in action.args:
                if isinstance(arg, Var) and arg.name not in body_vars:
                    raise UnboundHeadVariable(rule.name, arg.name)
