"""Interview question catalog: a JSON file mapping question ids to a
prompt, an answer shape, and assert templates that turn answers into
triples. Interview content is data, not code.

Template patterns use the rule-grammar pattern syntax with two reserved
variables: `?person` (the interviewee) and `?value` (the structured
answer, for number/text/choice shapes). `NEW(?x)` mints a deterministic
skolem per (question, person, template key), so re-answering the same
question never duplicates individuals."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .model import Iri
from .rule_engine import HeadPattern, NewVar
from .reasoning.skolem import skolem_iri
from .store import Literal, Resource, Triple, Var
from .syntax import lex as _lex
from .syntax.common import parse_triples_statement
from .syntax.rules import _new_var_hook
from .syntax.turtle import BUILTIN_PREFIXES
from .vocab import EX

SHAPES = ("boolean", "choice", "text", "number")


class CatalogError(Exception):
    pass


class UnknownQuestion(Exception):
    def __init__(self, question_id: str) -> None:
        super().__init__(f"unknown question: {question_id!r}")
        self.question_id = question_id


class InvalidAnswerValue(Exception):
    def __init__(self, question_id: str, expected: str, value) -> None:
        super().__init__(
            f"question {question_id!r} expects a {expected}, got {value!r}")
        self.question_id = question_id
        self.expected = expected


def _parse_patterns(texts: list[str], prefixes: dict[str, str]) -> tuple[HeadPattern, ...]:
    patterns: list[HeadPattern] = []
    for text in texts:
        cur = _lex.Cursor(_lex.tokenize(text))
        parsed = parse_triples_statement(cur, prefixes, _new_var_hook)
        cur.take(_lex.PUNCT, ".")
        if not cur.at(_lex.EOF):
            cur.fail("end of pattern")
        patterns.extend(HeadPattern(p.subject, p.predicate, p.object) for p in parsed)
    return tuple(patterns)


@dataclass(frozen=True)
class Question:
    id: str
    prompt: str
    shape: str
    choices: tuple[str, ...] = ()
    # answer key ("true"/"false" for boolean, choice text, or "*") -> patterns
    asserts: dict[str, tuple[HeadPattern, ...]] = None  # type: ignore[assignment]

    def validate_value(self, value) -> None:
        if self.shape == "boolean" and not isinstance(value, bool):
            raise InvalidAnswerValue(self.id, "boolean", value)
        if self.shape == "number" and (isinstance(value, bool) or not isinstance(value, (int, float))):
            raise InvalidAnswerValue(self.id, "number", value)
        if self.shape == "text" and not isinstance(value, str):
            raise InvalidAnswerValue(self.id, "text", value)
        if self.shape == "choice":
            if not isinstance(value, str) or value not in self.choices:
                raise InvalidAnswerValue(self.id, f"one of {self.choices}", value)

    def _answer_key(self, value) -> str:
        if self.shape == "boolean":
            return "true" if value else "false"
        if self.shape == "choice":
            return value
        return "*"

    def _value_literal(self, value) -> Literal:
        if self.shape == "number":
            if isinstance(value, int) and not isinstance(value, bool):
                return Literal(str(value), "integer")
            return Literal(str(value), "decimal")
        return Literal(str(value), "string")

    def triples_for(self, person: Iri, value) -> list[Triple]:
        self.validate_value(value)
        key = self._answer_key(value)
        patterns = self.asserts.get(key, self.asserts.get("*"))
        if patterns is None:
            return []
        out: list[Triple] = []
        skolems: dict[str, Iri] = {}

        def term(t):
            if isinstance(t, Var):
                if t.name == "person":
                    return Resource(person)
                if t.name == "value":
                    return self._value_literal(value)
                raise CatalogError(
                    f"question {self.id!r}: only ?person and ?value may appear, got ?{t.name}")
            if isinstance(t, NewVar):
                if t.name not in skolems:
                    skolems[t.name] = skolem_iri(
                        f"question:{self.id}:{t.name}", person.value)
                return Resource(skolems[t.name])
            return t

        for hp in patterns:
            s, p, o = term(hp.subject), term(hp.predicate), term(hp.object)
            if not isinstance(s, Resource) or not isinstance(p, Resource):
                raise CatalogError(f"question {self.id!r}: non-resource subject/predicate")
            out.append(Triple(s, p, o))
        return out


@dataclass(frozen=True)
class QuestionCatalog:
    questions: dict[str, Question]

    def get(self, question_id: str) -> Question:
        q = self.questions.get(question_id)
        if q is None:
            raise UnknownQuestion(question_id)
        return q

    def __contains__(self, question_id: str) -> bool:
        return question_id in self.questions


def load_catalog(path: Path | str, prefixes: dict[str, str] | None = None) -> QuestionCatalog:
    merged = dict(BUILTIN_PREFIXES)
    merged["ex"] = EX
    merged.update(prefixes or {})
    raw = json.loads(Path(path).read_text())
    questions: dict[str, Question] = {}
    for entry in raw:
        qid = entry["id"]
        if qid in questions:
            raise CatalogError(f"duplicate question id: {qid!r}")
        shape = entry.get("shape", "boolean")
        if shape not in SHAPES:
            raise CatalogError(f"question {qid!r}: unknown shape {shape!r}")
        asserts = {
            key: _parse_patterns(texts, merged)
            for key, texts in entry.get("assert", {}).items()
        }
        questions[qid] = Question(
            id=qid,
            prompt=entry.get("prompt", qid),
            shape=shape,
            choices=tuple(entry.get("choices", ())),
            asserts=asserts,
        )
    return QuestionCatalog(questions)
