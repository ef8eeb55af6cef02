"""Indexed in-memory fact store with triple-pattern and basic-graph-pattern
matching. Matching is homomorphism search: distinct variables may bind the
same term. All match results are deterministically ordered.
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import Iterable, Union

from .model import Iri

RDF_TYPE = Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type")
XSD = "http://www.w3.org/2001/XMLSchema#"


class StoreError(Exception):
    pass


class BadLiteral(StoreError):
    pass


def parse_literal_value(lexical: str, datatype: str):
    """Typed value of a literal's lexical form; raises BadLiteral if the
    form does not validate against the datatype."""
    try:
        if datatype == "integer":
            if not lexical.lstrip("+-").isdigit():
                raise ValueError(lexical)
            return int(lexical)
        if datatype == "decimal":
            return Decimal(lexical)
        if datatype == "date":
            return datetime.date.fromisoformat(lexical)
        if datatype == "string":
            return lexical
    except (ValueError, InvalidOperation):
        raise BadLiteral(f"{lexical!r} is not a valid {datatype}") from None
    raise BadLiteral(f"unknown datatype {datatype!r}")


@dataclass(frozen=True, order=True)
class Resource:
    iri: Iri

    def sort_key(self) -> tuple:
        return (0, self.iri.value, "")

    def __str__(self) -> str:
        return f"<{self.iri.value}>"


@dataclass(frozen=True, order=True)
class Literal:
    lexical: str
    datatype: str = "string"

    def __post_init__(self) -> None:
        parse_literal_value(self.lexical, self.datatype)  # validate

    def value(self):
        return parse_literal_value(self.lexical, self.datatype)

    def sort_key(self) -> tuple:
        return (1, self.lexical, self.datatype)

    def __str__(self) -> str:
        return f'"{self.lexical}"^^{self.datatype}'


Term = Union[Resource, Literal]


def term_key(t: Term) -> tuple:
    return t.sort_key()


@dataclass(frozen=True, order=True)
class Triple:
    subject: Resource
    predicate: Resource
    object: Term

    def sort_key(self) -> tuple:
        return (self.subject.sort_key(), self.predicate.sort_key(), self.object.sort_key())


@dataclass(frozen=True, order=True)
class Var:
    name: str


PatternTerm = Union[Resource, Literal, Var]


@dataclass(frozen=True)
class TriplePattern:
    subject: PatternTerm
    predicate: PatternTerm
    object: PatternTerm

    def variables(self) -> set[str]:
        return {p.name for p in (self.subject, self.predicate, self.object)
                if isinstance(p, Var)}


@dataclass(frozen=True)
class Binding:
    """Immutable partial map from variable names to terms."""

    items: tuple[tuple[str, Term], ...] = ()

    @staticmethod
    def of(mapping: dict[str, Term] | None = None, **kwargs: Term) -> "Binding":
        merged = dict(mapping or {})
        merged.update(kwargs)
        return Binding(tuple(sorted(merged.items())))

    def get(self, name: str) -> Term | None:
        for k, v in self.items:
            if k == name:
                return v
        return None

    def __contains__(self, name: str) -> bool:
        return self.get(name) is not None

    def extended(self, name: str, term: Term) -> "Binding":
        return Binding(tuple(sorted(list(self.items) + [(name, term)])))

    def as_dict(self) -> dict[str, Term]:
        return dict(self.items)

    def sort_key(self) -> tuple:
        return tuple((k, v.sort_key()) for k, v in self.items)


EMPTY_BINDING = Binding()


def substitute(pattern: TriplePattern, binding: Binding) -> TriplePattern:
    def sub(p: PatternTerm) -> PatternTerm:
        if isinstance(p, Var):
            bound = binding.get(p.name)
            return bound if bound is not None else p
        return p

    return TriplePattern(sub(pattern.subject), sub(pattern.predicate), sub(pattern.object))


class Graph:
    """Triple set with SPO/POS/OSP indices. Set semantics: insert is
    idempotent. Single writer, any number of readers between mutations;
    callers materialize match results before mutating."""

    def __init__(self, triples: Iterable[Triple] = ()) -> None:
        self._triples: set[Triple] = set()
        self._spo: dict[Resource, dict[Resource, set[Term]]] = {}
        self._pos: dict[Resource, dict[Term, set[Resource]]] = {}
        self._osp: dict[Term, dict[Resource, set[Resource]]] = {}
        self.revision = 0
        for t in triples:
            self.insert(t)

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, t: Triple) -> bool:
        return t in self._triples

    def __iter__(self):
        return iter(self._triples)

    def triples(self) -> list[Triple]:
        return sorted(self._triples, key=Triple.sort_key)

    def copy(self) -> "Graph":
        return Graph(self._triples)

    def insert(self, t: Triple) -> bool:
        if t in self._triples:
            return False
        self._triples.add(t)
        self._spo.setdefault(t.subject, {}).setdefault(t.predicate, set()).add(t.object)
        self._pos.setdefault(t.predicate, {}).setdefault(t.object, set()).add(t.subject)
        self._osp.setdefault(t.object, {}).setdefault(t.subject, set()).add(t.predicate)
        self.revision += 1
        return True

    def insert_all(self, triples: Iterable[Triple]) -> int:
        return sum(1 for t in triples if self.insert(t))

    # -- pattern matching ---------------------------------------------------

    def _candidates(self, p: TriplePattern) -> Iterable[Triple]:
        s = p.subject if not isinstance(p.subject, Var) else None
        pr = p.predicate if not isinstance(p.predicate, Var) else None
        o = p.object if not isinstance(p.object, Var) else None
        if s is not None and not isinstance(s, Resource):
            return ()  # literal subject can never match
        if pr is not None and not isinstance(pr, Resource):
            return ()
        if s is not None:
            by_pred = self._spo.get(s, {})
            if pr is not None:
                objs = by_pred.get(pr, ())
                return (Triple(s, pr, obj) for obj in objs if o is None or obj == o)
            return (Triple(s, pred, obj) for pred, objs in by_pred.items()
                    for obj in objs if o is None or obj == o)
        if pr is not None:
            by_obj = self._pos.get(pr, {})
            if o is not None:
                return (Triple(subj, pr, o) for subj in by_obj.get(o, ()))
            return (Triple(subj, pr, obj) for obj, subjs in by_obj.items() for subj in subjs)
        if o is not None:
            by_subj = self._osp.get(o, {})
            return (Triple(subj, pred, o) for subj, preds in by_subj.items() for pred in preds)
        return iter(self._triples)

    def estimate(self, p: TriplePattern) -> int:
        """Match-count estimate for the most-bound index prefix; drives BGP
        join order. Exact for fully indexed shapes."""
        s = p.subject if isinstance(p.subject, Resource) else None
        pr = p.predicate if isinstance(p.predicate, Resource) else None
        o = p.object if not isinstance(p.object, Var) else None
        if isinstance(p.subject, Literal) or isinstance(p.predicate, Literal):
            return 0
        if s is not None:
            by_pred = self._spo.get(s, {})
            if pr is not None:
                objs = by_pred.get(pr, ())
                if o is not None:
                    return 1 if o in objs else 0
                return len(objs)
            return sum(len(v) for v in by_pred.values())
        if pr is not None:
            by_obj = self._pos.get(pr, {})
            if o is not None:
                return len(by_obj.get(o, ()))
            return sum(len(v) for v in by_obj.values())
        if o is not None:
            return sum(len(v) for v in self._osp.get(o, {}).values())
        return len(self._triples)

    def match_pattern(self, p: TriplePattern, seed: Binding = EMPTY_BINDING) -> list[Binding]:
        """Bindings b extending seed such that b(p) is a triple of the graph.
        Sorted by binding key."""
        p = substitute(p, seed)
        out: set[Binding] = set()
        for t in self._candidates(p):
            b = seed
            ok = True
            for pos_term, triple_term in (
                (p.subject, t.subject), (p.predicate, t.predicate), (p.object, t.object)
            ):
                if isinstance(pos_term, Var):
                    prev = b.get(pos_term.name)
                    if prev is None:
                        b = b.extended(pos_term.name, triple_term)
                    elif prev != triple_term:
                        ok = False
                        break
                elif pos_term != triple_term:
                    ok = False
                    break
            if ok:
                out.add(b)
        return sorted(out, key=Binding.sort_key)

    def match_bgp(self, patterns: list[TriplePattern], seed: Binding = EMPTY_BINDING) -> list[Binding]:
        """All homomorphisms extending seed that make every pattern a triple
        of the graph. Join order follows ascending selectivity estimates
        (ties by list position); the result set never depends on it."""
        if not patterns:
            return [seed]
        order = sorted(range(len(patterns)),
                       key=lambda i: (self.estimate(substitute(patterns[i], seed)), i))
        results: set[Binding] = set()

        def extend(binding: Binding, remaining: list[int]) -> None:
            if not remaining:
                results.add(binding)
                return
            # re-rank remaining patterns under the current partial binding
            best = min(remaining,
                       key=lambda i: (self.estimate(substitute(patterns[i], binding)), i))
            rest = [i for i in remaining if i != best]
            for nxt in self.match_pattern(patterns[best], binding):
                extend(nxt, rest)

        extend(seed, order)
        return sorted(results, key=Binding.sort_key)
