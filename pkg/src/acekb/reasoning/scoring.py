"""The adversity score: how many configured categories a person has at
least one recorded adversity in. Counting is closed-world over the
materialized graph; subclasses of a category count through the classified
hierarchy; duplicates within a category never inflate the score."""

from __future__ import annotations

from dataclasses import dataclass

from ..model import Iri
from ..store import Graph, RDF_TYPE, Resource, Triple, TriplePattern, Var
from ..vocab import SUFFERS_FROM, aces_score_class
from .taxonomy import Taxonomy


class UnknownCategory(Exception):
    def __init__(self, iri: Iri) -> None:
        super().__init__(f"not a declared class: {iri}")
        self.iri = iri


@dataclass(frozen=True)
class AceScore:
    person: Iri
    score: int
    categories_present: frozenset[Iri]
    score_class: Iri

    def type_triple(self) -> Triple:
        """`person a <score class>`; the caller decides whether to insert."""
        return Triple(Resource(self.person), Resource(RDF_TYPE), Resource(self.score_class))


def ace_score(
    g: Graph,
    person: Iri,
    categories: tuple[Iri, ...],
    taxonomy: Taxonomy | None = None,
    declared_classes: frozenset[Iri] | None = None,
) -> AceScore:
    if not categories or len(set(categories)) != len(categories):
        raise ValueError("categories must be nonempty and distinct")
    if declared_classes is not None:
        for c in categories:
            if c not in declared_classes:
                raise UnknownCategory(c)

    adversity_types: set[Iri] = set()
    for b in g.match_pattern(
        TriplePattern(Resource(person), Resource(SUFFERS_FROM), Var("a"))
    ):
        succ = b.get("a")
        if not isinstance(succ, Resource):
            continue
        for tb in g.match_pattern(
            TriplePattern(succ, Resource(RDF_TYPE), Var("c"))
        ):
            cls = tb.get("c")
            if isinstance(cls, Resource):
                adversity_types.add(cls.iri)

    present: set[Iri] = set()
    for category in categories:
        if taxonomy is not None:
            try:
                matching = taxonomy.descendant_classes(category)
            except KeyError:
                matching = {category}
        else:
            matching = {category}
        if adversity_types & matching:
            present.add(category)

    score = len(present)
    return AceScore(
        person=person,
        score=score,
        categories_present=frozenset(present),
        score_class=aces_score_class(score),
    )
