"""Classification: arrange all declared classes into a direct-subsumption
DAG with equivalent classes merged into one node, plus realization (most
specific types of an individual)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..model import TOP, Iri, NamedClass, Ontology
from ..store import Graph, RDF_TYPE, Resource, TriplePattern, Var
from ..vocab import OWL_NOTHING, OWL_THING
from .tableau import Reasoner


class UnknownIndividual(Exception):
    def __init__(self, iri: Iri) -> None:
        super().__init__(f"individual not present in the graph: {iri}")
        self.iri = iri


@dataclass(frozen=True)
class Taxonomy:
    """Nodes are frozensets of equivalent class IRIs; `above`/`below` hold
    the direct (transitively reduced) subsumption edges. The top node always
    contains owl:Thing and the bottom node owl:Nothing."""

    nodes: tuple[frozenset[Iri], ...]
    above: dict[frozenset[Iri], tuple[frozenset[Iri], ...]]
    below: dict[frozenset[Iri], tuple[frozenset[Iri], ...]]
    top: frozenset[Iri]
    bottom: frozenset[Iri]

    def node_of(self, cls: Iri) -> frozenset[Iri]:
        for node in self.nodes:
            if cls in node:
                return node
        raise KeyError(cls)

    def ancestors(self, cls: Iri) -> set[frozenset[Iri]]:
        start = self.node_of(cls)
        seen: set[frozenset[Iri]] = set()
        frontier = [start]
        while frontier:
            cur = frontier.pop()
            for sup in self.above.get(cur, ()):
                if sup not in seen:
                    seen.add(sup)
                    frontier.append(sup)
        return seen

    def descendant_classes(self, cls: Iri) -> set[Iri]:
        """cls itself, its equivalents, and every class strictly below it."""
        start = self.node_of(cls)
        out: set[Iri] = set(start)
        frontier = [start]
        seen = {start}
        while frontier:
            cur = frontier.pop()
            for sub in self.below.get(cur, ()):
                if sub not in seen:
                    seen.add(sub)
                    out |= set(sub)
                    frontier.append(sub)
        out.discard(OWL_NOTHING)
        return out

    def is_strictly_below(self, a: Iri, b: Iri) -> bool:
        na, nb = self.node_of(a), self.node_of(b)
        return na != nb and nb in self.ancestors(a)

    def render(self) -> str:
        """Indented text rendering, children sorted by smallest member."""
        lines: list[str] = []

        def label(node: frozenset[Iri]) -> str:
            return " = ".join(sorted(i.value for i in node))

        def walk(node: frozenset[Iri], depth: int, seen: set) -> None:
            lines.append("  " * depth + label(node))
            for child in sorted(self.below.get(node, ()),
                                key=lambda n: min(i.value for i in n)):
                if child == self.bottom and len(child) == 1:
                    continue
                walk(child, depth + 1, seen)

        walk(self.top, 0, set())
        if len(self.bottom) > 1:
            lines.append("unsatisfiable: " + label(self.bottom))
        return "\n".join(lines) + "\n"


def classify(onto: Ontology, reasoner: Reasoner | None = None) -> Taxonomy:
    r = reasoner if reasoner is not None else Reasoner(onto)
    classes = sorted(onto.classes, key=lambda i: i.value)

    unsat = [c for c in classes if not r.is_satisfiable(NamedClass(c))]
    sat = [c for c in classes if c not in set(unsat)]
    tops = [c for c in sat if r.is_subsumed(TOP, NamedClass(c))]  # equal to Top

    subsumed: dict[tuple[Iri, Iri], bool] = {}
    for a, b in itertools.permutations(sat, 2):
        subsumed[(a, b)] = r.is_subsumed(NamedClass(a), NamedClass(b))

    # group equivalents
    groups: list[set[Iri]] = []
    placed: set[Iri] = set()
    for c in sat:
        if c in placed or c in tops:
            continue
        group = {c}
        for d in sat:
            if d != c and d not in placed and d not in tops \
                    and subsumed[(c, d)] and subsumed[(d, c)]:
                group.add(d)
        placed |= group
        groups.append(group)

    top_node = frozenset({OWL_THING, *tops})
    bottom_node = frozenset({OWL_NOTHING, *unsat})
    nodes = [top_node] + [frozenset(g) for g in sorted(groups, key=lambda g: min(i.value for i in g))] \
        + [bottom_node]

    def strictly_below(na: frozenset[Iri], nb: frozenset[Iri]) -> bool:
        if na == nb:
            return False
        if nb == top_node or na == bottom_node:
            return True
        if na == top_node or nb == bottom_node:
            return False
        a, b = min(na, key=lambda i: i.value), min(nb, key=lambda i: i.value)
        return subsumed[(a, b)]

    above: dict[frozenset[Iri], list[frozenset[Iri]]] = {n: [] for n in nodes}
    below: dict[frozenset[Iri], list[frozenset[Iri]]] = {n: [] for n in nodes}
    for na in nodes:
        supers = [nb for nb in nodes if strictly_below(na, nb)]
        direct = [nb for nb in supers
                  if not any(strictly_below(mid, nb) and strictly_below(na, mid)
                             for mid in supers)]
        for nb in direct:
            above[na].append(nb)
            below[nb].append(na)

    return Taxonomy(
        nodes=tuple(nodes),
        above={k: tuple(v) for k, v in above.items()},
        below={k: tuple(v) for k, v in below.items()},
        top=top_node,
        bottom=bottom_node,
    )


def realize(onto: Ontology, g: Graph, individual: Iri,
            taxonomy: Taxonomy | None = None) -> set[Iri]:
    """Most specific asserted/materialized types of the individual, minimal
    with respect to the classified hierarchy."""
    mentioned = any(
        t.subject.iri == individual
        or (isinstance(t.object, Resource) and t.object.iri == individual)
        for t in g
    )
    if not mentioned:
        raise UnknownIndividual(individual)
    types = {
        b.get("c").iri
        for b in g.match_pattern(TriplePattern(Resource(individual), Resource(RDF_TYPE), Var("c")))
        if isinstance(b.get("c"), Resource)
    }
    taxonomy = taxonomy if taxonomy is not None else classify(onto)
    known = {t for t in types if any(t in node for node in taxonomy.nodes)}
    unknown = types - known  # undeclared types are kept as-is
    minimal = {
        t for t in known
        if not any(other != t and taxonomy.is_strictly_below(other, t) for other in known)
    }
    return minimal | unknown
