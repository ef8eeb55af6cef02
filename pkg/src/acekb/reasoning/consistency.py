"""Consistency checking over the materialized graph: disjointness
violations, asserted complements, qualified at-most violations counted
under unique names, and datatype range violations. Inconsistency is a
report, not an exception."""

from __future__ import annotations

from dataclasses import dataclass

from ..model import (
    AtMost, ClassAssertion, DataPropertyRange, DisjointClasses, Iri,
    NamedClass, Not, Ontology, SubClassOf,
)
from ..store import Graph, Literal, RDF_TYPE, Resource, TriplePattern, Var
from .materialize import Limits, materialize, member, role_successors


@dataclass(frozen=True)
class Clash:
    kind: str           # disjointness | complement | max-cardinality | datatype
    subject: Iri
    detail: str
    axiom_id: str


@dataclass(frozen=True)
class ConsistencyReport:
    consistent: bool
    clashes: tuple[Clash, ...]
    chain_warning: bool = False

    def render(self) -> str:
        if self.consistent:
            return "consistent\n"
        lines = ["inconsistent"]
        for c in self.clashes:
            lines.append(f"  [{c.kind}] {c.subject}: {c.detail}")
        return "\n".join(lines) + "\n"


def _typed(g: Graph, cls: Iri) -> list[Iri]:
    out = []
    for b in g.match_pattern(TriplePattern(Var("x"), Resource(RDF_TYPE), Resource(cls))):
        term = b.get("x")
        if isinstance(term, Resource):
            out.append(term.iri)
    return sorted(out)


def check_consistency(onto: Ontology, g: Graph, limits: Limits = Limits()) -> ConsistencyReport:
    delta = materialize(onto, g, limits)
    work = g.copy()
    work.insert_all(delta.added)

    clashes: list[Clash] = []
    for ax in onto.axioms:
        ax_id = onto.axiom_id(ax)
        if isinstance(ax, DisjointClasses):
            ops = ax.operands
            for i in range(len(ops)):
                for j in range(i + 1, len(ops)):
                    shared = set(_typed(work, ops[i].iri)) & set(_typed(work, ops[j].iri))
                    for x in sorted(shared):
                        clashes.append(Clash(
                            "disjointness", x,
                            f"instance of both {ops[i].iri} and {ops[j].iri}", ax_id))
        elif isinstance(ax, ClassAssertion) and isinstance(ax.cls, Not):
            negated = ax.cls.operand
            if isinstance(negated, NamedClass):
                violated = member(work, ax.individual, negated)
            else:
                violated = member(work, ax.individual, negated)
            if violated:
                clashes.append(Clash(
                    "complement", ax.individual,
                    f"asserted complement of {negated!r} but is a member", ax_id))
        elif isinstance(ax, SubClassOf) and isinstance(ax.sup, AtMost):
            restriction = ax.sup
            for x in _candidates(work):
                if not member(work, x, ax.sub):
                    continue
                succs = [
                    y for y in role_successors(work, x, restriction.role)
                    if member(work, y, restriction.filler)
                ]
                if len(succs) > restriction.n:  # unique names: distinct IRIs differ
                    clashes.append(Clash(
                        "max-cardinality", x,
                        f"{len(succs)} successors via {restriction.role.iri} "
                        f"exceed the limit of {restriction.n}", ax_id))
        elif isinstance(ax, DataPropertyRange):
            for b in work.match_pattern(
                TriplePattern(Var("s"), Resource(ax.property), Var("v"))
            ):
                value = b.get("v")
                subject = b.get("s")
                if not isinstance(value, Literal):
                    continue
                if value.datatype != ax.range.datatype or not ax.range.contains(value.value()):
                    clashes.append(Clash(
                        "datatype", subject.iri,
                        f"value {value} outside the declared range of {ax.property}",
                        ax_id))

    from .tableau import compile_tbox

    return ConsistencyReport(
        consistent=not clashes,
        clashes=tuple(clashes),
        chain_warning=compile_tbox(onto).chain_warning,
    )


def _candidates(g: Graph) -> list[Iri]:
    out: set[Iri] = set()
    for t in g:
        out.add(t.subject.iri)
        if isinstance(t.object, Resource):
            out.add(t.object.iri)
    return sorted(out)
