"""Forward-chaining materialization of the fact graph under the ontology:
subclass axioms with named right sides, equivalences (the existential
direction runs a restricted chase that creates a deterministic skolem
witness only when none exists), property chains, inverse properties, and
domain/range typing. Runs to fixpoint, capped by round and skolem-depth
limits, and returns a delta instead of mutating its input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..model import (
    And, AtLeast, ClassExpression, DataSome, EquivalentClasses, Iri,
    NamedClass, ObjectPropertyDomain, ObjectPropertyRange, Ontology, Or, Role,
    RoleChain, Some, SubClassOf, SubObjectPropertyOf, Top,
    InverseObjectProperties, canonical,
)
from ..store import RDF_TYPE, Graph, Literal, Resource, Triple
from .skolem import is_skolem, skolem_iri


@dataclass(frozen=True)
class Limits:
    max_rounds: int = 20
    skolem_depth: int = 2

    def __post_init__(self) -> None:
        if self.max_rounds < 0 or self.skolem_depth < 0:
            raise ValueError("limits must be >= 0")


@dataclass(frozen=True)
class SkolemRecord:
    iri: Iri
    source_id: str
    parent: Iri


@dataclass(frozen=True)
class MaterializationDelta:
    added: tuple[Triple, ...]  # insertion order; disjoint from the input graph
    added_by: dict[Triple, str] = field(default_factory=dict)  # triple -> axiom id
    skolems: tuple[SkolemRecord, ...] = ()
    rounds: int = 0
    hit_round_limit: bool = False

    def as_set(self) -> set[Triple]:
        return set(self.added)


def type_triple(individual: Iri, cls: Iri) -> Triple:
    return Triple(Resource(individual), Resource(RDF_TYPE), Resource(cls))


def edge_triple(role: Role, subject: Iri, obj: Iri) -> Triple:
    if role.inverse:
        return Triple(Resource(obj), Resource(role.iri), Resource(subject))
    return Triple(Resource(subject), Resource(role.iri), Resource(obj))


def member(g: Graph, x: Iri, expr: ClassExpression) -> bool:
    """Structural closed-graph membership test used to match axiom left
    sides: named classes check type triples, Some follows (possibly
    inverted) edges, And/Or combine, AtLeast counts distinct successors
    under unique names, DataSome checks literal values. Negative and
    universal forms are never confirmed here."""
    if isinstance(expr, Top):
        return True
    if isinstance(expr, NamedClass):
        return type_triple(x, expr.iri) in g
    if isinstance(expr, And):
        return all(member(g, x, c) for c in expr.operands)
    if isinstance(expr, Or):
        return any(member(g, x, c) for c in expr.operands)
    if isinstance(expr, Some):
        return any(member(g, y, expr.filler) for y in role_successors(g, x, expr.role))
    if isinstance(expr, AtLeast):
        count = sum(
            1 for y in role_successors(g, x, expr.role) if member(g, y, expr.filler)
        )
        return count >= expr.n
    if isinstance(expr, DataSome):
        values = data_values(g, x, expr.property)
        return any(
            lit.datatype == expr.range.datatype and expr.range.contains(lit.value())
            for lit in values
        )
    return False  # Bottom, Not, Only, AtMost: not confirmable structurally


def role_successors(g: Graph, x: Iri, role: Role) -> list[Iri]:
    from ..store import TriplePattern, Var

    out: set[Iri] = set()
    if role.inverse:
        for b in g.match_pattern(TriplePattern(Var("s"), Resource(role.iri), Resource(x))):
            term = b.get("s")
            if isinstance(term, Resource):
                out.add(term.iri)
    else:
        for b in g.match_pattern(TriplePattern(Resource(x), Resource(role.iri), Var("o"))):
            term = b.get("o")
            if isinstance(term, Resource):
                out.add(term.iri)
    return sorted(out)


def data_values(g: Graph, x: Iri, prop: Iri) -> list[Literal]:
    from ..store import TriplePattern, Var

    out = []
    for b in g.match_pattern(TriplePattern(Resource(x), Resource(prop), Var("o"))):
        term = b.get("o")
        if isinstance(term, Literal):
            out.append(term)
    return sorted(out)


def can_instantiate(expr: ClassExpression) -> bool:
    """Whether the chase can build a concrete witness for this filler:
    names, Top, conjunctions of instantiables, and nested existentials.
    Disjunctions and negative/universal/counting forms are skipped (there
    is no deterministic way to pick their shape)."""
    if isinstance(expr, (NamedClass, Top)):
        return True
    if isinstance(expr, And):
        return all(can_instantiate(c) for c in expr.operands)
    if isinstance(expr, Some):
        return can_instantiate(expr.filler)
    return False


def witness_plan(
    role: Role,
    parent: Iri,
    filler: ClassExpression,
    source_id: str,
    parent_depth: int,
    max_depth: int,
) -> tuple[list[Triple], list[SkolemRecord]] | None:
    """The deterministic witness chain for `parent needs a role-successor in
    filler`, or None when the filler has no buildable shape or the chain
    would exceed the skolem depth cap. Pure: both the chase and any
    independent re-derivation rely on this one naming scheme."""
    if not can_instantiate(filler):
        return None
    triples: list[Triple] = []
    records: list[SkolemRecord] = []

    def build(node: Iri, f: ClassExpression, sid: str, node_depth: int) -> bool:
        if isinstance(f, Top):
            return True
        if isinstance(f, NamedClass):
            triples.append(type_triple(node, f.iri))
            return True
        if isinstance(f, And):
            return all(
                build(node, c, f"{sid}.{i}", node_depth)
                for i, c in enumerate(f.operands)
            )
        if isinstance(f, Some):
            child_depth = node_depth + 1
            if child_depth > max_depth:
                return False
            sk = skolem_iri(f"{sid}.s", canonical(node))
            triples.append(edge_triple(f.role, node, sk))
            records.append(SkolemRecord(sk, f"{sid}.s", node))
            return build(sk, f.filler, f"{sid}.s", child_depth)
        return False

    depth = parent_depth + 1
    if depth > max_depth:
        return None
    sk = skolem_iri(source_id, canonical(parent))
    triples.append(edge_triple(role, parent, sk))
    records.append(SkolemRecord(sk, source_id, parent))
    if not build(sk, filler, source_id, depth):
        return None
    return triples, records


def individuals_of(g: Graph) -> list[Iri]:
    out: set[Iri] = set()
    for t in g:
        out.add(t.subject.iri)
        if isinstance(t.object, Resource):
            out.add(t.object.iri)
    return sorted(out)


class _Chase:
    def __init__(self, onto: Ontology, g: Graph, limits: Limits) -> None:
        self.onto = onto
        self.work = g.copy()
        self.base_size = len(g)
        self.limits = limits
        self.added: list[Triple] = []
        self.added_by: dict[Triple, str] = {}
        self.skolems: list[SkolemRecord] = []
        self.depth: dict[Iri, int] = {}

    def _node_depth(self, x: Iri) -> int:
        if x in self.depth:
            return self.depth[x]
        return 1 if is_skolem(x) else 0

    def add(self, t: Triple, axiom_id: str) -> bool:
        if self.work.insert(t):
            self.added.append(t)
            self.added_by[t] = axiom_id
            return True
        return False

    # -- existential witnesses (restricted chase) ---------------------------

    def ensure_witness(self, x: Iri, role: Role, filler: ClassExpression,
                       source_id: str, axiom_id: str) -> bool:
        if any(member(self.work, y, filler) for y in role_successors(self.work, x, role)):
            return False
        plan = witness_plan(role, x, filler, source_id,
                            self._node_depth(x), self.limits.skolem_depth)
        if plan is None:
            return False
        triples, records = plan
        for record in records:
            self.depth[record.iri] = self._node_depth(record.parent) + 1
            self.skolems.append(record)
        for t in triples:
            self.add(t, axiom_id)
        return True

    # -- one round ----------------------------------------------------------

    def round(self) -> bool:
        changed = False
        onto = self.onto
        for ax in onto.axioms:
            ax_id = onto.axiom_id(ax)
            if isinstance(ax, SubClassOf) and isinstance(ax.sup, NamedClass):
                for x in individuals_of(self.work):
                    if member(self.work, x, ax.sub):
                        changed |= self.add(type_triple(x, ax.sup.iri), ax_id)
            elif isinstance(ax, EquivalentClasses):
                for i, lhs in enumerate(ax.operands):
                    for j, rhs in enumerate(ax.operands):
                        if i == j:
                            continue
                        if isinstance(rhs, NamedClass):
                            for x in individuals_of(self.work):
                                if member(self.work, x, lhs):
                                    changed |= self.add(type_triple(x, rhs.iri), ax_id)
                        elif isinstance(rhs, Some):
                            for x in individuals_of(self.work):
                                if member(self.work, x, lhs):
                                    changed |= self.ensure_witness(
                                        x, rhs.role, rhs.filler,
                                        f"{ax_id}:{i}>{j}", ax_id)
            elif isinstance(ax, SubObjectPropertyOf) and isinstance(ax.sub, RoleChain):
                changed |= self._apply_chain(ax.sub.roles, ax.sup, ax_id)
            elif isinstance(ax, InverseObjectProperties):
                for t in list(self.work):
                    if not isinstance(t.object, Resource):
                        continue
                    if t.predicate.iri == ax.first:
                        changed |= self.add(
                            Triple(t.object, Resource(ax.second), t.subject), ax_id)
                    if t.predicate.iri == ax.second:
                        changed |= self.add(
                            Triple(t.object, Resource(ax.first), t.subject), ax_id)
            elif isinstance(ax, ObjectPropertyDomain) and isinstance(ax.domain, NamedClass):
                for t in list(self.work):
                    if t.predicate.iri == ax.role:
                        changed |= self.add(type_triple(t.subject.iri, ax.domain.iri), ax_id)
            elif isinstance(ax, ObjectPropertyRange) and isinstance(ax.range, NamedClass):
                for t in list(self.work):
                    if t.predicate.iri == ax.role and isinstance(t.object, Resource):
                        changed |= self.add(type_triple(t.object.iri, ax.range.iri), ax_id)
        return changed

    def _apply_chain(self, roles: tuple[Role, ...], sup: Iri, ax_id: str) -> bool:
        changed = False
        for x in individuals_of(self.work):
            frontier = [x]
            for role in roles:
                frontier = sorted(
                    {z for y in frontier for z in role_successors(self.work, y, role)}
                )
                if not frontier:
                    break
            for z in frontier:
                changed |= self.add(Triple(Resource(x), Resource(sup), Resource(z)), ax_id)
        return changed


def materialize(onto: Ontology, g: Graph, limits: Limits = Limits()) -> MaterializationDelta:
    """Delta that closes g under the ontology's materialization rules.
    Stops early at max_rounds; `hit_round_limit` is set when the cap cut a
    still-changing run short (the partial delta is returned, not discarded)."""
    chase = _Chase(onto, g, limits)
    rounds = 0
    changed = True
    while changed and rounds < limits.max_rounds:
        rounds += 1
        changed = chase.round()
    return MaterializationDelta(
        added=tuple(chase.added),
        added_by=chase.added_by,
        skolems=tuple(chase.skolems),
        rounds=rounds,
        hit_round_limit=changed,
    )
