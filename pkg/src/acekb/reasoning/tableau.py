"""Concept-satisfiability tableau for the ALC + role-hierarchy + inverse +
qualified-counting + datatype fragment.

Structure of the procedure:
  * the input concept and all TBox concepts are put in negation normal form;
  * axioms with a named left side are absorbed and applied lazily; a name
    with a unique, acyclic, otherwise-unconstrained equivalence unfolds in
    both polarities; every residual general axiom is internalized as a
    universal constraint added to every node label;
  * roles are canonicalized modulo declared inverses, and the sub-role
    relation (closed under inversion) drives neighbour lookups;
  * qualified at-least creates pairwise-distinct children; qualified
    at-most first decides filler membership (choose rule), then merges
    non-distinct neighbours, branching over candidate pairs;
  * pairwise blocking (equal label here and at the parent, equal incoming
    edge label) stops generation on repeating node pairs;
  * per-node data constraints reduce to interval arithmetic over the four
    datatypes (integer and date are discrete, decimal is dense, string is
    facet-free).

Property-chain axioms are NOT consulted here: chains are handled only by
materialization, and callers see a `chain_warning` flag on the compiled
TBox. That incompleteness is deliberate and documented.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..model import (
    And, AtLeast, AtMost, Bottom, ClassExpression, DataRange, DataSome,
    DisjointClasses, EquivalentClasses, Iri, NamedClass, Not,
    ObjectPropertyDomain, ObjectPropertyRange, DataPropertyRange, Ontology,
    Only, Or, Role, RoleChain, Some, SubClassOf, SubObjectPropertyOf, Top,
    InverseObjectProperties, canonical, nnf,
)

TOP = Top()

MAX_STEPS = 500_000


class TableauLimitExceeded(Exception):
    """Safety valve; indicates a bug or pathological input, never a verdict."""


# ---------------------------------------------------------------------------
# Role canonicalization and hierarchy
# ---------------------------------------------------------------------------

SRole = tuple[str, bool]  # (iri string, inverted)


def _flip(r: SRole) -> SRole:
    return (r[0], not r[1])


class RoleTable:
    """Union-find over signed roles for declared inverses, plus the
    reflexive-transitive sub-role closure (closed under inversion)."""

    def __init__(self, onto: Ontology) -> None:
        self._parent: dict[SRole, SRole] = {}
        for ax in onto.axioms:
            if isinstance(ax, InverseObjectProperties):
                self._union((ax.first.value, False), (ax.second.value, True))
                self._union((ax.first.value, True), (ax.second.value, False))
        edges: dict[SRole, set[SRole]] = {}
        for ax in onto.axioms:
            if isinstance(ax, SubObjectPropertyOf) and isinstance(ax.sub, Role):
                sub = self.canon((ax.sub.iri.value, ax.sub.inverse))
                sup = self.canon((ax.sup.value, False))
                edges.setdefault(sub, set()).add(sup)
                edges.setdefault(self.canon(_flip(sub)), set()).add(self.canon(_flip(sup)))
        self._supers: dict[SRole, frozenset[SRole]] = {}
        self._edges = edges

    def _find(self, r: SRole) -> SRole:
        path = []
        while r in self._parent and self._parent[r] != r:
            path.append(r)
            r = self._parent[r]
        for p in path:
            self._parent[p] = r
        return r

    def _union(self, a: SRole, b: SRole) -> None:
        ra, rb = self._find(a), self._find(b)
        if ra == rb:
            return
        keep, drop = min(ra, rb), max(ra, rb)
        self._parent.setdefault(keep, keep)
        self._parent[drop] = keep

    def canon(self, r: SRole) -> SRole:
        return self._find(r)

    def canon_role(self, role: Role) -> SRole:
        return self.canon((role.iri.value, role.inverse))

    def supers(self, r: SRole) -> frozenset[SRole]:
        r = self.canon(r)
        if r in self._supers:
            return self._supers[r]
        seen = {r}
        frontier = [r]
        while frontier:
            cur = frontier.pop()
            for nxt in self._edges.get(cur, ()):
                nxt = self.canon(nxt)
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        result = frozenset(seen)
        self._supers[r] = result
        return result


# ---------------------------------------------------------------------------
# TBox compilation: absorption, lazy unfolding, internalization
# ---------------------------------------------------------------------------

@dataclass
class CompiledTBox:
    definitions: dict[Iri, ClassExpression]             # A == C, both polarities
    inclusions: dict[Iri, tuple[ClassExpression, ...]]  # A => C (absorbed)
    universals: tuple[ClassExpression, ...]             # hold at every node
    roles: RoleTable
    data_ranges: dict[Iri, tuple[DataRange, ...]]       # global data ranges
    chain_warning: bool = False


def _expr_names(e: ClassExpression) -> set[Iri]:
    if isinstance(e, NamedClass):
        return {e.iri}
    if isinstance(e, Not):
        return _expr_names(e.operand)
    if isinstance(e, (And, Or)):
        return set().union(*(_expr_names(c) for c in e.operands))
    if isinstance(e, (Some, Only, AtLeast, AtMost)):
        return _expr_names(e.filler)
    return set()


def compile_tbox(onto: Ontology) -> CompiledTBox:
    inclusions: dict[Iri, list[ClassExpression]] = {}
    universals: list[ClassExpression] = []
    data_ranges: dict[Iri, list[DataRange]] = {}
    candidates: list[tuple[Iri, ClassExpression]] = []
    chain_warning = False

    def absorb(lhs: ClassExpression, rhs: ClassExpression) -> None:
        """Rewrite `lhs subsumed-by rhs` into lazily applicable inclusions
        wherever possible: existential left sides move to the filler through
        the inverse role, disjunctive left sides split, a named conjunct of a
        conjunction hosts the residue. Only what is left over becomes a
        universal constraint on every node."""
        while True:
            if isinstance(lhs, NamedClass):
                inclusions.setdefault(lhs.iri, []).append(nnf(rhs))
                return
            if isinstance(lhs, Some):
                lhs, rhs = lhs.filler, Only(lhs.role.flipped(), rhs)
                continue
            if isinstance(lhs, Or):
                for disjunct in lhs.operands:
                    absorb(disjunct, rhs)
                return
            if isinstance(lhs, And):
                idx = next((i for i, c in enumerate(lhs.operands)
                            if isinstance(c, NamedClass)), None)
                if idx is not None:
                    named = lhs.operands[idx]
                    rest = lhs.operands[:idx] + lhs.operands[idx + 1:]
                    residue = rest[0] if len(rest) == 1 else And(rest)
                    lhs, rhs = named, Or((Not(residue), rhs))
                    continue
            if isinstance(lhs, Top):
                universals.append(nnf(rhs))
                return
            universals.append(nnf(Or((Not(lhs), rhs))))
            return

    for ax in onto.axioms:
        if isinstance(ax, SubClassOf):
            absorb(ax.sub, ax.sup)
        elif isinstance(ax, EquivalentClasses):
            ops = ax.operands
            if len(ops) == 2 and sum(isinstance(c, NamedClass) for c in ops) == 1:
                name = next(c for c in ops if isinstance(c, NamedClass))
                body = next(c for c in ops if not isinstance(c, NamedClass))
                candidates.append((name.iri, body))
            else:
                for a, b in itertools.permutations(ops, 2):
                    absorb(a, b)
        elif isinstance(ax, DisjointClasses):
            for a, b in itertools.combinations(ax.operands, 2):
                absorb(a, Not(b))
        elif isinstance(ax, ObjectPropertyDomain):
            absorb(Some(Role(ax.role), TOP), ax.domain)
        elif isinstance(ax, ObjectPropertyRange):
            absorb(Some(Role(ax.role, inverse=True), TOP), ax.range)
        elif isinstance(ax, DataPropertyRange):
            data_ranges.setdefault(ax.property, []).append(ax.range)
        elif isinstance(ax, SubObjectPropertyOf) and isinstance(ax.sub, RoleChain):
            chain_warning = True

    # A candidate A == C unfolds lazily only when that is complete: A defined
    # once, A carries no other absorbed inclusion, and definitions are acyclic.
    # Demoting a candidate adds inclusions that may invalidate others, so
    # iterate to a fixpoint.
    by_name: dict[Iri, list[ClassExpression]] = {}
    for name, body in candidates:
        by_name.setdefault(name, []).append(body)

    def acyclic(name: Iri, defs: dict[Iri, ClassExpression]) -> bool:
        seen: set[Iri] = set()
        frontier = list(_expr_names(defs[name]))
        while frontier:
            dep = frontier.pop()
            if dep == name:
                return False
            if dep in defs and dep not in seen:
                seen.add(dep)
                frontier.extend(_expr_names(defs[dep]))
        return True

    definitions: dict[Iri, ClassExpression] = {
        name: bodies[0] for name, bodies in by_name.items() if len(bodies) == 1
    }
    demoted: set[Iri] = set()
    for name in sorted(by_name, key=lambda i: i.value):
        if len(by_name[name]) > 1:
            demoted.add(name)
            for body in by_name[name]:
                absorb(NamedClass(name), body)
                absorb(body, NamedClass(name))
    while True:
        bad = sorted(
            (name for name in definitions
             if name in inclusions or not acyclic(name, definitions)),
            key=lambda i: i.value)
        if not bad:
            break
        for name in bad:
            del definitions[name]
            demoted.add(name)
            for body in by_name[name]:
                absorb(NamedClass(name), body)
                absorb(body, NamedClass(name))

    return CompiledTBox(
        definitions=definitions,
        inclusions={k: tuple(v) for k, v in inclusions.items()},
        universals=tuple(sorted(set(universals), key=canonical)),
        roles=RoleTable(onto),
        data_ranges={k: tuple(v) for k, v in data_ranges.items()},
        chain_warning=chain_warning,
    )


# ---------------------------------------------------------------------------
# Datatype (interval) satisfiability
# ---------------------------------------------------------------------------

_NEG_INF = float("-inf")
_POS_INF = float("inf")


def _scalar(value, datatype: str):
    import datetime

    if datatype == "date" and isinstance(value, datetime.date):
        return value.toordinal()
    return value


def _bounds(r: DataRange):
    lo, hi = r.parsed_bounds()
    lo = _scalar(lo, r.datatype) if lo is not None else _NEG_INF
    hi = _scalar(hi, r.datatype) if hi is not None else _POS_INF
    return lo, hi


def interval_minus_nonempty(datatype: str, pos, negs) -> bool:
    """Is the closed interval `pos` minus the union of closed intervals
    `negs` nonempty? Integer and date lines are discrete; decimal is dense;
    strings have no facets (a negated string restriction removes all)."""
    lo, hi = pos
    if lo > hi:
        return False
    if datatype == "string":
        return not negs
    discrete = datatype in ("integer", "date")
    clipped = []
    for nlo, nhi in negs:
        a, b = max(nlo, lo), min(nhi, hi)
        if a <= b:
            clipped.append((a, b))
    if not clipped:
        return True
    clipped.sort(key=lambda iv: (iv[0], iv[1]))
    merged = [clipped[0]]
    for a, b in clipped[1:]:
        ma, mb = merged[-1]
        joinable = a <= mb + 1 if (discrete and mb != _POS_INF) else a <= mb
        if joinable:
            merged[-1] = (ma, max(mb, b))
        else:
            merged.append((a, b))
    if len(merged) > 1:
        return True  # a gap between merged removals is inside [lo, hi]
    (ma, mb) = merged[0]
    return not (ma <= lo and mb >= hi)


def data_constraints_satisfiable(
    label, data_ranges: dict[Iri, tuple[DataRange, ...]]
) -> bool:
    by_prop: dict[Iri, list] = {}
    for c in label:
        if isinstance(c, DataSome):
            by_prop.setdefault(c.property, []).append(("pos", c.range))
        elif isinstance(c, Not) and isinstance(c.operand, DataSome):
            by_prop.setdefault(c.operand.property, []).append(("neg", c.operand.range))
    for prop, constraints in by_prop.items():
        positives = [r for kind, r in constraints if kind == "pos"]
        negatives = [r for kind, r in constraints if kind == "neg"]
        globals_ = data_ranges.get(prop, ())
        for pos in positives:
            dt = pos.datatype
            if any(g.datatype != dt for g in globals_):
                return False  # the value space itself is contradictory
            lo, hi = _bounds(pos)
            for g in globals_:
                glo, ghi = _bounds(g)
                lo, hi = max(lo, glo), min(hi, ghi)
            negs = [_bounds(n) for n in negatives if n.datatype == dt]
            if not interval_minus_nonempty(dt, (lo, hi), negs):
                return False
    return True


# ---------------------------------------------------------------------------
# Tableau nodes and state
# ---------------------------------------------------------------------------

@dataclass
class Node:
    id: int
    parent: int | None
    edge: frozenset[SRole]  # canonical roles on the edge parent -> this node
    label: set = field(default_factory=set)
    distinct: set[int] = field(default_factory=set)
    alive: bool = True


class State:
    def __init__(self) -> None:
        self.nodes: dict[int, Node] = {}
        self.next_id = 0

    def new_node(self, parent: int | None, edge: frozenset[SRole]) -> Node:
        node = Node(self.next_id, parent, edge)
        self.nodes[self.next_id] = node
        self.next_id += 1
        return node

    def copy(self) -> "State":
        st = State()
        st.next_id = self.next_id
        for nid, n in self.nodes.items():
            st.nodes[nid] = Node(n.id, n.parent, n.edge, set(n.label),
                                 set(n.distinct), n.alive)
        return st

    def live_nodes(self) -> list[Node]:
        return [n for n in sorted(self.nodes.values(), key=lambda n: n.id) if n.alive]

    def children(self, nid: int) -> list[Node]:
        return [n for n in self.live_nodes() if n.parent == nid]

    def prune(self, nid: int) -> None:
        node = self.nodes[nid]
        node.alive = False
        for child in list(self.nodes.values()):
            if child.alive and child.parent == nid:
                self.prune(child.id)


class Tableau:
    def __init__(self, tbox: CompiledTBox) -> None:
        self.tbox = tbox
        self.steps = 0

    def _tick(self) -> None:
        self.steps += 1
        if self.steps > MAX_STEPS:
            raise TableauLimitExceeded()

    def add(self, node: Node, concept: ClassExpression) -> bool:
        if concept in node.label:
            return False
        node.label.add(concept)
        return True

    def init_label(self, node: Node) -> None:
        for u in self.tbox.universals:
            node.label.add(u)

    # -- neighbours -----------------------------------------------------------

    def neighbours(self, st: State, node: Node, role: Role) -> list[Node]:
        target = self.tbox.roles.canon_role(role)
        out = []
        for child in st.children(node.id):
            if any(target in self.tbox.roles.supers(r) for r in child.edge):
                out.append(child)
        if node.parent is not None and st.nodes[node.parent].alive:
            inv_edges = {self.tbox.roles.canon(_flip(r)) for r in node.edge}
            if any(target in self.tbox.roles.supers(r) for r in inv_edges):
                out.append(st.nodes[node.parent])
        return out

    # -- pairwise blocking ------------------------------------------------------

    def _ancestors(self, st: State, node: Node) -> list[Node]:
        out = []
        cur = node
        while cur.parent is not None:
            cur = st.nodes[cur.parent]
            out.append(cur)
        return out

    def directly_blocked(self, st: State, node: Node) -> bool:
        if node.parent is None:
            return False
        parent = st.nodes[node.parent]
        for w in self._ancestors(st, node):
            if w.parent is None:
                continue
            wp = st.nodes[w.parent]
            if (w.label == node.label and wp.label == parent.label
                    and w.edge == node.edge and not self.blocked(st, w)):
                return True
        return False

    def blocked(self, st: State, node: Node) -> bool:
        cur = node
        while cur is not None:
            if self.directly_blocked(st, cur):
                return True
            cur = st.nodes[cur.parent] if cur.parent is not None else None
        return False

    def indirectly_blocked(self, st: State, node: Node) -> bool:
        cur = node
        while cur.parent is not None:
            cur = st.nodes[cur.parent]
            if self.directly_blocked(st, cur):
                return True
        return False

    # -- clash detection ----------------------------------------------------------

    def has_clash(self, st: State) -> bool:
        for node in st.live_nodes():
            label = node.label
            for c in label:
                if isinstance(c, Bottom):
                    return True
                if isinstance(c, Not) and isinstance(c.operand, NamedClass):
                    if c.operand in label:
                        return True
            if not data_constraints_satisfiable(label, self.tbox.data_ranges):
                return True
            for c in label:
                if isinstance(c, AtMost):
                    filled = [y for y in self.neighbours(st, node, c.role)
                              if c.filler == TOP or c.filler in y.label]
                    if len(filled) > c.n:
                        for combo in itertools.combinations(filled, c.n + 1):
                            if all(b.id in a.distinct
                                   for a, b in itertools.combinations(combo, 2)):
                                return True
        return False

    # -- deterministic rules --------------------------------------------------

    def apply_deterministic(self, st: State) -> bool:
        defs = self.tbox.definitions
        incl = self.tbox.inclusions
        for node in st.live_nodes():
            if self.indirectly_blocked(st, node):
                continue
            for c in sorted(node.label, key=canonical):
                self._tick()
                if isinstance(c, And):
                    if any(self.add(node, op) for op in list(c.operands)):
                        return True
                elif isinstance(c, NamedClass):
                    if c.iri in defs and self.add(node, nnf(defs[c.iri])):
                        return True
                    if c.iri in incl:
                        if any(self.add(node, rhs) for rhs in incl[c.iri]):
                            return True
                elif isinstance(c, Not) and isinstance(c.operand, NamedClass):
                    name = c.operand.iri
                    if name in defs and self.add(node, nnf(Not(defs[name]))):
                        return True
                elif isinstance(c, Only):
                    changed = False
                    for y in self.neighbours(st, node, c.role):
                        changed |= self.add(y, c.filler)
                    if changed:
                        return True
        return False

    # -- branch finders ---------------------------------------------------------

    def find_disjunction(self, st: State):
        for node in st.live_nodes():
            if self.indirectly_blocked(st, node):
                continue
            for c in sorted(node.label, key=canonical):
                if isinstance(c, Or) and not any(op in node.label for op in c.operands):
                    return node, c
        return None

    def find_choose(self, st: State):
        for node in st.live_nodes():
            if self.indirectly_blocked(st, node):
                continue
            for c in sorted(node.label, key=canonical):
                if isinstance(c, AtMost) and c.filler != TOP:
                    neg = nnf(Not(c.filler))
                    for y in self.neighbours(st, node, c.role):
                        if c.filler not in y.label and neg not in y.label:
                            return y, c.filler, neg
        return None

    def find_merge(self, st: State):
        for node in st.live_nodes():
            if self.indirectly_blocked(st, node):
                continue
            for c in sorted(node.label, key=canonical):
                if isinstance(c, AtMost):
                    filled = [y for y in self.neighbours(st, node, c.role)
                              if c.filler == TOP or c.filler in y.label]
                    if len(filled) > c.n:
                        pairs = [(a, b) for a, b in itertools.combinations(filled, 2)
                                 if b.id not in a.distinct]
                        if pairs:
                            return node, pairs
        return None

    def find_generator(self, st: State):
        for node in st.live_nodes():
            if self.blocked(st, node):
                continue
            for c in sorted(node.label, key=canonical):
                if isinstance(c, Some):
                    if not any(c.filler in y.label
                               for y in self.neighbours(st, node, c.role)):
                        return node, "some", c
                elif isinstance(c, AtLeast) and c.n >= 1:
                    filled = [y for y in self.neighbours(st, node, c.role)
                              if c.filler in y.label]
                    if not self._has_distinct_clique(filled, c.n):
                        return node, "atleast", c
        return None

    @staticmethod
    def _has_distinct_clique(nodes: list[Node], n: int) -> bool:
        if len(nodes) < n:
            return False
        for combo in itertools.combinations(nodes, n):
            if all(b.id in a.distinct for a, b in itertools.combinations(combo, 2)):
                return True
        return False

    # -- merging -----------------------------------------------------------------

    def merge(self, st: State, source: Node, target: Node, via: Node) -> None:
        """Merge `source` (always a child of `via`) into `target` (a sibling
        child or via's parent)."""
        target.label |= source.label
        for other_id in source.distinct:
            target.distinct.add(other_id)
            if other_id in st.nodes:
                st.nodes[other_id].distinct.discard(source.id)
                st.nodes[other_id].distinct.add(target.id)
        if target.parent == via.id:
            target.edge = target.edge | source.edge
        else:
            # child merged into via's parent: the edge survives inverted on via
            inv = frozenset(self.tbox.roles.canon(_flip(r)) for r in source.edge)
            via.edge = via.edge | inv
        st.prune(source.id)

    # -- main expansion --------------------------------------------------------

    def expand(self, st: State) -> bool:
        while True:
            self._tick()
            if self.has_clash(st):
                return False
            if self.apply_deterministic(st):
                continue
            disj = self.find_disjunction(st)
            if disj is not None:
                node, c = disj
                for op in c.operands:
                    branch = st.copy()
                    branch.nodes[node.id].label.add(op)
                    if self.expand(branch):
                        return True
                return False
            choice = self.find_choose(st)
            if choice is not None:
                y, filler, neg = choice
                for concept in (filler, neg):
                    branch = st.copy()
                    branch.nodes[y.id].label.add(concept)
                    if self.expand(branch):
                        return True
                return False
            merge_candidates = self.find_merge(st)
            if merge_candidates is not None:
                via, pairs = merge_candidates
                for a, b in pairs:
                    branch = st.copy()
                    ba, bb = branch.nodes[a.id], branch.nodes[b.id]
                    bvia = branch.nodes[via.id]
                    source, target = (ba, bb) if ba.id > bb.id else (bb, ba)
                    if source.parent != bvia.id:
                        source, target = target, source
                    self.merge(branch, source, target, bvia)
                    if self.expand(branch):
                        return True
                return False
            gen = self.find_generator(st)
            if gen is not None:
                node, kind, c = gen
                edge = frozenset({self.tbox.roles.canon_role(c.role)})
                if kind == "some":
                    child = st.new_node(node.id, edge)
                    self.init_label(child)
                    child.label.add(c.filler)
                else:
                    fresh = []
                    for _ in range(c.n):
                        child = st.new_node(node.id, edge)
                        self.init_label(child)
                        child.label.add(c.filler)
                        fresh.append(child)
                    for a, b in itertools.combinations(fresh, 2):
                        a.distinct.add(b.id)
                        b.distinct.add(a.id)
                continue
            return True


# ---------------------------------------------------------------------------
# Public interface
# ---------------------------------------------------------------------------

class Reasoner:
    """Compiles the TBox once and caches satisfiability verdicts; use this
    for classification and repeated subsumption queries."""

    def __init__(self, onto: Ontology) -> None:
        self.onto = onto
        self.tbox = compile_tbox(onto)
        self._cache: dict[str, bool] = {}

    @property
    def chain_warning(self) -> bool:
        return self.tbox.chain_warning

    def is_satisfiable(self, expr: ClassExpression) -> bool:
        key = canonical(expr)
        if key in self._cache:
            return self._cache[key]
        tableau = Tableau(self.tbox)
        st = State()
        root = st.new_node(None, frozenset())
        tableau.init_label(root)
        root.label.add(nnf(expr))
        verdict = tableau.expand(st)
        self._cache[key] = verdict
        return verdict

    def is_subsumed(self, sub: ClassExpression, sup: ClassExpression) -> bool:
        return not self.is_satisfiable(And((sub, nnf(Not(sup)))))


def is_satisfiable(expr: ClassExpression, onto: Ontology) -> bool:
    return Reasoner(onto).is_satisfiable(expr)


def is_subsumed(sub: ClassExpression, sup: ClassExpression, onto: Ontology) -> bool:
    return Reasoner(onto).is_subsumed(sub, sup)
