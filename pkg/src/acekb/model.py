"""Logical vocabulary of the knowledge base: IRIs, class expressions, axioms,
and ontologies for an ALC + inverse roles + qualified counting + datatype
fragment, with property chains allowed on the sub side of role inclusions.

All types are immutable after construction and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union


class ModelError(Exception):
    pass


class UnknownPrefix(ModelError):
    def __init__(self, prefix: str) -> None:
        super().__init__(f"unknown prefix: {prefix!r}")
        self.prefix = prefix


class MalformedCurie(ModelError):
    def __init__(self, curie: str) -> None:
        super().__init__(f"malformed curie: {curie!r}")
        self.curie = curie


@dataclass(frozen=True, order=True)
class Iri:
    """An absolute IRI. Opaque: equality is exact string equality."""

    value: str

    def __post_init__(self) -> None:
        if not self.value or ":" not in self.value:
            raise ModelError(f"not an absolute IRI: {self.value!r}")

    def local_name(self) -> str:
        """Fragment after the last '#', '/' or ':' (used for display labels)."""
        for sep in ("#", "/", ":"):
            if sep in self.value:
                return self.value.rsplit(sep, 1)[1]
        return self.value

    def __str__(self) -> str:
        return self.value


def expand_curie(prefixes: Mapping[str, str], curie: str) -> Iri:
    """Expand `prefix:local` against a prefix table. The local part may be
    empty (`ex:` names the namespace IRI itself)."""
    if ":" not in curie:
        raise MalformedCurie(curie)
    prefix, local = curie.split(":", 1)
    if prefix not in prefixes:
        raise UnknownPrefix(prefix)
    return Iri(prefixes[prefix] + local)


# ---------------------------------------------------------------------------
# Roles and data ranges
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Role:
    """A named role, possibly inverted. Double inversion is unrepresentable:
    `flipped` toggles the flag, so inverse-of-inverse collapses to the name."""

    iri: Iri
    inverse: bool = False

    def flipped(self) -> "Role":
        return Role(self.iri, not self.inverse)


DATATYPES = ("integer", "decimal", "date", "string")


@dataclass(frozen=True)
class DataRange:
    """A base datatype with optional inclusive bounds. Bounds are kept in
    lexical form and must parse in the base datatype; string admits no facets."""

    datatype: str
    min_inclusive: str | None = None
    max_inclusive: str | None = None

    def __post_init__(self) -> None:
        if self.datatype not in DATATYPES:
            raise ModelError(f"unknown datatype: {self.datatype!r}")
        if self.datatype == "string" and (self.min_inclusive or self.max_inclusive):
            raise ModelError("string range admits no facets")
        lo, hi = self.parsed_bounds()
        if lo is not None and hi is not None and lo > hi:
            raise ModelError(f"empty facet interval: {self.min_inclusive} > {self.max_inclusive}")

    def parsed_bounds(self):
        from .store import parse_literal_value  # late import; store depends on model

        lo = parse_literal_value(self.min_inclusive, self.datatype) if self.min_inclusive else None
        hi = parse_literal_value(self.max_inclusive, self.datatype) if self.max_inclusive else None
        return lo, hi

    def contains(self, value) -> bool:
        lo, hi = self.parsed_bounds()
        if lo is not None and value < lo:
            return False
        if hi is not None and value > hi:
            return False
        return True


# ---------------------------------------------------------------------------
# Class expressions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NamedClass:
    iri: Iri


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Not:
    operand: "ClassExpression"


@dataclass(frozen=True)
class And:
    operands: tuple["ClassExpression", ...]

    def __post_init__(self) -> None:
        if len(self.operands) < 2:
            raise ModelError("And needs at least 2 operands")


@dataclass(frozen=True)
class Or:
    operands: tuple["ClassExpression", ...]

    def __post_init__(self) -> None:
        if len(self.operands) < 2:
            raise ModelError("Or needs at least 2 operands")


@dataclass(frozen=True)
class Some:
    role: Role
    filler: "ClassExpression"


@dataclass(frozen=True)
class Only:
    role: Role
    filler: "ClassExpression"


@dataclass(frozen=True)
class AtLeast:
    n: int
    role: Role
    filler: "ClassExpression"

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ModelError("cardinality must be >= 0")


@dataclass(frozen=True)
class AtMost:
    n: int
    role: Role
    filler: "ClassExpression"

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ModelError("cardinality must be >= 0")


@dataclass(frozen=True)
class DataSome:
    property: Iri
    range: DataRange


ClassExpression = Union[
    NamedClass, Top, Bottom, Not, And, Or, Some, Only, AtLeast, AtMost, DataSome
]

TOP = Top()
BOTTOM = Bottom()


def nnf(expr: ClassExpression) -> ClassExpression:
    """Negation normal form: negation only directly above class names (or a
    data restriction, which has no dual in this fragment). `AtLeast 0` is the
    universal class and normalizes to Top."""
    if isinstance(expr, (NamedClass, Top, Bottom)):
        return expr
    if isinstance(expr, And):
        return And(tuple(nnf(c) for c in expr.operands))
    if isinstance(expr, Or):
        return Or(tuple(nnf(c) for c in expr.operands))
    if isinstance(expr, Some):
        return Some(expr.role, nnf(expr.filler))
    if isinstance(expr, Only):
        return Only(expr.role, nnf(expr.filler))
    if isinstance(expr, AtLeast):
        if expr.n == 0:
            return TOP
        return AtLeast(expr.n, expr.role, nnf(expr.filler))
    if isinstance(expr, AtMost):
        return AtMost(expr.n, expr.role, nnf(expr.filler))
    if isinstance(expr, DataSome):
        return expr
    if isinstance(expr, Not):
        inner = expr.operand
        if isinstance(inner, NamedClass):
            return expr
        if isinstance(inner, Top):
            return BOTTOM
        if isinstance(inner, Bottom):
            return TOP
        if isinstance(inner, Not):
            return nnf(inner.operand)
        if isinstance(inner, And):
            return Or(tuple(nnf(Not(c)) for c in inner.operands))
        if isinstance(inner, Or):
            return And(tuple(nnf(Not(c)) for c in inner.operands))
        if isinstance(inner, Some):
            return Only(inner.role, nnf(Not(inner.filler)))
        if isinstance(inner, Only):
            return Some(inner.role, nnf(Not(inner.filler)))
        if isinstance(inner, AtLeast):
            if inner.n == 0:
                return BOTTOM
            return AtMost(inner.n - 1, inner.role, nnf(inner.filler))
        if isinstance(inner, AtMost):
            return AtLeast(inner.n + 1, inner.role, nnf(inner.filler))
        if isinstance(inner, DataSome):
            return expr  # no dual data quantifier; kept as a negated leaf
    raise ModelError(f"not a class expression: {expr!r}")


# ---------------------------------------------------------------------------
# Axioms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RoleChain:
    roles: tuple[Role, ...]

    def __post_init__(self) -> None:
        if len(self.roles) < 2:
            raise ModelError("role chain needs at least 2 roles")


@dataclass(frozen=True)
class SubClassOf:
    sub: ClassExpression
    sup: ClassExpression


@dataclass(frozen=True)
class EquivalentClasses:
    operands: tuple[ClassExpression, ...]

    def __post_init__(self) -> None:
        if len(self.operands) < 2:
            raise ModelError("EquivalentClasses needs at least 2 operands")


@dataclass(frozen=True)
class DisjointClasses:
    operands: tuple[NamedClass, ...]

    def __post_init__(self) -> None:
        if len(self.operands) < 2:
            raise ModelError("DisjointClasses needs at least 2 operands")


@dataclass(frozen=True)
class SubObjectPropertyOf:
    # Chains appear only on the sub side: only `chain ⊑ role` is expressible.
    sub: Role | RoleChain
    sup: Iri


@dataclass(frozen=True)
class InverseObjectProperties:
    first: Iri
    second: Iri


@dataclass(frozen=True)
class ObjectPropertyDomain:
    role: Iri
    domain: ClassExpression


@dataclass(frozen=True)
class ObjectPropertyRange:
    role: Iri
    range: ClassExpression


@dataclass(frozen=True)
class DataPropertyRange:
    property: Iri
    range: DataRange


DECLARATION_KINDS = ("class", "object_property", "data_property", "individual")


@dataclass(frozen=True)
class Declaration:
    kind: str
    iri: Iri

    def __post_init__(self) -> None:
        if self.kind not in DECLARATION_KINDS:
            raise ModelError(f"unknown declaration kind: {self.kind!r}")


@dataclass(frozen=True)
class ClassAssertion:
    cls: ClassExpression
    individual: Iri


@dataclass(frozen=True)
class ObjectPropertyAssertion:
    role: Iri
    subject: Iri
    object: Iri


@dataclass(frozen=True)
class DataPropertyAssertion:
    property: Iri
    subject: Iri
    value: str
    datatype: str = "string"


Axiom = Union[
    SubClassOf, EquivalentClasses, DisjointClasses, SubObjectPropertyOf,
    InverseObjectProperties, ObjectPropertyDomain, ObjectPropertyRange,
    DataPropertyRange, Declaration, ClassAssertion, ObjectPropertyAssertion,
    DataPropertyAssertion,
]


def canonical(node) -> str:
    """Stable s-expression rendering of expressions, roles, and axioms.
    Used for deterministic ordering, axiom identifiers, and skolem hashing."""
    if isinstance(node, Iri):
        return f"<{node.value}>"
    if isinstance(node, Role):
        return f"(inv {canonical(node.iri)})" if node.inverse else canonical(node.iri)
    if isinstance(node, RoleChain):
        return "(chain " + " ".join(canonical(r) for r in node.roles) + ")"
    if isinstance(node, DataRange):
        parts = [node.datatype]
        if node.min_inclusive is not None:
            parts.append(f">={node.min_inclusive}")
        if node.max_inclusive is not None:
            parts.append(f"<={node.max_inclusive}")
        return "(range " + " ".join(parts) + ")"
    if isinstance(node, NamedClass):
        return canonical(node.iri)
    if isinstance(node, Top):
        return "Top"
    if isinstance(node, Bottom):
        return "Bottom"
    if isinstance(node, Not):
        return f"(not {canonical(node.operand)})"
    if isinstance(node, And):
        return "(and " + " ".join(canonical(c) for c in node.operands) + ")"
    if isinstance(node, Or):
        return "(or " + " ".join(canonical(c) for c in node.operands) + ")"
    if isinstance(node, Some):
        return f"(some {canonical(node.role)} {canonical(node.filler)})"
    if isinstance(node, Only):
        return f"(only {canonical(node.role)} {canonical(node.filler)})"
    if isinstance(node, AtLeast):
        return f"(atleast {node.n} {canonical(node.role)} {canonical(node.filler)})"
    if isinstance(node, AtMost):
        return f"(atmost {node.n} {canonical(node.role)} {canonical(node.filler)})"
    if isinstance(node, DataSome):
        return f"(datasome {canonical(node.property)} {canonical(node.range)})"
    if isinstance(node, SubClassOf):
        return f"(subclass {canonical(node.sub)} {canonical(node.sup)})"
    if isinstance(node, EquivalentClasses):
        return "(equiv " + " ".join(canonical(c) for c in node.operands) + ")"
    if isinstance(node, DisjointClasses):
        return "(disjoint " + " ".join(canonical(c) for c in node.operands) + ")"
    if isinstance(node, SubObjectPropertyOf):
        return f"(subrole {canonical(node.sub)} {canonical(node.sup)})"
    if isinstance(node, InverseObjectProperties):
        return f"(inverseprops {canonical(node.first)} {canonical(node.second)})"
    if isinstance(node, ObjectPropertyDomain):
        return f"(domain {canonical(node.role)} {canonical(node.domain)})"
    if isinstance(node, ObjectPropertyRange):
        return f"(roleRange {canonical(node.role)} {canonical(node.range)})"
    if isinstance(node, DataPropertyRange):
        return f"(dataRange {canonical(node.property)} {canonical(node.range)})"
    if isinstance(node, Declaration):
        return f"(decl {node.kind} {canonical(node.iri)})"
    if isinstance(node, ClassAssertion):
        return f"(type {canonical(node.cls)} {canonical(node.individual)})"
    if isinstance(node, ObjectPropertyAssertion):
        return f"(edge {canonical(node.role)} {canonical(node.subject)} {canonical(node.object)})"
    if isinstance(node, DataPropertyAssertion):
        return f"(data {canonical(node.property)} {canonical(node.subject)} {node.value!r}^^{node.datatype})"
    raise ModelError(f"cannot canonicalize: {node!r}")


def signature(axiom: Axiom) -> tuple[set[Iri], set[Iri], set[Iri], set[Iri]]:
    """Named symbols occurring in an axiom, partitioned as
    (classes, roles, data properties, individuals)."""
    classes: set[Iri] = set()
    roles: set[Iri] = set()
    data_props: set[Iri] = set()
    individuals: set[Iri] = set()

    def walk_expr(e: ClassExpression) -> None:
        if isinstance(e, NamedClass):
            classes.add(e.iri)
        elif isinstance(e, Not):
            walk_expr(e.operand)
        elif isinstance(e, (And, Or)):
            for c in e.operands:
                walk_expr(c)
        elif isinstance(e, (Some, Only, AtLeast, AtMost)):
            roles.add(e.role.iri)
            walk_expr(e.filler)
        elif isinstance(e, DataSome):
            data_props.add(e.property)

    if isinstance(axiom, SubClassOf):
        walk_expr(axiom.sub)
        walk_expr(axiom.sup)
    elif isinstance(axiom, (EquivalentClasses, DisjointClasses)):
        for c in axiom.operands:
            walk_expr(c)
    elif isinstance(axiom, SubObjectPropertyOf):
        if isinstance(axiom.sub, RoleChain):
            roles.update(r.iri for r in axiom.sub.roles)
        else:
            roles.add(axiom.sub.iri)
        roles.add(axiom.sup)
    elif isinstance(axiom, InverseObjectProperties):
        roles.add(axiom.first)
        roles.add(axiom.second)
    elif isinstance(axiom, ObjectPropertyDomain):
        roles.add(axiom.role)
        walk_expr(axiom.domain)
    elif isinstance(axiom, ObjectPropertyRange):
        roles.add(axiom.role)
        walk_expr(axiom.range)
    elif isinstance(axiom, DataPropertyRange):
        data_props.add(axiom.property)
    elif isinstance(axiom, Declaration):
        bucket = {
            "class": classes,
            "object_property": roles,
            "data_property": data_props,
            "individual": individuals,
        }[axiom.kind]
        bucket.add(axiom.iri)
    elif isinstance(axiom, ClassAssertion):
        walk_expr(axiom.cls)
        individuals.add(axiom.individual)
    elif isinstance(axiom, ObjectPropertyAssertion):
        roles.add(axiom.role)
        individuals.add(axiom.subject)
        individuals.add(axiom.object)
    elif isinstance(axiom, DataPropertyAssertion):
        data_props.add(axiom.property)
        individuals.add(axiom.subject)
    else:
        raise ModelError(f"not an axiom: {axiom!r}")
    return classes, roles, data_props, individuals


# ---------------------------------------------------------------------------
# Ontology container
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LoadReport:
    """Symbols that were used without declaration and auto-declared on load."""

    classes: tuple[Iri, ...] = ()
    object_properties: tuple[Iri, ...] = ()
    data_properties: tuple[Iri, ...] = ()
    individuals: tuple[Iri, ...] = ()

    def is_empty(self) -> bool:
        return not (self.classes or self.object_properties
                    or self.data_properties or self.individuals)


@dataclass(frozen=True)
class Ontology:
    """Axioms in source order plus declared-symbol tables. `definitions` is a
    side map of textual definitions (annotation-style, outside the logic)."""

    prefixes: Mapping[str, str] = field(default_factory=dict)
    axioms: tuple[Axiom, ...] = ()
    classes: frozenset[Iri] = frozenset()
    object_properties: frozenset[Iri] = frozenset()
    data_properties: frozenset[Iri] = frozenset()
    individuals: frozenset[Iri] = frozenset()
    definitions: Mapping[Iri, str] = field(default_factory=dict)
    load_report: LoadReport = field(default_factory=LoadReport)

    def axiom_id(self, axiom: Axiom) -> str:
        import hashlib

        return "ax-" + hashlib.sha256(canonical(axiom).encode()).hexdigest()[:12]


def build_ontology(
    prefixes: Mapping[str, str],
    axioms: Iterable[Axiom],
    definitions: Mapping[Iri, str] | None = None,
) -> Ontology:
    """Assemble an ontology from axioms, auto-declaring any symbol that is
    used but not covered by a Declaration, and reporting the auto-declared
    ones. Axiom order is preserved."""
    axioms = tuple(axioms)
    declared: dict[str, set[Iri]] = {k: set() for k in DECLARATION_KINDS}
    for ax in axioms:
        if isinstance(ax, Declaration):
            declared[ax.kind].add(ax.iri)

    used_classes: set[Iri] = set()
    used_roles: set[Iri] = set()
    used_data: set[Iri] = set()
    used_inds: set[Iri] = set()
    for ax in axioms:
        if isinstance(ax, Declaration):
            continue
        c, r, d, i = signature(ax)
        used_classes |= c
        used_roles |= r
        used_data |= d
        used_inds |= i

    auto_classes = sorted(used_classes - declared["class"])
    auto_roles = sorted(used_roles - declared["object_property"])
    auto_data = sorted(used_data - declared["data_property"])
    auto_inds = sorted(used_inds - declared["individual"])
    report = LoadReport(
        tuple(auto_classes), tuple(auto_roles), tuple(auto_data), tuple(auto_inds)
    )
    return Ontology(
        prefixes=dict(prefixes),
        axioms=axioms,
        classes=frozenset(declared["class"] | used_classes),
        object_properties=frozenset(declared["object_property"] | used_roles),
        data_properties=frozenset(declared["data_property"] | used_data),
        individuals=frozenset(declared["individual"] | used_inds),
        definitions=dict(definitions or {}),
        load_report=report,
    )


def merge_ontologies(first: Ontology, second: Ontology) -> Ontology:
    """Concatenate two ontologies (second's axioms after first's). Prefixes
    from the second win on collision."""
    prefixes = dict(first.prefixes)
    prefixes.update(second.prefixes)
    definitions = dict(first.definitions)
    definitions.update(second.definitions)
    return build_ontology(prefixes, first.axioms + second.axioms, definitions)
