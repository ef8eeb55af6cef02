"""Summary statistics over the told (asserted) class hierarchy: the counts
a repository landing page would show. All counts use told SubClassOf edges
between named classes, never the inferred taxonomy."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from ..model import Iri, NamedClass, Ontology, SubClassOf


@dataclass(frozen=True)
class OntologyMetrics:
    class_count: int
    object_property_count: int
    data_property_count: int
    max_depth: int
    max_children: int
    avg_children: int  # over classes with at least one child, rounded half-up
    single_child_class_count: int
    over_25_children_count: int
    no_definition_count: int

    def as_rows(self) -> list[tuple[str, int]]:
        return [
            ("Classes", self.class_count),
            ("Object properties", self.object_property_count),
            ("Data properties", self.data_property_count),
            ("Maximum depth", self.max_depth),
            ("Maximum number of children", self.max_children),
            ("Average number of children", self.avg_children),
            ("Classes with a single child", self.single_child_class_count),
            ("Classes with more than 25 children", self.over_25_children_count),
            ("Classes with no definition", self.no_definition_count),
        ]


def metrics(onto: Ontology) -> OntologyMetrics:
    children: dict[Iri, set[Iri]] = {}
    parents: dict[Iri, set[Iri]] = {}
    for ax in onto.axioms:
        if (isinstance(ax, SubClassOf) and isinstance(ax.sub, NamedClass)
                and isinstance(ax.sup, NamedClass) and ax.sub.iri != ax.sup.iri):
            children.setdefault(ax.sup.iri, set()).add(ax.sub.iri)
            parents.setdefault(ax.sub.iri, set()).add(ax.sup.iri)

    # longest told path, counted in edges; cycles (if any) are not followed
    depth_memo: dict[Iri, int] = {}

    def depth_below(cls: Iri, stack: frozenset[Iri]) -> int:
        if cls in depth_memo:
            return depth_memo[cls]
        best = 0
        for child in children.get(cls, ()):
            if child in stack:
                continue
            best = max(best, 1 + depth_below(child, stack | {cls}))
        depth_memo[cls] = best
        return best

    roots = [c for c in sorted(onto.classes, key=lambda i: i.value) if c not in parents]
    max_depth = max((depth_below(r, frozenset()) for r in roots), default=0)

    child_counts = [len(v) for v in children.values()]
    with_children = [c for c in child_counts if c >= 1]
    if with_children:
        avg = int(
            (Decimal(sum(with_children)) / Decimal(len(with_children)))
            .quantize(Decimal("1"), rounding=ROUND_HALF_UP)
        )
    else:
        avg = 0

    return OntologyMetrics(
        class_count=len(onto.classes),
        object_property_count=len(onto.object_properties),
        data_property_count=len(onto.data_properties),
        max_depth=max_depth,
        max_children=max(child_counts, default=0),
        avg_children=avg,
        single_child_class_count=sum(1 for c in child_counts if c == 1),
        over_25_children_count=sum(1 for c in child_counts if c > 25),
        no_definition_count=sum(1 for c in onto.classes if c not in onto.definitions),
    )
