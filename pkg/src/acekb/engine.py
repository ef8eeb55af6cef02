"""Assembly of the knowledge base: ontology, shared fact graph, rule sets,
question catalog, reasoner caches, and the function registry. One Engine
instance backs both the CLI and the HTTP service."""

from __future__ import annotations

import threading
from functools import cached_property
from pathlib import Path

from .catalog import QuestionCatalog, load_catalog
from .config import EngineConfig
from .model import (
    ClassAssertion, DataPropertyAssertion, Iri, NamedClass,
    ObjectPropertyAssertion, Ontology, build_ontology,
)
from .query import FunctionRegistry, ResultTable, default_registry, evaluate
from .reasoning import (
    AceScore, ConsistencyReport, Limits, MaterializationDelta, OntologyMetrics,
    Reasoner, Taxonomy, ace_score, check_consistency, classify, materialize,
    metrics, realize,
)
from .rule_engine import FiringReport, RuleSet, run_rules
from .store import Graph, Literal, Resource, Triple, TriplePattern, Var
from .syntax import parse_ontology, parse_query, parse_rules, parse_turtle
from .vocab import HAS_ADDRESS_KEY


class RWLock:
    """Writer-preferring readers-writer lock for the shared graph."""

    def __init__(self) -> None:
        self._cond = threading.Condition()
        self._readers = 0
        self._writer = False

    class _Guard:
        def __init__(self, acquire, release):
            self._acquire, self._release = acquire, release

        def __enter__(self):
            self._acquire()

        def __exit__(self, *exc):
            self._release()
            return False

    def read(self) -> "_Guard":
        def acquire():
            with self._cond:
                while self._writer:
                    self._cond.wait()
                self._readers += 1

        def release():
            with self._cond:
                self._readers -= 1
                self._cond.notify_all()

        return self._Guard(acquire, release)

    def write(self) -> "_Guard":
        def acquire():
            with self._cond:
                while self._writer or self._readers:
                    self._cond.wait()
                self._writer = True

        def release():
            with self._cond:
                self._writer = False
                self._cond.notify_all()

        return self._Guard(acquire, release)


def assertion_triples(onto: Ontology) -> list[Triple]:
    """ABox axioms of the ontology as graph triples (named classes only;
    complex assertions stay axioms and are checked by consistency)."""
    from .store import RDF_TYPE

    out: list[Triple] = []
    for ax in onto.axioms:
        if isinstance(ax, ClassAssertion) and isinstance(ax.cls, NamedClass):
            out.append(Triple(Resource(ax.individual), Resource(RDF_TYPE),
                              Resource(ax.cls.iri)))
        elif isinstance(ax, ObjectPropertyAssertion):
            out.append(Triple(Resource(ax.subject), Resource(ax.role),
                              Resource(ax.object)))
        elif isinstance(ax, DataPropertyAssertion):
            out.append(Triple(Resource(ax.subject), Resource(ax.property),
                              Literal(ax.value, ax.datatype)))
    return out


class Engine:
    def __init__(
        self,
        config: EngineConfig,
        ontology: Ontology,
        graph: Graph,
        rules: RuleSet = RuleSet(()),
        catalog: QuestionCatalog | None = None,
        registry: FunctionRegistry | None = None,
    ) -> None:
        self.config = config
        self.ontology = ontology
        self.graph = graph
        self.rules = rules
        self.catalog = catalog or QuestionCatalog({})
        self.registry = registry if registry is not None else default_registry()
        self.lock = RWLock()
        self.prefixes: dict[str, str] = dict(ontology.prefixes)
        self.prefixes.update(config.prefixes)

    @classmethod
    def from_config(cls, config: EngineConfig) -> "Engine":
        config.validate_paths()
        if config.ontology_path is not None:
            ontology = parse_ontology(Path(config.ontology_path).read_text())
        else:
            ontology = build_ontology({"ex": config.prefixes.get("ex", "")}, [])
        graph = Graph(assertion_triples(ontology))
        for data_path in config.data_paths:
            triples, _ = parse_turtle(Path(data_path).read_text(), config.prefixes)
            graph.insert_all(triples)
        rule_list = []
        seen_names: set[str] = set()
        for rule_path in config.rule_paths:
            ruleset = parse_rules(Path(rule_path).read_text(), config.prefixes)
            for rule in ruleset:
                if rule.name in seen_names:
                    from .syntax.errors import DuplicateRuleName

                    raise DuplicateRuleName(rule.name)
                seen_names.add(rule.name)
                rule_list.append(rule)
        catalog = None
        if config.question_catalog_path is not None:
            catalog = load_catalog(config.question_catalog_path, config.prefixes)
        return cls(config, ontology, graph, RuleSet(tuple(rule_list)), catalog)

    # -- reasoning services ---------------------------------------------------

    @property
    def limits(self) -> Limits:
        return Limits(self.config.max_rounds, self.config.skolem_depth)

    @cached_property
    def reasoner(self) -> Reasoner:
        return Reasoner(self.ontology)

    @cached_property
    def taxonomy(self) -> Taxonomy:
        return classify(self.ontology, self.reasoner)

    def apply_materialization(self) -> MaterializationDelta:
        delta = materialize(self.ontology, self.graph, self.limits)
        self.graph.insert_all(delta.added)
        return delta

    def check(self, extra_graph: Graph | None = None) -> ConsistencyReport:
        g = self.graph if extra_graph is None else self.merged_view(extra_graph)
        return check_consistency(self.ontology, g, self.limits)

    def run_query(self, text: str, graph: Graph | None = None) -> ResultTable | bool:
        query = parse_query(text, self.prefixes)
        return evaluate(query, graph if graph is not None else self.graph, self.registry)

    def run_rules(self, ruleset: RuleSet | None = None,
                  graph: Graph | None = None) -> FiringReport:
        return run_rules(
            ruleset if ruleset is not None else self.rules,
            graph if graph is not None else self.graph,
            self.ontology, self.limits, self.registry)

    def score(self, person: Iri, graph: Graph | None = None) -> AceScore:
        return ace_score(
            graph if graph is not None else self.graph,
            person, self.config.categories,
            taxonomy=self.taxonomy,
            declared_classes=frozenset(self.ontology.classes))

    def metrics(self) -> OntologyMetrics:
        return metrics(self.ontology)

    def realize(self, person: Iri, graph: Graph | None = None) -> set[Iri]:
        return realize(self.ontology,
                       graph if graph is not None else self.graph,
                       person, self.taxonomy)

    # -- session support --------------------------------------------------------

    def merged_view(self, session_graph: Graph) -> Graph:
        merged = self.graph.copy()
        merged.insert_all(session_graph)
        return merged

    def area_index(self) -> dict[str, str]:
        """Address-key prefix -> area id, read from the shared graph. Area
        individuals are named `area_<id>`; the id is what the index carries."""
        index: dict[str, str] = {}
        for b in self.graph.match_pattern(
            TriplePattern(Var("area"), Resource(HAS_ADDRESS_KEY), Var("key"))
        ):
            area, key = b.get("area"), b.get("key")
            if isinstance(area, Resource) and isinstance(key, Literal):
                local = area.iri.local_name()
                index[key.lexical] = local[len("area_"):] if local.startswith("area_") else local
        return index

    def label(self, iri: Iri, graph: Graph | None = None) -> str:
        from .vocab import HAS_NAME

        g = graph if graph is not None else self.graph
        for b in g.match_pattern(
            TriplePattern(Resource(iri), Resource(HAS_NAME), Var("n"))
        ):
            name = b.get("n")
            if isinstance(name, Literal):
                return name.lexical
        return iri.local_name()
