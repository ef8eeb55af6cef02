"""Forward-chaining rules over the fact graph, interleaved with ontology
materialization each round so rules fire on inferred facts and vice versa.
ASSERT actions add triples (NEW variables mint deterministic skolems);
RECOMMEND actions emit deduplicated recommendations that never re-enter
the graph. Every asserted triple carries provenance for `explain`.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Union

from .model import Iri, Ontology, canonical
from .query import FilterExpr, FunctionRegistry, default_registry, eval_filter, FilterTypeError
from .reasoning.materialize import Limits, materialize
from .reasoning.skolem import skolem_iri
from .store import (
    Binding, Graph, Literal, Resource, Term, Triple, TriplePattern, Var,
)


class RuleError(Exception):
    pass


class UnknownItem(RuleError):
    pass


@dataclass(frozen=True)
class NewVar:
    """A skolem slot in an ASSERT template: NEW(?v)."""

    name: str


HeadTerm = Union[Resource, Literal, Var, NewVar]


@dataclass(frozen=True)
class HeadPattern:
    subject: HeadTerm
    predicate: HeadTerm
    object: HeadTerm


@dataclass(frozen=True)
class AssertTemplate:
    patterns: tuple[HeadPattern, ...]


RECOMMEND_KINDS = {
    # kind -> (argument names, human text template)
    "ask_question": (("subject", "question"), "Ask question {1}"),
    "schedule_appointment": (("subject", "specialty"), "Schedule an appointment with {1}"),
    "screen_for": (("subject", "condition"), "Screen for {1}"),
    "notify": (("subject", "message"), "Notify: {1}"),
}


@dataclass(frozen=True)
class RecommendAction:
    kind: str
    args: tuple[Union[Var, Resource, Literal], ...]

    def __post_init__(self) -> None:
        if self.kind not in RECOMMEND_KINDS:
            raise RuleError(f"unknown recommendation kind: {self.kind!r}")
        expected = len(RECOMMEND_KINDS[self.kind][0])
        if len(self.args) != expected:
            raise RuleError(
                f"{self.kind} takes {expected} arguments, got {len(self.args)}")


Action = Union[AssertTemplate, RecommendAction]


@dataclass(frozen=True)
class Rule:
    name: str
    body: tuple[TriplePattern, ...]
    filters: tuple[FilterExpr, ...]
    actions: tuple[Action, ...]

    def kind(self, onto: Ontology | None = None) -> str:
        if any(isinstance(a, RecommendAction) for a in self.actions):
            return "recommendation"
        if onto is not None:
            known = onto.object_properties | onto.data_properties
            for p in self.body:
                pred = p.predicate
                if isinstance(pred, Resource) and pred.iri not in known \
                        and not pred.iri.value.endswith("#type"):
                    return "mapping"
        return "inference"


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[Rule, ...]

    def __iter__(self):
        return iter(self.rules)


@dataclass(frozen=True)
class Recommendation:
    id: str
    rule: str
    kind: str
    args: tuple[Term, ...]
    text: str
    binding: Binding
    status: str = "open"

    def subject(self) -> Term:
        return self.args[0]

    def argument(self) -> str:
        arg = self.args[1]
        return arg.lexical if isinstance(arg, Literal) else arg.iri.value

    def display_args(self) -> list[str]:
        return [a.lexical if isinstance(a, Literal) else a.iri.value
                for a in self.args]


def recommendation_id(rule: str, kind: str, args: tuple[Term, ...]) -> str:
    payload = "|".join([rule, kind] + [str(a) for a in args])
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class Provenance:
    source: str                       # asserted | rule | axiom
    rule: str | None = None
    axiom_id: str | None = None
    binding: Binding | None = None
    body: tuple[Triple, ...] = ()


@dataclass(frozen=True)
class FiringReport:
    asserted: tuple[Triple, ...]
    provenance: dict[Triple, Provenance]
    recommendations: tuple[Recommendation, ...]
    rounds: int
    firings: tuple[tuple[str, Binding], ...]
    firing_bodies: dict[tuple[str, tuple], tuple[Triple, ...]] = field(default_factory=dict)
    hit_round_limit: bool = False

    def to_jsonable(self, prefixes=None) -> dict:
        from .syntax.turtle import render_term

        prefixes = prefixes or {}

        def term_str(t: Term) -> str:
            return render_term(t, prefixes)

        return {
            "rounds": self.rounds,
            "hit_round_limit": self.hit_round_limit,
            "asserted": [
                [term_str(t.subject), term_str(t.predicate), term_str(t.object)]
                for t in self.asserted
            ],
            "recommendations": [
                {
                    "id": r.id,
                    "rule": r.rule,
                    "kind": r.kind,
                    "args": [term_str(a) for a in r.args],
                    "text": r.text,
                    "status": r.status,
                }
                for r in self.recommendations
            ],
            "firings": [
                {"rule": name, "binding": {k: term_str(v) for k, v in b.items}}
                for name, b in self.firings
            ],
        }


def _instantiate_head_term(
    t: HeadTerm, binding: Binding, rule: Rule, skolems: dict[str, Iri]
) -> Term:
    if isinstance(t, Var):
        bound = binding.get(t.name)
        if bound is None:
            raise RuleError(f"rule {rule.name!r}: unbound ?{t.name} at firing time")
        return bound
    if isinstance(t, NewVar):
        if t.name not in skolems:
            skolems[t.name] = skolem_iri(
                f"rule:{rule.name}:{t.name}",
                "|".join(f"{k}={canonical(v.iri) if isinstance(v, Resource) else v.lexical}"
                         for k, v in binding.items),
            )
        return Resource(skolems[t.name])
    return t


def run_rules(
    rules: RuleSet,
    g: Graph,
    onto: Ontology,
    limits: Limits = Limits(),
    registry: FunctionRegistry | None = None,
) -> FiringReport:
    """Run to fixpoint (or the round cap). The input graph is not mutated;
    the report's assertions are the delta for the caller to apply."""
    registry = registry if registry is not None else default_registry()
    work = g.copy()
    asserted: list[Triple] = []
    provenance: dict[Triple, Provenance] = {}
    recommendations: dict[str, Recommendation] = {}
    firings: list[tuple[str, Binding]] = []
    firing_bodies: dict[tuple[str, tuple], tuple[Triple, ...]] = {}
    fired: set[tuple[str, tuple]] = set()

    rounds = 0
    changed = True
    while changed and rounds < limits.max_rounds:
        rounds += 1
        changed = False

        delta = materialize(onto, work, limits)
        for t in delta.added:
            if work.insert(t):
                asserted.append(t)
                provenance[t] = Provenance("axiom", axiom_id=delta.added_by.get(t))
                changed = True

        for rule in rules:
            bindings = work.match_bgp(list(rule.body))
            for binding in bindings:
                ok = True
                for f in rule.filters:
                    try:
                        if not eval_filter(f, binding, registry):
                            ok = False
                            break
                    except FilterTypeError:
                        ok = False
                        break
                if not ok:
                    continue
                key = (rule.name, binding.sort_key())
                if key in fired:
                    continue
                fired.add(key)
                firings.append((rule.name, binding))
                body_triples = tuple(
                    Triple(p.subject if isinstance(p.subject, Resource) else binding.get(p.subject.name),
                           p.predicate if isinstance(p.predicate, Resource) else binding.get(p.predicate.name),
                           p.object if not isinstance(p.object, Var) else binding.get(p.object.name))
                    for p in rule.body
                )
                firing_bodies[key] = body_triples
                skolems: dict[str, Iri] = {}
                for action in rule.actions:
                    if isinstance(action, AssertTemplate):
                        for hp in action.patterns:
                            s = _instantiate_head_term(hp.subject, binding, rule, skolems)
                            p = _instantiate_head_term(hp.predicate, binding, rule, skolems)
                            o = _instantiate_head_term(hp.object, binding, rule, skolems)
                            if not isinstance(s, Resource) or not isinstance(p, Resource):
                                raise RuleError(
                                    f"rule {rule.name!r}: non-resource subject/predicate")
                            t = Triple(s, p, o)
                            if work.insert(t):
                                asserted.append(t)
                                provenance[t] = Provenance(
                                    "rule", rule=rule.name, binding=binding,
                                    body=body_triples)
                                changed = True
                    else:
                        args = tuple(
                            binding.get(a.name) if isinstance(a, Var) else a
                            for a in action.args
                        )
                        if any(a is None for a in args):
                            raise RuleError(
                                f"rule {rule.name!r}: unbound recommendation argument")
                        rid = recommendation_id(rule.name, action.kind, args)
                        if rid not in recommendations:
                            template = RECOMMEND_KINDS[action.kind][1]
                            arg_strs = [
                                a.lexical if isinstance(a, Literal) else a.iri.local_name()
                                for a in args
                            ]
                            recommendations[rid] = Recommendation(
                                id=rid, rule=rule.name, kind=action.kind,
                                args=args,
                                text=template.format(*arg_strs),
                                binding=binding)

    recs = tuple(sorted(recommendations.values(), key=lambda r: (r.rule, r.id)))
    return FiringReport(
        asserted=tuple(asserted),
        provenance=provenance,
        recommendations=recs,
        rounds=rounds,
        firings=tuple(firings),
        firing_bodies=firing_bodies,
        hit_round_limit=changed,
    )


# ---------------------------------------------------------------------------
# Explanation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Explanation:
    source: str                # asserted | rule | axiom
    rule: str | None = None
    axiom_id: str | None = None
    binding: Binding | None = None
    supports: tuple[tuple[Triple, "Explanation"], ...] = ()

    def render(self, indent: int = 0) -> str:
        pad = "  " * indent
        if self.source == "asserted":
            return pad + "asserted\n"
        if self.source == "axiom":
            return pad + f"inferred by ontology axiom {self.axiom_id}\n"
        lines = [pad + f"derived by rule {self.rule}"]
        for triple, sub in self.supports:
            lines.append(pad + f"  {triple.subject} {triple.predicate} {triple.object}")
            lines.append(sub.render(indent + 2).rstrip("\n"))
        return "\n".join(lines) + "\n"


def explain(report: FiringReport, item: Triple | str) -> Explanation:
    """Provenance chain for an asserted triple or a recommendation id,
    recursing through rule firings down to base facts."""
    if isinstance(item, str):
        for rec in report.recommendations:
            if rec.id == item:
                return _explain_firing(report, rec.rule, rec.binding)
        raise UnknownItem(f"no recommendation with id {item!r}")
    return _explain_triple(report, item, frozenset())


def _explain_triple(report: FiringReport, t: Triple, seen: frozenset) -> Explanation:
    prov = report.provenance.get(t)
    if prov is None:
        return Explanation("asserted")
    if prov.source == "axiom":
        return Explanation("axiom", axiom_id=prov.axiom_id)
    if t in seen:  # cycles cannot occur by construction; guard anyway
        return Explanation("asserted")
    supports = tuple(
        (bt, _explain_triple(report, bt, seen | {t})) for bt in prov.body
    )
    return Explanation("rule", rule=prov.rule, binding=prov.binding, supports=supports)


def _explain_firing(report: FiringReport, rule_name: str, binding: Binding) -> Explanation:
    body = report.firing_bodies.get((rule_name, binding.sort_key()))
    if body is None:
        raise UnknownItem(f"no firing recorded for rule {rule_name!r}")
    supports = tuple(
        (bt, _explain_triple(report, bt, frozenset())) for bt in body
    )
    return Explanation("rule", rule=rule_name, binding=binding, supports=supports)
