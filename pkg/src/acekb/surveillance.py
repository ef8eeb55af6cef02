"""Surveillance workflows over the engine: clinical screening (symptoms +
score class -> negative health outcomes), intervention ranking under
resource feasibility, social-determinant CSV ingestion, address-to-area
linkage, and area risk stratification."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation

from .engine import Engine
from .model import Iri
from .query import evaluate
from .store import Graph, Literal, RDF_TYPE, Resource, Term, Triple, TriplePattern, Var
from .syntax import parse_query
from .vocab import (
    AREA, CAUSAL_FACTOR_FOR, EX, EXHIBITS, FOR_AREA, FOR_NHO, HAS_ACES_SCORE,
    INCREASES_RISK, INCREASES_RISK_OF, LIVES_IN_AREA, NEGATIVE_HEALTH_OUTCOME,
    NHO_FREQUENCY_RECORD, RECORD_COUNT, aces_score_class, ex,
)


class SurveillanceError(Exception):
    pass


class UnknownPerson(SurveillanceError):
    pass


class UnknownAce(SurveillanceError):
    pass


class UnknownArea(SurveillanceError):
    pass


class UnknownIndicator(SurveillanceError):
    pass


class MalformedCsv(SurveillanceError):
    def __init__(self, row: int, column: str, message: str) -> None:
        super().__init__(f"row {row}, column {column!r}: {message}")
        self.row = row
        self.column = column


@dataclass(frozen=True)
class ScreeningRequest:
    person: Iri
    symptoms: tuple[Iri, ...]
    use_score: bool = True

    def __post_init__(self) -> None:
        if len(set(self.symptoms)) != len(self.symptoms):
            raise ValueError("symptoms must be distinct")


@dataclass(frozen=True)
class InterventionRankingRequest:
    available_resources: tuple[tuple[Iri, Decimal], ...]  # sorted by resource IRI
    target_ace: Iri
    order: str = "asc"

    @staticmethod
    def of(resources: dict[Iri, Decimal | int], target_ace: Iri,
           order: str = "asc") -> "InterventionRankingRequest":
        items = tuple(sorted(
            ((iri, Decimal(qty)) for iri, qty in resources.items()),
            key=lambda kv: kv[0].value))
        for _, qty in items:
            if qty < 0:
                raise ValueError("resource quantities must be >= 0")
        return InterventionRankingRequest(items, target_ace, order)


@dataclass(frozen=True)
class AreaProfile:
    area_id: str
    sdh_indicators: dict[Iri, Decimal] = field(default_factory=dict)
    nho_frequencies: dict[Iri, int] = field(default_factory=dict)


def area_iri(area_id: str) -> Iri:
    return ex(f"area_{area_id}")


def _mentioned(g: Graph, iri: Iri) -> bool:
    return any(
        t.subject.iri == iri or (isinstance(t.object, Resource) and t.object.iri == iri)
        for t in g
    )


# ---------------------------------------------------------------------------
# Screening (symptoms + score class -> outcomes to screen for)
# ---------------------------------------------------------------------------

def screening_query(req: ScreeningRequest, score_class: Iri,
                    prefixes: dict[str, str]) -> str:
    """The query text the screening workflow evaluates: outcome type, name,
    one pattern per symptom, and (when the score is used) the person's score
    anchored through their score-level individual."""
    projection = "?nho ?nho_name ?aces_score" if req.use_score else "?nho ?nho_name"
    lines = [
        f"SELECT {projection}",
        "WHERE {",
        f"  ?nho a <{NEGATIVE_HEALTH_OUTCOME}> ;",
        f"       <{EX}has_name> ?nho_name ",
    ]
    for s in req.symptoms:
        lines[-1] += ";"
        lines.append(f"       <{EX}has_symptom> <{s}> ")
    lines[-1] += "."
    if req.use_score:
        lines.append(f"  <{req.person}> <{HAS_ACES_SCORE}> ?aces_score .")
        lines.append(f"  ?aces_score a <{score_class}> ;")
        lines.append(f"              <{INCREASES_RISK}> ?nho .")
    lines.append("}")
    return "\n".join(lines) + "\n"


def screening_candidates(req: ScreeningRequest, engine: Engine,
                         graph: Graph | None = None) -> list[tuple[Iri, str]]:
    g = graph if graph is not None else engine.graph
    if not _mentioned(g, req.person):
        raise UnknownPerson(str(req.person))
    score = engine.score(req.person, g)
    text = screening_query(req, score.score_class, engine.prefixes)
    table = evaluate(parse_query(text, engine.prefixes), g, engine.registry)
    counts: dict[tuple[Iri, str], set[Term]] = {}
    for row in table.rows:
        nho, name = row[0], row[1]
        anchor = row[2] if len(row) > 2 else name
        counts.setdefault((nho.iri, name.lexical), set()).add(anchor)
    ranked = sorted(
        counts.items(), key=lambda kv: (-len(kv[1]), kv[0][1], kv[0][0].value))
    return [(nho, name) for (nho, name), _ in ranked]


# ---------------------------------------------------------------------------
# Intervention ranking (feasibility filter + effect order)
# ---------------------------------------------------------------------------

def intervention_query(req: InterventionRankingRequest,
                       prefixes: dict[str, str]) -> str:
    lines = [
        "SELECT ?intervention ?name ?e",
        "WHERE {",
        f"  ?intervention <{EX}has_name> ?name ;",
    ]
    sim_args = []
    for i, (resource, qty) in enumerate(req.available_resources):
        lines.append(f"       <{EX}requires_{resource.local_name()}> ?q_{i} ;")
        sim_args.append(f"?q_{i}, {qty}")
    lines.append(f"       <{EX}has_effect_on_{req.target_ace.local_name()}> ?e .")
    if sim_args:
        lines.append(f"  FILTER(similarity({', '.join(sim_args)}))")
    lines.append("}")
    lines.append("ORDER BY ?e" if req.order == "asc" else "ORDER BY DESC(?e)")
    return "\n".join(lines) + "\n"


def rank_interventions(req: InterventionRankingRequest, engine: Engine,
                       graph: Graph | None = None) -> list[tuple[Iri, str, Decimal]]:
    if req.target_ace not in engine.ontology.classes:
        raise UnknownAce(str(req.target_ace))
    g = graph if graph is not None else engine.graph
    text = intervention_query(req, engine.prefixes)
    table = evaluate(parse_query(text, engine.prefixes), g, engine.registry)
    out = []
    for intervention, name, effect in table.rows:
        out.append((intervention.iri, name.lexical, Decimal(effect.lexical)))
    return out


# ---------------------------------------------------------------------------
# Social-determinant ingestion and address linkage
# ---------------------------------------------------------------------------

def _cell_literal(raw: str) -> Literal:
    raw = raw.strip()
    try:
        if "." in raw:
            Decimal(raw)
            return Literal(raw, "decimal")
        int(raw)
        return Literal(raw, "integer")
    except (InvalidOperation, ValueError):
        return Literal(raw, "string")


def ingest_sdh_table(
    csv_text: str,
    engine: Engine,
    area_column: str = "area",
    indicator_columns: tuple[str, ...] | None = None,
) -> list[Triple]:
    """Rows become `area a Area` plus one `has_sdh_value_<indicator>` triple
    per non-empty cell; threshold rules add `exhibits <SdhClass>`. Inserts
    into the shared graph; returns only the newly added triples, so
    re-ingesting the same file adds nothing."""
    reader = csv.reader(io.StringIO(csv_text))
    try:
        header = next(reader)
    except StopIteration:
        raise MalformedCsv(1, area_column, "missing header row") from None
    header = [h.strip() for h in header]
    if area_column not in header:
        raise MalformedCsv(1, area_column, "area column missing from header")
    if indicator_columns is None:
        indicator_columns = tuple(h for h in header if h != area_column)
    for col in indicator_columns:
        if col not in header:
            raise UnknownIndicator(col)
    thresholds = {t.indicator: t for t in engine.config.sdh_thresholds}

    added: list[Triple] = []

    def insert(t: Triple) -> None:
        if engine.graph.insert(t):
            added.append(t)

    area_idx = header.index(area_column)
    for row_no, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise MalformedCsv(row_no, area_column, "row width differs from header")
        code = row[area_idx].strip()
        if not code:
            raise MalformedCsv(row_no, area_column, "empty area code")
        area = area_iri(code)
        insert(Triple(Resource(area), Resource(RDF_TYPE), Resource(AREA)))
        for col in indicator_columns:
            raw = row[header.index(col)].strip()
            if not raw:
                continue
            value = _cell_literal(raw)
            insert(Triple(Resource(area), Resource(ex(f"has_sdh_value_{col}")), value))
            rule = thresholds.get(col)
            if rule is not None and value.datatype in ("integer", "decimal"):
                if rule.marks_adverse(Decimal(value.lexical)):
                    insert(Triple(Resource(area), Resource(EXHIBITS),
                                  Resource(rule.class_iri)))
    return added


def normalize_address(address: str) -> str:
    return " ".join(address.upper().split())


def link_address(
    person: Iri,
    address: str,
    area_index: dict[str, str],
    engine: Engine,
    graph: Graph | None = None,
) -> Triple | None:
    """Longest address-key match links the person to an area; no match is a
    value (None), not an error. Keys match anywhere in the normalized
    address, so ZIP-style suffix keys work; the longest key wins, ties
    break lexicographically."""
    g = graph if graph is not None else engine.graph
    normalized = normalize_address(address)
    if not normalized or not area_index:
        return None
    matches = [k for k in area_index if k and k.upper() in normalized]
    if not matches:
        return None
    best = sorted(matches, key=lambda k: (-len(k), k))[0]
    triple = Triple(Resource(person), Resource(LIVES_IN_AREA),
                    Resource(area_iri(area_index[best])))
    g.insert(triple)
    return triple


# ---------------------------------------------------------------------------
# Area risk stratification
# ---------------------------------------------------------------------------

def stratify_area(area: Iri, engine: Engine,
                  graph: Graph | None = None) -> list[tuple[Iri, list[str]]]:
    """ACEs to screen for in an area: those risk-linked from the SDH classes
    the area exhibits, and those that are causal factors for outcomes
    frequently recorded there. Ordered by distinct supporting links, then
    label."""
    g = graph if graph is not None else engine.graph
    if not _mentioned(g, area):
        raise UnknownArea(str(area))

    evidence: dict[Iri, set[str]] = {}

    def note(ace: Iri, link: str) -> None:
        evidence.setdefault(ace, set()).add(link)

    for b in g.match_pattern(TriplePattern(Resource(area), Resource(EXHIBITS), Var("s"))):
        sdh = b.get("s")
        if not isinstance(sdh, Resource):
            continue
        for rb in g.match_pattern(
            TriplePattern(sdh, Resource(INCREASES_RISK_OF), Var("ace"))
        ):
            ace = rb.get("ace")
            if isinstance(ace, Resource):
                note(ace.iri, f"sdh:{sdh.iri.local_name()}")

    threshold = engine.config.nho_frequency_threshold
    for b in g.match_pattern(
        TriplePattern(Var("rec"), Resource(FOR_AREA), Resource(area))
    ):
        rec = b.get("rec")
        if not isinstance(rec, Resource):
            continue
        counts = [
            t.get("c") for t in g.match_pattern(
                TriplePattern(rec, Resource(RECORD_COUNT), Var("c")))
        ]
        count = max(
            (int(c.lexical) for c in counts
             if isinstance(c, Literal) and c.datatype == "integer"),
            default=0)
        if count < threshold:
            continue
        for nb in g.match_pattern(TriplePattern(rec, Resource(FOR_NHO), Var("nho"))):
            nho = nb.get("nho")
            if not isinstance(nho, Resource):
                continue
            for ab in g.match_pattern(
                TriplePattern(Var("ace"), Resource(CAUSAL_FACTOR_FOR), nho)
            ):
                ace = ab.get("ace")
                if isinstance(ace, Resource):
                    note(ace.iri, f"nho:{nho.iri.local_name()}")

    ranked = sorted(
        evidence.items(),
        key=lambda kv: (-len(kv[1]), engine.label(kv[0], g), kv[0].value))
    return [(ace, sorted(links)) for ace, links in ranked]
