"""HTTP/JSON service: the interview-session loop plus KB query/management
endpoints. Sessions are event-sourced; per-session mutations serialize on a
session lock, and shared-KB writes take the global writer lock."""

from __future__ import annotations

from decimal import Decimal, InvalidOperation
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .catalog import InvalidAnswerValue, UnknownQuestion
from .engine import Engine
from .model import Iri, MalformedCurie, UnknownPrefix, expand_curie
from .query import ResultTable, UnboundProjection, UnknownFunction
from .sessions import (
    CorruptLog, DuplicateClose, SessionStore, UnknownRecommendation,
    UnknownSession,
)
from .surveillance import (
    InterventionRankingRequest, ScreeningRequest, UnknownAce, UnknownArea,
    UnknownPerson, area_iri, rank_interventions, screening_candidates,
)
from .syntax import ParseError, parse_turtle
from .syntax.turtle import render_term


class CreateSessionBody(BaseModel):
    demographics: dict[str, Any] | None = None


class AnswerBody(BaseModel):
    question: str
    value: Any


class CloseBody(BaseModel):
    status: str = "done"


class QueryBody(BaseModel):
    query: str


class RankBody(BaseModel):
    available_resources: dict[str, Any]
    target_ace: str
    order: str = "asc"


def _resolve(engine: Engine, name: str) -> Iri:
    if name.startswith("<") and name.endswith(">"):
        return Iri(name[1:-1])
    if "://" in name or name.startswith("urn:"):
        return Iri(name)
    return expand_curie(engine.prefixes, name)


def create_app(engine: Engine, store: SessionStore) -> FastAPI:
    app = FastAPI(title="ACE knowledge-base service")

    def rec_json(rec) -> dict:
        return {
            "id": rec.id,
            "rule": rec.rule,
            "kind": rec.kind,
            "args": rec.display_args(),
            "text": rec.text,
            "status": "open",
        }

    def score_json(score) -> dict:
        return {
            "score": score.score,
            "categories": sorted(c.value for c in score.categories_present),
            "score_class": score.score_class.value,
        }

    def triple_json(t) -> list[str]:
        return [render_term(t.subject, engine.prefixes),
                render_term(t.predicate, engine.prefixes),
                render_term(t.object, engine.prefixes)]

    @app.exception_handler(ParseError)
    async def _parse_error(_req, exc: ParseError):
        return JSONResponse(status_code=400, content={
            "error": str(exc), "line": exc.span.line, "column": exc.span.column})

    for exc_type in (UnknownSession, UnknownQuestion, UnknownRecommendation,
                     UnknownArea, UnknownPerson):
        @app.exception_handler(exc_type)
        async def _not_found(_req, exc, _t=exc_type):
            return JSONResponse(status_code=404, content={"error": str(exc)})

    for exc_type in (InvalidAnswerValue, UnknownFunction, UnknownAce,
                     UnboundProjection, UnknownPrefix, MalformedCurie, ValueError):
        @app.exception_handler(exc_type)
        async def _unprocessable(_req, exc, _t=exc_type):
            return JSONResponse(status_code=422, content={"error": str(exc)})

    @app.exception_handler(DuplicateClose)
    async def _conflict(_req, exc: DuplicateClose):
        return JSONResponse(status_code=409, content={"error": str(exc)})

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "triples": len(engine.graph)}

    # -- sessions -----------------------------------------------------------

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody | None = None):
        demographics = body.demographics if body else None
        with engine.lock.read():
            session = store.create_session(demographics)
            return store.session_view(session)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        with engine.lock.read():
            return store.session_view(store.get(session_id))

    @app.post("/sessions/{session_id}/answers")
    def record_answer(session_id: str, body: AnswerBody):
        with engine.lock.read(), store.lock_for(session_id):
            outcome = store.record_answer(session_id, body.question, body.value)
            return {
                "new_facts": [triple_json(t) for t in outcome["new_facts"]],
                "new_recommendations": [rec_json(r) for r in outcome["new_recommendations"]],
                "ace_score": score_json(outcome["score"]),
            }

    @app.get("/sessions/{session_id}/recommendations")
    def list_recommendations(session_id: str):
        with engine.lock.read():
            session = store.get(session_id)
            return {"open": [rec_json(r) for r in session.open_recommendations()]}

    @app.post("/sessions/{session_id}/recommendations/{rec_id}/close")
    def close_recommendation(session_id: str, rec_id: str, body: CloseBody):
        with store.lock_for(session_id):
            store.close_recommendation(session_id, rec_id, body.status)
        return {"id": rec_id, "status": body.status}

    @app.get("/sessions/{session_id}/screening")
    def screening(session_id: str, symptoms: str = ""):
        with engine.lock.read():
            session = store.get(session_id)
            iris = tuple(
                _resolve(engine, s.strip()) for s in symptoms.split(",") if s.strip())
            merged = engine.merged_view(session.graph)
            req = ScreeningRequest(person=session.person, symptoms=iris)
            result = screening_candidates(req, engine, merged)
            return {"candidates": [
                {"nho": nho.value, "label": label} for nho, label in result]}

    # -- knowledge base -------------------------------------------------------

    @app.post("/kb/query")
    def kb_query(body: QueryBody):
        with engine.lock.read():
            result = engine.run_query(body.query)
        if isinstance(result, bool):
            return {"kind": "ask", "boolean": result}
        assert isinstance(result, ResultTable)
        return {
            "kind": "select",
            "header": list(result.header),
            "rows": [[render_term(t, engine.prefixes) for t in row]
                     for row in result.rows],
        }

    @app.post("/kb/data")
    async def kb_data(request: Request):
        text = (await request.body()).decode("utf-8")
        triples, _ = parse_turtle(text, engine.prefixes)
        with engine.lock.write():
            inserted = engine.graph.insert_all(triples)
        return {"inserted": inserted}

    @app.get("/kb/metrics")
    def kb_metrics():
        m = engine.metrics()
        return {key: value for key, value in (
            ("classes", m.class_count),
            ("object_properties", m.object_property_count),
            ("data_properties", m.data_property_count),
            ("max_depth", m.max_depth),
            ("max_children", m.max_children),
            ("avg_children", m.avg_children),
            ("single_child_classes", m.single_child_class_count),
            ("over_25_children", m.over_25_children_count),
            ("no_definition", m.no_definition_count),
        )}

    # -- surveillance -----------------------------------------------------------

    @app.post("/interventions/rank")
    def interventions_rank(body: RankBody):
        try:
            resources = {
                _resolve(engine, k): Decimal(str(v))
                for k, v in body.available_resources.items()
            }
        except InvalidOperation:
            return JSONResponse(status_code=422,
                                content={"error": "resource quantities must be numeric"})
        req = InterventionRankingRequest.of(
            resources, _resolve(engine, body.target_ace), body.order)
        with engine.lock.read():
            ranked = rank_interventions(req, engine)
        return {"interventions": [
            {"intervention": iri.value, "name": name, "effect": str(effect)}
            for iri, name, effect in ranked]}

    @app.get("/areas/{area_id}/stratify")
    def stratify(area_id: str):
        from .surveillance import stratify_area

        with engine.lock.read():
            result = stratify_area(area_iri(area_id), engine)
        return {"aces": [
            {"ace": ace.value, "evidence": evidence} for ace, evidence in result]}

    return app
