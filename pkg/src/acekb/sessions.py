"""Interview sessions: per-session fact graphs layered over the shared KB,
an append-only JSON-lines event log per session, and replay that
reconstructs a session exactly (the inference pipeline is deterministic,
so re-running answers reproduces recommendations and score bit-for-bit).

Events are appended before in-memory state changes: a crash between the
append and the response loses nothing, replay wins."""

from __future__ import annotations

import json
import secrets
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable

from .engine import Engine
from .model import Iri
from .reasoning import AceScore
from .rule_engine import Recommendation
from .store import Graph, Literal, RDF_TYPE, Resource, Triple
from .surveillance import link_address
from .vocab import (
    EX, HAS_ACES_SCORE, PERSON, aces_level_individual, aces_score_class, ex,
)


class SessionError(Exception):
    pass


class UnknownSession(SessionError):
    def __init__(self, session_id: str) -> None:
        super().__init__(f"unknown session: {session_id!r}")
        self.session_id = session_id


class UnknownRecommendation(SessionError):
    pass


class DuplicateClose(SessionError):
    pass


class CorruptLog(SessionError):
    pass


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


@dataclass
class Session:
    id: str
    person: Iri
    created_at: str
    answers: list[tuple[str, Any, str]] = field(default_factory=list)
    graph: Graph = field(default_factory=Graph)
    recommendations: dict[str, Recommendation] = field(default_factory=dict)
    closed: dict[str, str] = field(default_factory=dict)
    seq: int = 0
    score: AceScore | None = None

    def answered_questions(self) -> set[str]:
        return {qid for qid, _, _ in self.answers}

    def open_recommendations(self) -> list[Recommendation]:
        answered = self.answered_questions()
        out = []
        for rec in sorted(self.recommendations.values(), key=lambda r: (r.rule, r.id)):
            if rec.id in self.closed:
                continue
            if rec.kind == "ask_question" and rec.argument() in answered:
                continue
            out.append(rec)
        return out


class SessionStore:
    def __init__(
        self,
        engine: Engine,
        state_dir: Path | str | None = None,
        clock: Callable[[], str] = _now,
        token_source: Callable[[], str] | None = None,
    ) -> None:
        self.engine = engine
        self.state_dir = Path(state_dir) if state_dir is not None else None
        if self.state_dir is not None:
            self.state_dir.mkdir(parents=True, exist_ok=True)
        self.clock = clock
        self.token_source = token_source or (lambda: secrets.token_urlsafe(8))
        self.sessions: dict[str, Session] = {}
        self.event_lines: dict[str, list[str]] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._store_lock = threading.Lock()

    # -- event log ------------------------------------------------------------

    def _log_path(self, session_id: str) -> Path | None:
        if self.state_dir is None:
            return None
        return self.state_dir / f"session-{session_id}.jsonl"

    def _append_event(self, session: Session, event_type: str,
                      payload: dict, ts: str) -> None:
        session.seq += 1
        line = json.dumps(
            {"seq": session.seq, "ts": ts, "type": event_type, "payload": payload},
            sort_keys=True)
        self.event_lines.setdefault(session.id, []).append(line)
        path = self._log_path(session.id)
        if path is not None:
            with path.open("a") as fh:
                fh.write(line + "\n")

    def log_lines(self, session_id: str) -> list[str]:
        path = self._log_path(session_id)
        if path is not None and path.exists():
            return [l for l in path.read_text().splitlines() if l.strip()]
        return list(self.event_lines.get(session_id, []))

    # -- lifecycle ---------------------------------------------------------------

    def lock_for(self, session_id: str) -> threading.Lock:
        with self._store_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def get(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise UnknownSession(session_id)
        return session

    def create_session(self, demographics: dict[str, Any] | None = None) -> Session:
        demographics = demographics or {}
        session_id = self.token_source()
        person = ex(f"person_{self.token_source()}")
        ts = self.clock()
        session = Session(id=session_id, person=person, created_at=ts)
        self.sessions[session_id] = session
        self._append_event(session, "created", {
            "session_id": session_id,
            "person": person.value,
            "demographics": demographics,
        }, ts)
        self._commit_created(session, demographics)
        for rec in session.recommendations.values():
            self._append_event(session, "recommendation_emitted",
                               self._rec_payload(rec), ts)
        return session

    def _commit_created(self, session: Session, demographics: dict[str, Any]) -> None:
        g = session.graph
        g.insert(Triple(Resource(session.person), Resource(RDF_TYPE), Resource(PERSON)))
        if "name" in demographics:
            g.insert(Triple(Resource(session.person), Resource(ex("has_name")),
                            Literal(str(demographics["name"]))))
        if "age" in demographics:
            g.insert(Triple(Resource(session.person), Resource(ex("has_age")),
                            Literal(str(int(demographics["age"])), "integer")))
        if "sex" in demographics:
            g.insert(Triple(Resource(session.person), Resource(ex("has_sex")),
                            Literal(str(demographics["sex"]))))
        if "address" in demographics and demographics["address"]:
            link_address(session.person, str(demographics["address"]),
                         self.engine.area_index(), self.engine, g)
        self._run_inference(session)

    # -- answers ---------------------------------------------------------------------

    def record_answer(self, session_id: str, question_id: str, value: Any) -> dict:
        session = self.get(session_id)
        question = self.engine.catalog.get(question_id)
        question.validate_value(value)
        ts = self.clock()
        self._append_event(session, "answer_recorded",
                           {"question": question_id, "value": value}, ts)
        outcome = self._commit_answer(session, question_id, value, ts)
        for rec in outcome["new_recommendation_objects"]:
            self._append_event(session, "recommendation_emitted",
                               self._rec_payload(rec), ts)
        del outcome["new_recommendation_objects"]
        return outcome

    def _commit_answer(self, session: Session, question_id: str,
                       value: Any, ts: str) -> dict:
        question = self.engine.catalog.get(question_id)
        answer_triples = question.triples_for(session.person, value)
        new_facts = [t for t in answer_triples if session.graph.insert(t)]
        before = set(session.recommendations)
        inferred = self._run_inference(session)
        new_facts.extend(inferred)
        session.answers.append((question_id, value, ts))
        new_recs = [
            rec for rid, rec in sorted(session.recommendations.items())
            if rid not in before
        ]
        answered = session.answered_questions()
        open_new = [
            rec for rec in new_recs
            if not (rec.kind == "ask_question" and rec.argument() in answered)
        ]
        return {
            "new_facts": new_facts,
            "new_recommendations": open_new,
            "new_recommendation_objects": new_recs,
            "score": session.score,
        }

    def _run_inference(self, session: Session) -> list[Triple]:
        """Rules + materialization over the merged view; the delta lands in
        the session graph. Refreshes score and the score anchor."""
        engine = self.engine
        merged = engine.merged_view(session.graph)
        report = engine.run_rules(graph=merged)
        added = [t for t in report.asserted if session.graph.insert(t)]
        for rec in report.recommendations:
            session.recommendations.setdefault(rec.id, rec)
        merged = engine.merged_view(session.graph)
        session.score = engine.score(session.person, merged)
        level = aces_level_individual(session.score.score)
        for t in (
            Triple(Resource(session.person), Resource(HAS_ACES_SCORE), Resource(level)),
            Triple(Resource(level), Resource(RDF_TYPE),
                   Resource(aces_score_class(session.score.score))),
        ):
            if session.graph.insert(t) and t not in added:
                added.append(t)
        return added

    # -- recommendations ----------------------------------------------------------------

    @staticmethod
    def _rec_payload(rec: Recommendation) -> dict:
        return {
            "id": rec.id,
            "rule": rec.rule,
            "kind": rec.kind,
            "args": rec.display_args(),
            "text": rec.text,
        }

    def close_recommendation(self, session_id: str, rec_id: str, status: str) -> None:
        session = self.get(session_id)
        if rec_id not in session.recommendations:
            raise UnknownRecommendation(rec_id)
        if status not in ("done", "dismissed"):
            raise SessionError(f"invalid close status: {status!r}")
        if rec_id in session.closed:
            raise DuplicateClose(rec_id)
        ts = self.clock()
        self._append_event(session, "recommendation_closed",
                           {"id": rec_id, "status": status}, ts)
        session.closed[rec_id] = status

    # -- views ---------------------------------------------------------------------------

    def session_view(self, session: Session) -> dict:
        merged = self.engine.merged_view(session.graph)
        try:
            profile = sorted(i.value for i in self.engine.realize(session.person, merged))
        except Exception:
            profile = []
        score = session.score
        return {
            "id": session.id,
            "person": session.person.value,
            "created_at": session.created_at,
            "answers": [
                {"question": qid, "value": value, "ts": ts}
                for qid, value, ts in session.answers
            ],
            "score": {
                "score": score.score if score else 0,
                "categories": sorted(c.value for c in score.categories_present) if score else [],
                "score_class": score.score_class.value if score else aces_score_class(0).value,
            },
            "open_recommendations": [
                {**self._rec_payload(rec), "status": "open"}
                for rec in session.open_recommendations()
            ],
            "closed_recommendations": [
                {"id": rid, "status": status}
                for rid, status in sorted(session.closed.items())
            ],
            "profile": profile,
        }

    def serialized_view(self, session: Session) -> str:
        return json.dumps(self.session_view(session), sort_keys=True)

    # -- replay -----------------------------------------------------------------------------

    def replay(self, lines: list[str]) -> Session:
        """Rebuild a session from its event log; raises CorruptLog on a
        sequence gap, a malformed line, or an emitted-recommendation record
        that re-derivation does not reproduce."""
        events = []
        for i, line in enumerate(lines, start=1):
            try:
                events.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise CorruptLog(f"line {i}: {exc}") from None
        if not events:
            raise CorruptLog("empty log: missing created event")
        for i, event in enumerate(events, start=1):
            if event.get("seq") != i:
                raise CorruptLog(f"sequence gap: expected {i}, got {event.get('seq')}")
        if events[0]["type"] != "created":
            raise CorruptLog("first event must be 'created'")

        payload = events[0]["payload"]
        session = Session(
            id=payload["session_id"],
            person=Iri(payload["person"]),
            created_at=events[0]["ts"],
        )
        session.seq = len(events)
        self._commit_created(session, payload.get("demographics", {}))
        for event in events[1:]:
            etype = event["type"]
            if etype == "answer_recorded":
                self._commit_answer(
                    session, event["payload"]["question"],
                    event["payload"]["value"], event["ts"])
            elif etype == "recommendation_emitted":
                if event["payload"]["id"] not in session.recommendations:
                    raise CorruptLog(
                        f"emitted recommendation {event['payload']['id']} "
                        "not reproduced by replay")
            elif etype == "recommendation_closed":
                session.closed[event["payload"]["id"]] = event["payload"]["status"]
            elif etype == "created":
                raise CorruptLog("duplicate created event")
            else:
                raise CorruptLog(f"unknown event type: {etype!r}")
        return session
