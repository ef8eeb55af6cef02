#!/usr/bin/env python3
"""Record the scripted three-step interview as raw API response JSON for
the frontend test suite. The client's state is a pure function of these
responses, so the recorded sequence is the contract the UI renders against.
Re-run after engine or fixture changes, then review the diff."""

from __future__ import annotations

import itertools
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from fastapi.testclient import TestClient  # noqa: E402

from acekb.config import load_config  # noqa: E402
from acekb.engine import Engine  # noqa: E402
from acekb.service import create_app  # noqa: E402
from acekb.sessions import SessionStore  # noqa: E402

OUT = ROOT / "frontend" / "tests" / "fixtures" / "walkthrough.json"

ANSWERS = [
    ("parents_divorced", True),
    ("household_member_incarcerated", True),
    ("household_member_alcohol", True),
]


def main() -> None:
    engine = Engine.from_config(load_config(ROOT / "data" / "engine.conf"))
    counter = itertools.count(1)
    ticks = itertools.count(1)
    store = SessionStore(
        engine,
        clock=lambda: f"2026-01-01T00:00:{next(ticks):02d}Z",
        token_source=lambda: f"ui{next(counter)}",
    )
    client = TestClient(create_app(engine, store))

    record: dict = {"steps": []}
    created = client.post("/sessions", json={"demographics": {
        "name": "UI Walkthrough", "age": 9,
        "address": "50 N Dunlap St, Memphis, TN 38103"}})
    record["created"] = created.json()
    sid = created.json()["id"]

    for question, value in ANSWERS:
        answer = client.post(f"/sessions/{sid}/answers",
                             json={"question": question, "value": value})
        view = client.get(f"/sessions/{sid}")
        record["steps"].append({
            "question": question,
            "value": value,
            "answer_response": answer.json(),
            "session_view": view.json(),
        })

    screening = client.get(f"/sessions/{sid}/screening",
                           params={"symptoms": "ex:fatigue,ex:weight_gain"})
    record["screening_response"] = screening.json()

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")
    print(f"wrote {OUT} ({OUT.stat().st_size} bytes)")


if __name__ == "__main__":
    main()
