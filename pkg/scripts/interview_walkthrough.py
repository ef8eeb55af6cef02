#!/usr/bin/env python3
"""Scripted clinician interview against a live service instance.

Starts the engine in-process, walks a three-answer session (divorce,
incarcerated household member, household alcohol problem), and prints the
recommendation queue, score, inferred profile, and a screening request
after each step. Useful as a smoke test and as a demonstration of the
answer -> inference -> next-question loop.
"""

from __future__ import annotations

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


def show(title: str, payload) -> None:
    print(f"\n== {title}")
    print(json.dumps(payload, indent=2, sort_keys=True))


def main() -> int:
    engine = Engine.from_config(load_config(ROOT / "data" / "engine.conf"))
    store = SessionStore(engine, state_dir=None)
    client = TestClient(create_app(engine, store))

    created = client.post("/sessions", json={"demographics": {
        "name": "Walkthrough Case",
        "age": 9,
        "address": "50 N Dunlap St, Memphis, TN 38103",
    }}).json()
    sid = created["id"]
    show("session created", created)

    for question, value in (
        ("parents_divorced", True),
        ("household_member_incarcerated", True),
        ("household_member_alcohol", True),
    ):
        outcome = client.post(f"/sessions/{sid}/answers",
                              json={"question": question, "value": value}).json()
        show(f"answered {question} = {value}", outcome)

    view = client.get(f"/sessions/{sid}").json()
    show("session view", view)

    screening = client.get(f"/sessions/{sid}/screening",
                           params={"symptoms": "ex:fatigue,ex:weight_gain"}).json()
    show("screening candidates for fatigue + weight gain", screening)

    replayed = store.replay(store.log_lines(sid))
    identical = store.serialized_view(replayed) == store.serialized_view(store.get(sid))
    print(f"\nreplay reconstructs the session byte-identically: {identical}")
    return 0 if identical else 1


if __name__ == "__main__":
    sys.exit(main())
