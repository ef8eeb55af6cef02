#!/usr/bin/env python3
"""Regenerate the frozen CLI outputs under tests/golden/. Run from the
repository root after a deliberate behavior change, then review the diff."""

from __future__ import annotations

import contextlib
import io
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from acekb.cli import main  # noqa: E402

GOLDEN = ROOT / "tests" / "golden"

CONFIG = GOLDEN / "cli.conf"
CONFIG_TEXT = """\
ontology = ../../data/aceso_seed.ofn
rules = ../../data/interview.rules
question_catalog = ../../data/questions.json
data = ../../fixtures/base_kb.ttl, ../../fixtures/physical_abuse_case.ttl, \
../../fixtures/screening_case.ttl, ../../fixtures/interventions.ttl, \
../../fixtures/areas.ttl
prefix.ex = http://aceso.example/#
sdh.poverty_rate = above 0.2 -> ex:High_Poverty
sdh.transit_access = below 0.3 -> ex:Poor_Transit_Access
"""

COMMANDS = {
    "load.txt": ["load"],
    "check.txt": ["check"],
    "classify.txt": ["classify"],
    "materialize.ttl": ["materialize"],
    "query_detect.txt": ["query", str(ROOT / "fixtures" / "detect_physical_abuse.rq")],
    "rules_report.json": ["rules", str(ROOT / "data" / "interview.rules")],
    "score_patient1.txt": ["score", "ex:patient1"],
    "metrics.txt": ["metrics"],
    "stratify_38103.txt": ["stratify", "38103"],
}


def run(argv: list[str]) -> str:
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        code = main(argv)
    assert code == 0, f"{argv} exited {code}"
    return out.getvalue()


def main_script() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    CONFIG.write_text(CONFIG_TEXT)
    for name, argv in COMMANDS.items():
        text = run(["--config", str(CONFIG)] + argv)
        (GOLDEN / name).write_text(text)
        print(f"wrote {name} ({len(text)} bytes)")


if __name__ == "__main__":
    main_script()
