"""Command line for batch workflows. Data goes to stdout, diagnostics to
stderr; exit code 0 on success, 1 on usage errors, 2 on domain failures
(parse errors, inconsistency)."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, EngineConfig, load_config
from .engine import Engine
from .model import MalformedCurie, UnknownPrefix, expand_curie, Iri
from .query import QueryError, ResultTable
from .syntax import ParseError, parse_rules, serialize_turtle
from .syntax.errors import DuplicateRuleName, UnboundHeadVariable


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acekb", description="ACE surveillance knowledge-base engine")
    parser.add_argument("--config", type=Path, default=None,
                        help="engine configuration file (key = value lines)")
    parser.add_argument("--order", choices=("asc", "desc"), default=None,
                        help="effect ordering for intervention ranking")
    parser.add_argument("--max-rounds", type=int, default=None)
    parser.add_argument("--skolem-depth", type=int, default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("load", help="parse ontology and data, print the load report")
    sub.add_parser("check", help="consistency check; exit 2 when inconsistent")
    sub.add_parser("classify", help="print the inferred class hierarchy")
    sub.add_parser("materialize", help="print the inferred triples as Turtle")
    q = sub.add_parser("query", help="evaluate a query file")
    q.add_argument("file", type=Path)
    r = sub.add_parser("rules", help="run a rule file, print the firing report")
    r.add_argument("file", type=Path)
    s = sub.add_parser("score", help="compute a person's adversity score")
    s.add_argument("person")
    sub.add_parser("metrics", help="print ontology metrics")
    st = sub.add_parser("stratify", help="rank ACEs to screen for in an area")
    st.add_argument("area")
    sub.add_parser("serve", help="start the HTTP service")
    return parser


def _engine(args) -> Engine:
    if args.config is not None:
        config = load_config(args.config)
    else:
        config = EngineConfig()
    config = config.with_overrides(
        order=args.order,
        max_rounds=args.max_rounds,
        skolem_depth=args.skolem_depth,
    )
    return Engine.from_config(config)


def _resolve(engine: Engine, name: str) -> Iri:
    if name.startswith("<") and name.endswith(">"):
        return Iri(name[1:-1])
    if "://" in name or name.startswith("urn:"):
        return Iri(name)
    return expand_curie(engine.prefixes, name)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0

    try:
        engine = _engine(args)
    except (ConfigError, ParseError, DuplicateRuleName, UnboundHeadVariable,
            FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        return _dispatch(args, engine)
    except (ParseError, UnknownPrefix, MalformedCurie, QueryError,
            DuplicateRuleName, UnboundHeadVariable, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args, engine: Engine) -> int:
    import json

    command = args.command
    if command == "load":
        report = engine.ontology.load_report
        print(f"axioms: {len(engine.ontology.axioms)}")
        print(f"classes: {len(engine.ontology.classes)}")
        print(f"object_properties: {len(engine.ontology.object_properties)}")
        print(f"data_properties: {len(engine.ontology.data_properties)}")
        print(f"triples: {len(engine.graph)}")
        print(f"rules: {len(engine.rules.rules)}")
        for kind, items in (
            ("class", report.classes),
            ("object_property", report.object_properties),
            ("data_property", report.data_properties),
            ("individual", report.individuals),
        ):
            for iri in items:
                print(f"auto-declared {kind}: {iri}")
        return 0

    if command == "check":
        report = engine.check()
        sys.stdout.write(report.render())
        if report.chain_warning:
            print("note: property chains are applied by materialization only",
                  file=sys.stderr)
        return 0 if report.consistent else 2

    if command == "classify":
        sys.stdout.write(engine.taxonomy.render())
        return 0

    if command == "materialize":
        delta = engine.apply_materialization()
        sys.stdout.write(serialize_turtle(list(delta.added), engine.prefixes))
        if delta.hit_round_limit:
            print("warning: round limit reached before fixpoint", file=sys.stderr)
        return 0

    if command == "query":
        result = engine.run_query(args.file.read_text())
        if isinstance(result, bool):
            print("true" if result else "false")
        else:
            assert isinstance(result, ResultTable)
            sys.stdout.write(result.to_tsv(engine.prefixes))
        return 0

    if command == "rules":
        ruleset = parse_rules(args.file.read_text(), engine.prefixes)
        report = engine.run_rules(ruleset)
        print(json.dumps(report.to_jsonable(engine.prefixes), indent=2, sort_keys=True))
        return 0

    if command == "score":
        person = _resolve(engine, args.person)
        engine.apply_materialization()
        score = engine.score(person)
        print(f"person: {person}")
        print(f"score: {score.score}")
        print(f"score_class: {score.score_class}")
        for category in sorted(score.categories_present, key=lambda i: i.value):
            print(f"category: {category}")
        return 0

    if command == "metrics":
        for label, value in engine.metrics().as_rows():
            print(f"{label}\t{value}")
        return 0

    if command == "stratify":
        from .surveillance import UnknownArea, area_iri, stratify_area

        try:
            result = stratify_area(area_iri(args.area), engine)
        except UnknownArea as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        for ace, evidence in result:
            print(f"{ace}\t{len(evidence)}\t{','.join(evidence)}")
        return 0

    if command == "serve":
        import uvicorn

        from .service import create_app
        from .sessions import SessionStore

        host, _, port = engine.config.listen.partition(":")
        store = SessionStore(engine, state_dir=Path("sessions"))
        app = create_app(engine, store)
        uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8075))
        return 0

    raise AssertionError(f"unhandled command {command!r}")


if __name__ == "__main__":
    sys.exit(main())
