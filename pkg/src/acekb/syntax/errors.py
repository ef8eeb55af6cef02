"""Error types shared by all four parsers. Every parse error points into the
source text via a SourceSpan."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int = 0

    def __post_init__(self) -> None:
        assert self.line >= 1 and self.column >= 1

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class ParseError(Exception):
    def __init__(self, span: SourceSpan, expected: str, found: str) -> None:
        super().__init__(f"at {span}: expected {expected}, found {found!r}")
        self.span = span
        self.expected = expected
        self.found = found


class UnsupportedConstruct(ParseError):
    """An OWL construct outside the supported fragment (e.g. nominals)."""

    def __init__(self, name: str, span: SourceSpan) -> None:
        super().__init__(span, "a supported ontology construct", name)
        self.name = name


class UnsupportedSparqlFeature(ParseError):
    """A query feature outside the supported subset (OPTIONAL, UNION, ...)."""

    def __init__(self, name: str, span: SourceSpan) -> None:
        super().__init__(span, "a supported query feature", name)
        self.name = name


class DuplicateRuleName(Exception):
    def __init__(self, name: str) -> None:
        super().__init__(f"duplicate rule name: {name!r}")
        self.name = name


class UnboundHeadVariable(Exception):
    def __init__(self, rule: str, variable: str) -> None:
        super().__init__(f"rule {rule!r}: head variable ?{variable} not bound in body")
        self.rule = rule
        self.variable = variable
