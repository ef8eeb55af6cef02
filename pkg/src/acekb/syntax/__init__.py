from .errors import (
    DuplicateRuleName, ParseError, SourceSpan, UnboundHeadVariable,
    UnsupportedConstruct, UnsupportedSparqlFeature,
)
from .ofn import parse_ontology
from .rules import parse_rules
from .sparql import parse_query, serialize_query
from .turtle import parse_turtle, serialize_turtle

__all__ = [
    "DuplicateRuleName", "ParseError", "SourceSpan", "UnboundHeadVariable",
    "UnsupportedConstruct", "UnsupportedSparqlFeature", "parse_ontology",
    "parse_query", "parse_rules", "parse_turtle", "serialize_query",
    "serialize_turtle",
]
