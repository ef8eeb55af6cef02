"""Knowledge-base engine for adverse-childhood-experience surveillance:
ontology model and parsers, an indexed triple store, materialization and
tableau reasoning, a query subset, detection/recommendation rules, scoring,
surveillance workflows, and an interview session service."""

__version__ = "0.1.0"
