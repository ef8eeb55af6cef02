from .consistency import Clash, ConsistencyReport, check_consistency
from .materialize import (
    Limits, MaterializationDelta, SkolemRecord, materialize, member,
    role_successors, type_triple,
)
from .metrics import OntologyMetrics, metrics
from .scoring import AceScore, UnknownCategory, ace_score
from .skolem import is_skolem, skolem_iri
from .tableau import Reasoner, TableauLimitExceeded, is_satisfiable, is_subsumed
from .taxonomy import Taxonomy, UnknownIndividual, classify, realize

__all__ = [
    "AceScore", "Clash", "ConsistencyReport", "Limits", "MaterializationDelta",
    "OntologyMetrics", "Reasoner", "SkolemRecord", "TableauLimitExceeded",
    "Taxonomy", "UnknownCategory", "UnknownIndividual", "ace_score",
    "check_consistency", "classify", "is_satisfiable", "is_skolem",
    "is_subsumed", "materialize", "member", "metrics", "realize",
    "role_successors", "skolem_iri", "type_triple",
]
