"""Well-known IRIs of the shipped vocabulary. Everything lives under one
example namespace; fixtures and configuration may extend or override."""

from __future__ import annotations

from .model import Iri

EX = "http://aceso.example/#"


def ex(local: str) -> Iri:
    return Iri(EX + local)


OWL_THING = Iri("http://www.w3.org/2002/07/owl#Thing")
OWL_NOTHING = Iri("http://www.w3.org/2002/07/owl#Nothing")

SUFFERS_FROM = ex("suffers_from")
LIVES_WITH = ex("lives_with")
HAS_PARENT = ex("has_parent")
HAS_NAME = ex("has_name")
HAS_SYMPTOM = ex("has_symptom")
HAS_ACES_SCORE = ex("has_aces_score")
INCREASES_RISK = ex("increases_risk")
INCREASES_RISK_OF = ex("increases_risk_of")
CAUSAL_FACTOR_FOR = ex("causal_factor_for")
EXHIBITS = ex("exhibits")
LIVES_IN_AREA = ex("lives_in_area")
HAS_ADDRESS_KEY = ex("has_address_key")
FOR_AREA = ex("for_area")
FOR_NHO = ex("for_nho")
RECORD_COUNT = ex("record_count")
AREA = ex("Area")
NHO_FREQUENCY_RECORD = ex("NHO_Frequency_Record")
NEGATIVE_HEALTH_OUTCOME = ex("Negative_Health_Outcome")
PERSON = ex("Person")


def aces_score_class(score: int) -> Iri:
    return ex(f"aces_score_{score}")


def aces_level_individual(score: int) -> Iri:
    """Canonical individual carrying a score class and its risk links."""
    return ex(f"aces_level_{score}")


# The ten default adversity categories counted by the score; the optional
# financial-difficulty category is off unless configuration adds it.
DEFAULT_CATEGORIES: tuple[Iri, ...] = (
    ex("Emotional_Abuse"),
    ex("Physical_Abuse"),
    ex("Sexual_Abuse"),
    ex("Emotional_Neglect"),
    ex("Physical_Neglect"),
    ex("Household_Substance_Abuse"),
    ex("Mental_Illness_In_Household"),
    ex("Domestic_Violence"),
    ex("Incarcerated_Household_Member"),
    ex("Parental_Separation_Or_Divorce"),
)

FINANCIAL_DIFFICULTY = ex("Financial_Difficulty")
