import pytest

from acekb.model import (
    And, AtLeast, AtMost, ClassAssertion, DataPropertyAssertion,
    DisjointClasses, EquivalentClasses, NamedClass, Not, Role, RoleChain,
    Some, SubClassOf, SubObjectPropertyOf, TOP,
)
from acekb.syntax import ParseError, UnsupportedConstruct, parse_ontology
from conftest import ex

HEADER = "Prefix(ex:=<http://aceso.example/#>)\nOntology(\n"


def parse_axioms(body: str):
    return parse_ontology(HEADER + body + "\n)").axioms


def test_subclass():
    axioms = parse_axioms("SubClassOf(ex:Verbal_abuse ex:Abuse)")
    assert axioms == (SubClassOf(NamedClass(ex("Verbal_abuse")), NamedClass(ex("Abuse"))),)


def test_equivalence_with_intersection():
    axioms = parse_axioms(
        "EquivalentClasses(ex:Verbal_abuse ObjectIntersectionOf(ex:Abuse "
        "ObjectSomeValuesFrom(ex:has_component ex:Verbal)))")
    assert axioms == (EquivalentClasses((
        NamedClass(ex("Verbal_abuse")),
        And((NamedClass(ex("Abuse")),
             Some(Role(ex("has_component")), NamedClass(ex("Verbal"))))),
    )),)


def test_property_chain():
    axioms = parse_axioms(
        "SubObjectPropertyOf(ObjectPropertyChain(ex:i_p_h_t_r_i_i ex:targets) ex:i_p_h_t_r_i_t)")
    assert axioms == (SubObjectPropertyOf(
        RoleChain((Role(ex("i_p_h_t_r_i_i")), Role(ex("targets")))),
        ex("i_p_h_t_r_i_t")),)


def test_inverse_role_and_thing():
    axioms = parse_axioms(
        "SubClassOf(ObjectSomeValuesFrom(ObjectInverseOf(ex:r) owl:Thing) ex:A)")
    ax = axioms[0]
    assert ax.sub == Some(Role(ex("r"), inverse=True), TOP)


def test_unqualified_cardinality_defaults_to_top():
    axioms = parse_axioms("SubClassOf(ex:A ObjectMaxCardinality(1 ex:has_mother))")
    assert axioms[0].sup == AtMost(1, Role(ex("has_mother")), TOP)
    axioms = parse_axioms("SubClassOf(ex:A ObjectMinCardinality(2 ex:r ex:B))")
    assert axioms[0].sup == AtLeast(2, Role(ex("r")), NamedClass(ex("B")))


def test_assertions():
    axioms = parse_axioms(
        "ClassAssertion(ex:Abuse ex:x)\n"
        "ObjectPropertyAssertion(ex:lives_with ex:a ex:b)\n"
        'DataPropertyAssertion(ex:has_id ex:a "child-1")\n'
        "DataPropertyAssertion(ex:has_age ex:a 9)")
    assert isinstance(axioms[0], ClassAssertion)
    assert axioms[3] == DataPropertyAssertion(ex("has_age"), ex("a"), "9", "integer")


def test_complement_assertion():
    axioms = parse_axioms("ClassAssertion(ObjectComplementOf(ex:Abuse) ex:x)")
    assert axioms[0].cls == Not(NamedClass(ex("Abuse")))


def test_disjoint_requires_named():
    with pytest.raises(ParseError):
        parse_axioms("DisjointClasses(ex:A ObjectComplementOf(ex:B))")
    axioms = parse_axioms("DisjointClasses(ex:A ex:B ex:C)")
    assert isinstance(axioms[0], DisjointClasses)


def test_nominals_unsupported():
    with pytest.raises(UnsupportedConstruct) as err:
        parse_axioms("SubClassOf(ObjectOneOf(ex:a) ex:B)")
    assert err.value.name == "ObjectOneOf"
    assert err.value.span.line >= 2


def test_exact_cardinality_unsupported():
    with pytest.raises(UnsupportedConstruct):
        parse_axioms("SubClassOf(ex:A ObjectExactCardinality(1 ex:r))")


def test_datatype_restriction():
    axioms = parse_axioms(
        "DataPropertyRange(ex:has_age DatatypeRestriction(xsd:integer "
        "minInclusive 0 maxInclusive 120))")
    rng = axioms[0].range
    assert rng.datatype == "integer"
    assert rng.min_inclusive == "0" and rng.max_inclusive == "120"


def test_axiom_order_preserved(seed_ontology):
    subclass_axioms = [ax for ax in seed_ontology.axioms if isinstance(ax, SubClassOf)]
    first = subclass_axioms[0]
    assert first == SubClassOf(NamedClass(ex("Individual")), NamedClass(ex("Person")))


def test_auto_declaration_reported():
    onto = parse_ontology(HEADER + "SubClassOf(ex:Mystery ex:Abuse)\n)")
    assert ex("Mystery") in onto.load_report.classes
    assert ex("Mystery") in onto.classes


def test_seed_has_no_undeclared_symbols(seed_ontology):
    assert seed_ontology.load_report.is_empty()


# every class and property the shipped model diagrams and example queries
# name, under its canonical seed spelling
DIAGRAM_CLASSES = [
    # top-level concept model
    "Person", "ACE", "Social_Determinant_Of_Health", "Intervention",
    "Negative_Health_Outcome",
    # thesaurus-alignment sketch
    "Household_Substance_Abuse", "Individual", "Household", "Alcohol_Abuse",
    "Cancer",
    # general class axioms
    "Injury", "Physical_harm", "Incarcerated", "Criminal_Household_Member",
    "Adult", "Mental_disorder", "Mental_Illness_In_Household",
    "Physical_Abuse", "Domestic_Violence", "Parental_Separation_Or_Divorce",
    # screening query
    "aces_score_4",
]
DIAGRAM_OBJECT_PROPERTIES = [
    "affects", "part_of_household", "suffers_from", "causal_factor_for",
    "lives_with", "has_parent", "has_mother", "inflicted",
    "inflicted_physical_harm", "i_p_h_t_r_i_i", "i_p_h_t_r_i_t", "targets",
    "has_result", "physically_abused_girlfriend",
    "father_physically_abused_mother_of", "physically_abused_by_parent",
    "physically_abused_by_someone_living_in_the_same_home",
    "has_mother_divorced_from_father", "has_mother_separated_from_father",
    "has_symptom", "increases_risk", "has_ressource",
]
DIAGRAM_DATA_PROPERTIES = ["has_id", "has_name", "has_effect_on_a"]


def test_seed_declares_every_diagram_symbol(seed_ontology):
    declared = {ax.iri for ax in seed_ontology.axioms
                if type(ax).__name__ == "Declaration"}
    for name in DIAGRAM_CLASSES + DIAGRAM_OBJECT_PROPERTIES + DIAGRAM_DATA_PROPERTIES:
        assert ex(name) in declared, name
    # alignment placeholders for the external thesauri
    from acekb.model import Iri

    for iri in ("http://snomed.example/#Alcohol_Abuse",
                "http://ncit.example/#Cancer",
                "http://meddra.example/#Depression"):
        assert Iri(iri) in declared, iri
