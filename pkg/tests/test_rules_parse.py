import pytest

from acekb.rule_engine import AssertTemplate, NewVar, RecommendAction
from acekb.store import Literal, RDF_TYPE, Resource, Var
from acekb.syntax import DuplicateRuleName, UnboundHeadVariable, parse_rules
from conftest import ex

PREFIXED = "PREFIX ex: <http://aceso.example/#>\n"


def test_detection_rule():
    rs = parse_rules(PREFIXED + """
    RULE physically_abused
    WHEN { ?x ex:has_parent ?y . ?y ex:i_p_h_t_r_i_i ?z . ?z ex:targets ?x . }
    THEN ASSERT { ?x a ex:Physically_Abused . }
    """)
    assert len(rs.rules) == 1
    rule = rs.rules[0]
    assert rule.name == "physically_abused"
    assert len(rule.body) == 3
    assert len(rule.actions) == 1
    template = rule.actions[0]
    assert isinstance(template, AssertTemplate)
    assert template.patterns[0].predicate == Resource(RDF_TYPE)
    assert rule.kind() == "inference"


def test_referral_rule():
    rs = parse_rules(PREFIXED + """
    RULE emotional_neglect_referral
    WHEN { ?p ex:suffers_from ?n . ?n a ex:Emotional_Neglect . }
    THEN RECOMMEND schedule_appointment(?p, "child_psychologist")
    """)
    rule = rs.rules[0]
    action = rule.actions[0]
    assert isinstance(action, RecommendAction)
    assert action.kind == "schedule_appointment"
    assert action.args == (Var("p"), Literal("child_psychologist", "string"))
    assert rule.kind() == "recommendation"


def test_new_skolem_terms():
    rs = parse_rules(PREFIXED + """
    RULE map_flag
    WHEN { ?p ex:flag "yes" . }
    THEN ASSERT { ?p ex:suffers_from NEW(?d) . NEW(?d) a ex:Parental_Separation_Or_Divorce . }
    """)
    template = rs.rules[0].actions[0]
    assert template.patterns[0].object == NewVar("d")
    assert template.patterns[1].subject == NewVar("d")


def test_unbound_head_variable():
    with pytest.raises(UnboundHeadVariable) as err:
        parse_rules(PREFIXED + """
        RULE bad
        WHEN { ?p ex:suffers_from ?d . }
        THEN ASSERT { ?z a ex:Physically_Abused . }
        """)
    assert err.value.variable == "z"


def test_unbound_recommend_argument():
    with pytest.raises(UnboundHeadVariable):
        parse_rules(PREFIXED + """
        RULE bad
        WHEN { ?p ex:suffers_from ?d . }
        THEN RECOMMEND ask_question(?q, "feeling_loved")
        """)


def test_duplicate_rule_name():
    with pytest.raises(DuplicateRuleName):
        parse_rules(PREFIXED + """
        RULE twice WHEN { ?p ex:p ?q . } THEN ASSERT { ?p ex:q ?q . }
        RULE twice WHEN { ?p ex:p ?q . } THEN ASSERT { ?p ex:r ?q . }
        """)


def test_filters_and_multiple_actions():
    rs = parse_rules(PREFIXED + """
    RULE frequent_harm
    WHEN { ?p ex:has_frequency ?f . FILTER(?f >= 3) }
    THEN ASSERT { ?p a ex:Physically_Abused . }
         RECOMMEND notify(?p, "frequent harm recorded")
    """)
    rule = rs.rules[0]
    assert len(rule.filters) == 1
    assert len(rule.actions) == 2


def test_unknown_recommendation_kind():
    with pytest.raises(Exception):
        parse_rules(PREFIXED + """
        RULE bad WHEN { ?p ex:p ?q . } THEN RECOMMEND escalate(?p, "x")
        """)


def test_mapping_kind_derived_against_ontology(seed_ontology):
    rs = parse_rules("""
    PREFIX ex: <http://aceso.example/#>
    PREFIX intake: <http://intake.example/#>
    RULE map_divorce_flag
    WHEN { ?p intake:parents_divorced "yes" . }
    THEN ASSERT { ?p ex:suffers_from NEW(?d) . NEW(?d) a ex:Parental_Separation_Or_Divorce . }
    """)
    assert rs.rules[0].kind(seed_ontology) == "mapping"
