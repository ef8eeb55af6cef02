import itertools

from hypothesis import given, settings
import hypothesis.strategies as st

from acekb.model import (
    And, AtLeast, AtMost, DataRange, DataSome, Iri, NamedClass, Not, Only,
    Or, Role, Some, SubClassOf, TOP, build_ontology,
)
from acekb.reasoning import is_satisfiable, is_subsumed
from conftest import ex
from oracles import model_exists

A, B, C = (NamedClass(ex(n)) for n in "ABC")
r = Role(ex("r"))
EMPTY = build_ontology({}, [])


class TestBasics:
    def test_contradiction(self):
        assert is_satisfiable(And((A, Not(A))), EMPTY) is False

    def test_tautologies(self):
        assert is_satisfiable(Or((A, Not(A))), EMPTY) is True
        assert is_satisfiable(TOP, EMPTY) is True

    def test_everything_below_top(self):
        assert is_subsumed(A, TOP, EMPTY) is True
        assert is_subsumed(And((A, B)), A, EMPTY) is True

    def test_existential_universal_interaction(self):
        # ∃r.A ⊓ ∀r.¬A is unsatisfiable
        assert is_satisfiable(And((Some(r, A), Only(r, Not(A)))), EMPTY) is False
        assert is_satisfiable(And((Some(r, A), Only(r, A))), EMPTY) is True

    def test_defined_verbal_abuse(self, seed_ontology):
        verbal = NamedClass(ex("Verbal_abuse"))
        abuse = NamedClass(ex("Abuse"))
        assert is_satisfiable(And((verbal, Not(abuse))), seed_ontology) is False
        assert is_subsumed(verbal, abuse, seed_ontology) is True
        assert is_subsumed(abuse, verbal, seed_ontology) is False

    def test_complex_definition_reverse_direction(self, seed_ontology):
        # anything that is Abuse with a Verbal component is Verbal_abuse
        lhs = And((NamedClass(ex("Abuse")),
                   Some(Role(ex("has_component")), NamedClass(ex("Verbal")))))
        assert is_subsumed(lhs, NamedClass(ex("Verbal_abuse")), seed_ontology) is True

    def test_role_hierarchy(self, seed_ontology):
        by_mother = Some(Role(ex("has_mother")), NamedClass(ex("Person")))
        by_parent = Some(Role(ex("has_parent")), NamedClass(ex("Person")))
        assert is_subsumed(by_mother, by_parent, seed_ontology) is True
        assert is_subsumed(by_parent, by_mother, seed_ontology) is False

    def test_inverse_roles(self):
        # A ⊓ ∃r.(∀r⁻.¬A): the successor looks back at a ¬A node
        expr = And((A, Some(r, Only(r.flipped(), Not(A)))))
        assert is_satisfiable(expr, EMPTY) is False


class TestCounting:
    def test_atleast_atmost_clash(self):
        assert is_satisfiable(
            And((AtLeast(2, r, A), AtMost(1, r, TOP))), EMPTY) is False

    def test_merging_resolves_overlap(self):
        # ≥1 r.A and ≥1 r.B can merge into one successor under ≤1 r.⊤
        expr = And((AtLeast(1, r, A), AtLeast(1, r, B), AtMost(1, r, TOP)))
        assert is_satisfiable(expr, EMPTY) is True

    def test_merging_blocked_by_disjoint_fillers(self):
        expr = And((AtLeast(1, r, A), AtLeast(1, r, B), AtMost(1, r, TOP)))
        onto = build_ontology({}, [SubClassOf(A, Not(B))])
        assert is_satisfiable(expr, onto) is False

    def test_qualified_atmost_choose_rule(self):
        # ∃r.A ⊓ ∃r.(¬A) is fine under ≤1 r.A
        expr = And((Some(r, A), Some(r, Not(A)), AtMost(1, r, A)))
        assert is_satisfiable(expr, EMPTY) is True

    def test_score_lower_bounds(self, seed_reasoner):
        score4 = NamedClass(ex("aces_score_4"))
        suffers = Role(ex("suffers_from"))
        assert seed_reasoner.is_satisfiable(
            And((score4, AtMost(3, suffers, TOP)))) is False
        assert seed_reasoner.is_satisfiable(
            And((score4, AtMost(4, suffers, TOP)))) is True


class TestDatatypes:
    freq = ex("has_frequency")

    def test_satisfiable_interval(self, seed_reasoner):
        assert seed_reasoner.is_satisfiable(
            DataSome(self.freq, DataRange("integer", "5", "10"))) is True

    def test_global_range_conflict(self, seed_reasoner):
        # has_frequency is declared non-negative
        assert seed_reasoner.is_satisfiable(
            DataSome(self.freq, DataRange("integer", None, "-1"))) is False

    def test_complement_clash(self):
        ds = DataSome(ex("p"), DataRange("integer", "0", "5"))
        assert is_satisfiable(And((ds, Not(ds))), EMPTY) is False

    def test_gap_remains(self):
        want = DataSome(ex("p"), DataRange("integer", "10", "20"))
        deny = DataSome(ex("p"), DataRange("integer", "0", "15"))
        assert is_satisfiable(And((want, Not(deny))), EMPTY) is True

    def test_fully_covered(self):
        want = DataSome(ex("p"), DataRange("integer", "10", "20"))
        deny = DataSome(ex("p"), DataRange("integer", "0", "25"))
        assert is_satisfiable(And((want, Not(deny))), EMPTY) is False

    def test_discrete_adjacency(self):
        # [0,1] ∪ [2,3] covers all of [0,3] on the integer line
        want = DataSome(ex("p"), DataRange("integer", "0", "3"))
        d1 = DataSome(ex("p"), DataRange("integer", "0", "1"))
        d2 = DataSome(ex("p"), DataRange("integer", "2", "3"))
        assert is_satisfiable(And((want, Not(d1), Not(d2))), EMPTY) is False

    def test_dense_gap(self):
        # the same shape leaves room between 1 and 2 on the decimal line
        want = DataSome(ex("p"), DataRange("decimal", "0.0", "3.0"))
        d1 = DataSome(ex("p"), DataRange("decimal", "0.0", "1.0"))
        d2 = DataSome(ex("p"), DataRange("decimal", "2.0", "3.0"))
        assert is_satisfiable(And((want, Not(d1), Not(d2))), EMPTY) is True

    def test_dates_are_discrete_days(self):
        want = DataSome(ex("p"), DataRange("date", "2020-01-01", "2020-01-04"))
        d1 = DataSome(ex("p"), DataRange("date", "2020-01-01", "2020-01-02"))
        d2 = DataSome(ex("p"), DataRange("date", "2020-01-03", "2020-01-04"))
        assert is_satisfiable(And((want, Not(d1), Not(d2))), EMPTY) is False


class TestBlocking:
    def test_cyclic_axiom_terminates(self):
        onto = build_ontology({}, [SubClassOf(A, Some(r, A))])
        assert is_satisfiable(A, onto) is True

    def test_cyclic_with_inverse_terminates(self):
        onto = build_ontology({}, [
            SubClassOf(A, Some(r, A)),
            SubClassOf(A, Only(r.flipped(), B)),
            SubClassOf(B, Some(r, A)),
        ])
        assert is_satisfiable(A, onto) is True


class TestSeedWideChecks:
    def test_every_told_subclass_is_entailed(self, seed_ontology, seed_reasoner):
        for ax in seed_ontology.axioms:
            if isinstance(ax, SubClassOf) and isinstance(ax.sub, NamedClass) \
                    and isinstance(ax.sup, NamedClass):
                assert seed_reasoner.is_subsumed(ax.sub, ax.sup), ax

    def test_subsumption_reflexive_on_sample(self, seed_reasoner, seed_ontology):
        sample = sorted(seed_ontology.classes, key=lambda i: i.value)[::7]
        for cls in sample:
            assert seed_reasoner.is_subsumed(NamedClass(cls), NamedClass(cls))

    def test_subsumption_transitive_on_sample(self, seed_reasoner):
        chain = [ex("Criminal_Household_Member"), ex("Incarcerated_Household_Member"),
                 ex("Household_Dysfunction"), ex("ACE")]
        for a, b in itertools.combinations(chain, 2):
            assert seed_reasoner.is_subsumed(NamedClass(a), NamedClass(b))


# ---------------------------------------------------------------------------
# Finite-model oracle comparison on random ALC inputs
# ---------------------------------------------------------------------------

ALC_CLASSES = [NamedClass(ex(c)) for c in "ABCDEF"]
ALC_ROLES = [Role(ex(n)) for n in ("r", "s")]

alc_class = st.sampled_from(ALC_CLASSES)
alc_role = st.sampled_from(ALC_ROLES)


@st.composite
def alc_concepts(draw, depth=2):
    if depth == 0:
        return draw(alc_class)
    sub = alc_concepts(depth=depth - 1)
    return draw(st.one_of(
        alc_class,
        st.builds(Not, sub),
        st.builds(lambda a, b: And((a, b)), sub, sub),
        st.builds(lambda a, b: Or((a, b)), sub, sub),
        st.builds(Some, alc_role, sub),
        st.builds(Only, alc_role, sub),
    ))


# axiom shapes biased toward ontologies with small models
@st.composite
def alc_axioms(draw):
    shape = draw(st.integers(0, 5))
    a, b, c = draw(alc_class), draw(alc_class), draw(alc_class)
    role = draw(alc_role)
    if shape == 0:
        return SubClassOf(a, b)
    if shape == 1:
        return SubClassOf(a, Not(b))
    if shape == 2:
        return SubClassOf(a, Some(role, b))
    if shape == 3:
        return SubClassOf(a, Only(role, b))
    if shape == 4:
        return SubClassOf(And((a, b)), c)
    return SubClassOf(Some(role, a), b)


@st.composite
def alc_ontologies(draw):
    axioms = draw(st.lists(alc_axioms(), max_size=8))
    return build_ontology({}, axioms)


class TestFiniteModelOracle:
    @given(alc_ontologies(), alc_concepts())
    @settings(max_examples=300, deadline=None)
    def test_small_model_implies_satisfiable(self, onto, concept):
        verdict = is_satisfiable(concept, onto)
        if model_exists(onto, concept, max_domain=3):
            assert verdict is True
        # no small model is not decisive for unsatisfiability; but a
        # tableau SAT verdict must never coexist with a refuted ground case
        if not verdict:
            assert not model_exists(onto, concept, max_domain=3)
