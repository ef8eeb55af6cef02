import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from acekb.config import load_config
from acekb.engine import Engine
from acekb.model import (
    And, AtLeast, AtMost, DataRange, DataSome, Iri, NamedClass, Not, Only,
    Or, Role, Some,
)
from acekb.store import Graph, Literal, Resource, Triple, TriplePattern, Var
from acekb.syntax import parse_ontology, parse_turtle

DATA = ROOT / "data"
FIXTURES = ROOT / "fixtures"
EX = "http://aceso.example/#"


def ex(local: str) -> Iri:
    return Iri(EX + local)


@pytest.fixture(scope="session")
def seed_ontology():
    return parse_ontology((DATA / "aceso_seed.ofn").read_text())


@pytest.fixture(scope="session")
def seed_reasoner(seed_ontology):
    from acekb.reasoning import Reasoner

    return Reasoner(seed_ontology)


@pytest.fixture(scope="session")
def seed_taxonomy(seed_ontology, seed_reasoner):
    from acekb.reasoning import classify

    return classify(seed_ontology, seed_reasoner)


def load_fixture_graph(name: str) -> Graph:
    triples, _ = parse_turtle((FIXTURES / name).read_text())
    return Graph(triples)


@pytest.fixture()
def fig_graph():
    """The three-edge physical-abuse case graph."""
    return load_fixture_graph("physical_abuse_case.ttl")


@pytest.fixture(scope="session")
def base_engine():
    return Engine.from_config(load_config(DATA / "engine.conf"))


def make_engine(*extra_data: str, rules=("interview.rules",)) -> Engine:
    cfg = load_config(DATA / "engine.conf", check_paths=False).with_overrides(
        data_paths=tuple(FIXTURES / name for name in extra_data),
        rule_paths=tuple(DATA / r for r in rules),
    )
    return Engine.from_config(cfg)


# ---------------------------------------------------------------------------
# Hypothesis strategies
# ---------------------------------------------------------------------------

IRIS = [ex(f"n{i}") for i in range(8)]
PROPS = [ex(f"p{i}") for i in range(4)]
CLASSES = [ex(c) for c in "ABCDEF"]
ROLES = [ex(r) for r in ("r", "s", "t")]

resources = st.sampled_from([Resource(i) for i in IRIS])
literals = st.one_of(
    st.integers(-5, 5).map(lambda n: Literal(str(n), "integer")),
    st.sampled_from(["0.5", "1.25", "2.0"]).map(lambda s: Literal(s, "decimal")),
    st.sampled_from(["a", "b", "zed"]).map(lambda s: Literal(s, "string")),
)
terms = st.one_of(resources, literals)
predicates = st.sampled_from([Resource(i) for i in PROPS])


@st.composite
def triples_strategy(draw):
    return Triple(draw(resources), draw(predicates), draw(terms))


@st.composite
def graphs(draw, max_size: int = 30):
    return Graph(draw(st.lists(triples_strategy(), max_size=max_size)))


VARIABLES = ["x", "y", "z", "w"]


@st.composite
def triple_patterns(draw):
    def position(value_strategy):
        return st.one_of(
            st.sampled_from(VARIABLES).map(Var), value_strategy)

    return TriplePattern(
        draw(position(resources)),
        draw(position(predicates)),
        draw(position(terms)),
    )


@st.composite
def bgps(draw, max_patterns: int = 4):
    return draw(st.lists(triple_patterns(), min_size=1, max_size=max_patterns))


@st.composite
def class_expressions(draw, depth: int = 3, allow_counting: bool = True,
                      allow_data: bool = True):
    """Random expressions over a small signature, biased shallow."""
    leaves = [st.sampled_from([NamedClass(c) for c in CLASSES])]
    if allow_data:
        leaves.append(st.builds(
            DataSome,
            st.sampled_from(PROPS[:2]),
            st.sampled_from([
                DataRange("integer"),
                DataRange("integer", "0", "5"),
                DataRange("integer", "2", None),
            ]),
        ))
    leaf = st.one_of(*leaves)
    if depth == 0:
        return draw(leaf)
    sub = class_expressions(
        depth=depth - 1, allow_counting=allow_counting, allow_data=allow_data)
    role = st.builds(Role, st.sampled_from(ROLES), st.booleans())
    options = [
        leaf,
        st.builds(Not, sub),
        st.builds(lambda a, b: And((a, b)), sub, sub),
        st.builds(lambda a, b: Or((a, b)), sub, sub),
        st.builds(Some, role, sub),
        st.builds(Only, role, sub),
    ]
    if allow_counting:
        options.append(st.builds(AtLeast, st.integers(0, 3), role, sub))
        options.append(st.builds(AtMost, st.integers(0, 3), role, sub))
    return draw(st.one_of(*options))


@st.composite
def interpretations(draw, max_domain: int = 3):
    k = draw(st.integers(1, max_domain))
    domain = range(k)
    classes = {
        c.value: set(draw(st.lists(st.integers(0, k - 1), max_size=k)))
        for c in CLASSES
    }
    roles = {
        r.value: set(draw(st.lists(
            st.tuples(st.integers(0, k - 1), st.integers(0, k - 1)), max_size=k * k)))
        for r in ROLES
    }
    data = {
        p.value: {
            i: set(draw(st.lists(st.integers(-1, 6), max_size=2)))
            for i in domain
        }
        for p in PROPS[:2]
    }
    return domain, classes, roles, data
