"""Functional-style ontology grammar covering exactly the supported
fragment: Prefix declarations, an Ontology(...) wrapper, declaration /
class / property / assertion axioms, and the boolean, restriction,
cardinality, inverse, and data-restriction expression constructors.
Constructs outside the fragment (nominals, exact cardinality, ...) raise
UnsupportedConstruct with their source location."""

from __future__ import annotations

from ..model import (
    And, AtLeast, AtMost, BOTTOM, ClassAssertion, ClassExpression,
    DataPropertyAssertion, DataPropertyRange, DataRange, DataSome,
    Declaration, DisjointClasses, EquivalentClasses, Iri,
    InverseObjectProperties, NamedClass, Not, ObjectPropertyAssertion,
    ObjectPropertyDomain, ObjectPropertyRange, Ontology, Or, Role, RoleChain,
    Some, SubClassOf, SubObjectPropertyOf, TOP, Only, build_ontology,
)
from ..store import XSD
from . import lex
from .errors import ParseError, UnsupportedConstruct
from .lex import Cursor
from .turtle import BUILTIN_PREFIXES, XSD_TO_KIND

OWL_THING = "http://www.w3.org/2002/07/owl#Thing"
OWL_NOTHING = "http://www.w3.org/2002/07/owl#Nothing"

# recognized-but-rejected OWL keywords, reported as outside the fragment
_UNSUPPORTED = {
    "ObjectOneOf", "ObjectHasValue", "ObjectHasSelf", "ObjectExactCardinality",
    "DataAllValuesFrom", "DataHasValue", "DataExactCardinality",
    "DataMinCardinality", "DataMaxCardinality", "DataIntersectionOf",
    "DataUnionOf", "DataComplementOf", "DataOneOf", "HasKey",
    "SameIndividual", "DifferentIndividuals", "FunctionalObjectProperty",
    "InverseFunctionalObjectProperty", "TransitiveObjectProperty",
    "SymmetricObjectProperty", "AsymmetricObjectProperty",
    "ReflexiveObjectProperty", "IrreflexiveObjectProperty",
    "FunctionalDataProperty", "AnnotationAssertion", "SubDataPropertyOf",
    "EquivalentObjectProperties", "EquivalentDataProperties",
    "DisjointObjectProperties", "DisjointUnion", "DataPropertyDomain",
    "NegativeObjectPropertyAssertion", "NegativeDataPropertyAssertion",
}

_DECL_KINDS = {
    "Class": "class",
    "ObjectProperty": "object_property",
    "DataProperty": "data_property",
    "NamedIndividual": "individual",
}


class _Parser:
    def __init__(self, text: str) -> None:
        self.cur = Cursor(lex.tokenize(text))
        self.prefixes: dict[str, str] = dict(BUILTIN_PREFIXES)

    def _iri(self) -> Iri:
        from .turtle import parse_iri

        return parse_iri(self.cur, self.prefixes)

    def _maybe_unsupported(self) -> None:
        tok = self.cur.peek()
        if tok.kind == lex.NAME and tok.text in _UNSUPPORTED:
            raise UnsupportedConstruct(tok.text, tok.span)

    # -- expressions --------------------------------------------------------

    def class_expr(self) -> ClassExpression:
        self._maybe_unsupported()
        tok = self.cur.peek()
        if tok.kind == lex.NAME and self.cur.peek2().text == "(":
            keyword = tok.text
            self.cur.next()
            self.cur.expect(lex.PUNCT, "(")
            expr = self._class_constructor(keyword, tok)
            self.cur.expect(lex.PUNCT, ")")
            return expr
        iri = self._iri()
        if iri.value == OWL_THING:
            return TOP
        if iri.value == OWL_NOTHING:
            return BOTTOM
        return NamedClass(iri)

    def _class_constructor(self, keyword: str, tok: lex.Token) -> ClassExpression:
        if keyword == "ObjectIntersectionOf":
            return And(tuple(self._expr_list()))
        if keyword == "ObjectUnionOf":
            return Or(tuple(self._expr_list()))
        if keyword == "ObjectComplementOf":
            return Not(self.class_expr())
        if keyword == "ObjectSomeValuesFrom":
            return Some(self.role(), self.class_expr())
        if keyword == "ObjectAllValuesFrom":
            return Only(self.role(), self.class_expr())
        if keyword in ("ObjectMinCardinality", "ObjectMaxCardinality"):
            n = int(self.cur.expect(lex.INTEGER).text)
            role = self.role()
            filler = TOP if self.cur.at(lex.PUNCT, ")") else self.class_expr()
            cls = AtLeast if keyword == "ObjectMinCardinality" else AtMost
            return cls(n, role, filler)
        if keyword == "DataSomeValuesFrom":
            prop = self._iri()
            return DataSome(prop, self.data_range())
        raise UnsupportedConstruct(keyword, tok.span)

    def _expr_list(self) -> list[ClassExpression]:
        out = [self.class_expr()]
        while not self.cur.at(lex.PUNCT, ")"):
            out.append(self.class_expr())
        if len(out) < 2:
            self.cur.fail("at least two class expressions")
        return out

    def role(self) -> Role:
        if self.cur.at(lex.NAME, "ObjectInverseOf"):
            self.cur.next()
            self.cur.expect(lex.PUNCT, "(")
            iri = self._iri()
            self.cur.expect(lex.PUNCT, ")")
            return Role(iri, inverse=True)
        return Role(self._iri())

    def data_range(self) -> DataRange:
        if self.cur.at(lex.NAME, "DatatypeRestriction"):
            self.cur.next()
            self.cur.expect(lex.PUNCT, "(")
            base = self._datatype()
            lo = hi = None
            while not self.cur.at(lex.PUNCT, ")"):
                facet_tok = self.cur.expect(lex.NAME)
                facet = facet_tok.text.split(":")[-1]
                value = self._facet_value()
                if facet == "minInclusive":
                    lo = value
                elif facet == "maxInclusive":
                    hi = value
                else:
                    raise UnsupportedConstruct(facet_tok.text, facet_tok.span)
            self.cur.expect(lex.PUNCT, ")")
            try:
                return DataRange(base, lo, hi)
            except Exception as exc:
                self.cur.fail(f"a valid facet restriction ({exc})")
        return DataRange(self._datatype())

    def _datatype(self) -> str:
        tok = self.cur.peek()
        iri = self._iri()
        kind = XSD_TO_KIND.get(iri.value)
        if kind is None:
            raise ParseError(tok.span, "one of xsd:integer/decimal/date/string", iri.value)
        return kind

    def _facet_value(self) -> str:
        if self.cur.at(lex.STRING):
            tok = self.cur.next()
            if self.cur.take(lex.PUNCT, "^^"):
                self._iri()  # facet datatype annotation is redundant here
            return tok.value
        if self.cur.at(lex.INTEGER) or self.cur.at(lex.DECIMAL):
            return self.cur.next().text
        return self.cur.fail("a facet value")

    def _literal(self) -> tuple[str, str]:
        if self.cur.at(lex.INTEGER):
            return self.cur.next().text, "integer"
        if self.cur.at(lex.DECIMAL):
            return self.cur.next().text, "decimal"
        tok = self.cur.expect(lex.STRING)
        datatype = "string"
        if self.cur.take(lex.PUNCT, "^^"):
            iri_tok = self.cur.peek()
            iri = self._iri()
            datatype = XSD_TO_KIND.get(iri.value)
            if datatype is None:
                raise ParseError(
                    iri_tok.span, "one of xsd:integer/decimal/date/string", iri.value)
        return tok.value, datatype

    # -- axioms ---------------------------------------------------------------

    def axiom(self):
        self._maybe_unsupported()
        tok = self.cur.expect(lex.NAME)
        keyword = tok.text
        self.cur.expect(lex.PUNCT, "(")
        ax = self._axiom_body(keyword, tok)
        self.cur.expect(lex.PUNCT, ")")
        return ax

    def _axiom_body(self, keyword: str, tok: lex.Token):
        if keyword == "Declaration":
            kind_tok = self.cur.expect(lex.NAME)
            if kind_tok.text not in _DECL_KINDS:
                raise UnsupportedConstruct(kind_tok.text, kind_tok.span)
            self.cur.expect(lex.PUNCT, "(")
            iri = self._iri()
            self.cur.expect(lex.PUNCT, ")")
            return Declaration(_DECL_KINDS[kind_tok.text], iri)
        if keyword == "SubClassOf":
            return SubClassOf(self.class_expr(), self.class_expr())
        if keyword == "EquivalentClasses":
            return EquivalentClasses(tuple(self._expr_list()))
        if keyword == "DisjointClasses":
            ops = self._expr_list()
            named = []
            for op in ops:
                if not isinstance(op, NamedClass):
                    raise ParseError(tok.span, "named classes in DisjointClasses",
                                     type(op).__name__)
                named.append(op)
            return DisjointClasses(tuple(named))
        if keyword == "SubObjectPropertyOf":
            if self.cur.at(lex.NAME, "ObjectPropertyChain"):
                self.cur.next()
                self.cur.expect(lex.PUNCT, "(")
                roles = [self.role()]
                while not self.cur.at(lex.PUNCT, ")"):
                    roles.append(self.role())
                self.cur.expect(lex.PUNCT, ")")
                if len(roles) < 2:
                    self.cur.fail("a chain of at least two roles")
                sub: Role | RoleChain = RoleChain(tuple(roles))
            else:
                sub = self.role()
            sup = self._iri()
            return SubObjectPropertyOf(sub, sup)
        if keyword == "InverseObjectProperties":
            return InverseObjectProperties(self._iri(), self._iri())
        if keyword == "ObjectPropertyDomain":
            return ObjectPropertyDomain(self._iri(), self.class_expr())
        if keyword == "ObjectPropertyRange":
            return ObjectPropertyRange(self._iri(), self.class_expr())
        if keyword == "DataPropertyRange":
            return DataPropertyRange(self._iri(), self.data_range())
        if keyword == "ClassAssertion":
            return ClassAssertion(self.class_expr(), self._iri())
        if keyword == "ObjectPropertyAssertion":
            return ObjectPropertyAssertion(self._iri(), self._iri(), self._iri())
        if keyword == "DataPropertyAssertion":
            prop = self._iri()
            subject = self._iri()
            value, datatype = self._literal()
            return DataPropertyAssertion(prop, subject, value, datatype)
        if keyword in _UNSUPPORTED:
            raise UnsupportedConstruct(keyword, tok.span)
        raise ParseError(tok.span, "an axiom keyword", keyword)

    def document(self) -> Ontology:
        while self.cur.at(lex.NAME, "Prefix"):
            self.cur.next()
            self.cur.expect(lex.PUNCT, "(")
            name_tok = self.cur.expect(lex.NAME)
            if not name_tok.text.endswith(":"):
                self.cur.fail("a prefix name ending in ':'")
            self.cur.expect(lex.PUNCT, "=")
            iri_tok = self.cur.expect(lex.IRIREF)
            self.prefixes[name_tok.text[:-1]] = iri_tok.text[1:-1]
            self.cur.expect(lex.PUNCT, ")")
        self.cur.expect(lex.NAME, "Ontology")
        self.cur.expect(lex.PUNCT, "(")
        axioms = []
        while not self.cur.at(lex.PUNCT, ")"):
            axioms.append(self.axiom())
        self.cur.expect(lex.PUNCT, ")")
        if not self.cur.at(lex.EOF):
            self.cur.fail("end of input")
        return build_ontology(self.prefixes, axioms)


def parse_ontology(text: str) -> Ontology:
    """Ontology with axioms in source order; symbols used without a
    Declaration are auto-declared and listed in the load report."""
    return _Parser(text).document()
