"""Query evaluation over a Graph: basic graph pattern join, filters with
error-as-false semantics, projection, DISTINCT, ORDER BY, LIMIT. Filter
functions are pluggable through an immutable registry; `similarity` is the
built-in resource-feasibility check used by intervention ranking.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from decimal import Decimal
from typing import Callable, Mapping, Union

from .store import Binding, Graph, Literal, Resource, Term, TriplePattern, Var


class QueryError(Exception):
    pass


class UnknownFunction(QueryError):
    def __init__(self, name: str) -> None:
        super().__init__(f"unknown filter function: {name!r}")
        self.name = name


class DuplicateFunction(QueryError):
    def __init__(self, name: str) -> None:
        super().__init__(f"function already registered: {name!r}")
        self.name = name


class UnboundProjection(QueryError):
    def __init__(self, variable: str) -> None:
        super().__init__(f"variable ?{variable} does not occur in the graph pattern")
        self.variable = variable


class FilterTypeError(Exception):
    """Raised inside filter evaluation; the offending binding is dropped."""


# ---------------------------------------------------------------------------
# Filter expressions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Comparison:
    op: str  # = != < <= > >=
    lhs: "Operand"
    rhs: "Operand"


@dataclass(frozen=True)
class BoolAnd:
    operands: tuple["FilterExpr", ...]


@dataclass(frozen=True)
class BoolOr:
    operands: tuple["FilterExpr", ...]


@dataclass(frozen=True)
class BoolNot:
    operand: "FilterExpr"


@dataclass(frozen=True)
class FunctionCall:
    name: str
    args: tuple["Operand", ...]


Operand = Union[Var, Literal, Resource]
FilterExpr = Union[Comparison, BoolAnd, BoolOr, BoolNot, FunctionCall]


def filter_variables(expr: FilterExpr) -> set[str]:
    if isinstance(expr, Comparison):
        return {o.name for o in (expr.lhs, expr.rhs) if isinstance(o, Var)}
    if isinstance(expr, (BoolAnd, BoolOr)):
        return set().union(*(filter_variables(e) for e in expr.operands))
    if isinstance(expr, BoolNot):
        return filter_variables(expr.operand)
    if isinstance(expr, FunctionCall):
        return {a.name for a in expr.args if isinstance(a, Var)}
    raise QueryError(f"not a filter expression: {expr!r}")


def filter_functions(expr: FilterExpr) -> set[str]:
    if isinstance(expr, FunctionCall):
        return {expr.name}
    if isinstance(expr, (BoolAnd, BoolOr)):
        return set().union(set(), *(filter_functions(e) for e in expr.operands))
    if isinstance(expr, BoolNot):
        return filter_functions(expr.operand)
    return set()


# ---------------------------------------------------------------------------
# Query structure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Query:
    kind: str  # ASK | SELECT
    projection: tuple[str, ...] = ()
    distinct: bool = False
    bgp: tuple[TriplePattern, ...] = ()
    filters: tuple[FilterExpr, ...] = ()
    order_by: tuple[tuple[str, str], ...] = ()  # (variable, ASC|DESC)
    limit: int | None = None

    def bgp_variables(self) -> set[str]:
        out: set[str] = set()
        for p in self.bgp:
            out |= p.variables()
        return out


@dataclass(frozen=True)
class ResultTable:
    header: tuple[str, ...]
    rows: tuple[tuple[Term, ...], ...]

    def to_tsv(self, prefixes: Mapping[str, str] | None = None) -> str:
        from .syntax.turtle import render_term

        lines = ["\t".join("?" + v for v in self.header)]
        for row in self.rows:
            lines.append("\t".join(render_term(t, prefixes or {}) for t in row))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Function registry
# ---------------------------------------------------------------------------

FilterFunction = Callable[..., "bool | Term"]


@dataclass(frozen=True)
class FunctionRegistry:
    functions: Mapping[str, FilterFunction] = field(default_factory=dict)

    def get(self, name: str) -> FilterFunction:
        fn = self.functions.get(name)
        if fn is None:
            raise UnknownFunction(name)
        return fn


def register_function(registry: FunctionRegistry, name: str, fn: FilterFunction) -> FunctionRegistry:
    if not name:
        raise QueryError("function name must be nonempty")
    if name in registry.functions:
        raise DuplicateFunction(name)
    table = dict(registry.functions)
    table[name] = fn
    return replace(registry, functions=table)


def numeric_value(term: Term) -> Decimal:
    if isinstance(term, Literal) and term.datatype in ("integer", "decimal"):
        return Decimal(term.lexical)
    raise FilterTypeError(f"not numeric: {term}")


def builtin_similarity(*args: Term) -> bool:
    """Feasibility over alternating (required, available) numeric pairs:
    true iff required_i <= available_i for every pair. The bound is
    inclusive: a requirement exactly equal to the available quantity fits."""
    if len(args) < 2 or len(args) % 2 != 0:
        raise FilterTypeError("similarity needs a positive even number of arguments")
    values = [numeric_value(a) for a in args]
    return all(values[i] <= values[i + 1] for i in range(0, len(values), 2))


def default_registry() -> FunctionRegistry:
    return register_function(FunctionRegistry(), "similarity", builtin_similarity)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

_NUMERIC = ("integer", "decimal")


def compare_terms(op: str, a: Term, b: Term) -> bool:
    if isinstance(a, Resource) or isinstance(b, Resource):
        if op in ("=", "!="):
            if isinstance(a, Resource) != isinstance(b, Resource):
                raise FilterTypeError("cannot compare IRI with literal")
            return (a == b) if op == "=" else (a != b)
        raise FilterTypeError("IRIs admit only = and !=")
    if a.datatype in _NUMERIC and b.datatype in _NUMERIC:
        va, vb = Decimal(a.lexical), Decimal(b.lexical)
    elif a.datatype == b.datatype:
        va, vb = a.value(), b.value()
    else:
        raise FilterTypeError(f"cannot compare {a.datatype} with {b.datatype}")
    return {
        "=": va == vb, "!=": va != vb,
        "<": va < vb, "<=": va <= vb,
        ">": va > vb, ">=": va >= vb,
    }[op]


def _operand(o: Operand, binding: Binding) -> Term:
    if isinstance(o, Var):
        term = binding.get(o.name)
        if term is None:
            raise FilterTypeError(f"unbound variable ?{o.name}")
        return term
    return o


def eval_filter(expr: FilterExpr, binding: Binding, registry: FunctionRegistry) -> bool:
    if isinstance(expr, Comparison):
        return compare_terms(expr.op, _operand(expr.lhs, binding), _operand(expr.rhs, binding))
    if isinstance(expr, BoolAnd):
        return all(eval_filter(e, binding, registry) for e in expr.operands)
    if isinstance(expr, BoolOr):
        return any(eval_filter(e, binding, registry) for e in expr.operands)
    if isinstance(expr, BoolNot):
        return not eval_filter(expr.operand, binding, registry)
    if isinstance(expr, FunctionCall):
        fn = registry.get(expr.name)
        result = fn(*(_operand(a, binding) for a in expr.args))
        if not isinstance(result, bool):
            raise FilterTypeError(f"{expr.name} did not return a boolean")
        return result
    raise QueryError(f"not a filter expression: {expr!r}")


def _passes(binding: Binding, filters: tuple[FilterExpr, ...], registry: FunctionRegistry) -> bool:
    for f in filters:
        try:
            if not eval_filter(f, binding, registry):
                return False
        except FilterTypeError:
            return False  # error-as-false: the binding is dropped
    return True


def _order_key_component(term: Term):
    # totally ordered across types: numerics, then dates, then strings, then IRIs
    if isinstance(term, Literal):
        if term.datatype in _NUMERIC:
            return (0, Decimal(term.lexical), term.lexical)
        if term.datatype == "date":
            return (1, term.value(), term.lexical)
        return (2, term.lexical, "")
    return (3, term.iri.value, "")


def evaluate(
    q: Query, g: Graph, registry: FunctionRegistry | None = None
) -> ResultTable | bool:
    registry = registry if registry is not None else default_registry()
    bgp_vars = q.bgp_variables()
    for v in q.projection:
        if v not in bgp_vars:
            raise UnboundProjection(v)
    for v, _ in q.order_by:
        if v not in bgp_vars:
            raise UnboundProjection(v)
    for f in q.filters:
        for v in filter_variables(f):
            if v not in bgp_vars:
                raise UnboundProjection(v)
        for name in filter_functions(f):
            registry.get(name)  # surface UnknownFunction before matching

    bindings = [b for b in g.match_bgp(list(q.bgp)) if _passes(b, q.filters, registry)]
    if q.kind == "ASK":
        return bool(bindings)

    # pair each projected row with its binding: ORDER BY may use variables
    # that are not projected, and the first binding of a duplicate row wins
    pairs = [(b, tuple(b.get(v) for v in q.projection)) for b in bindings]
    pairs.sort(key=lambda p: tuple(t.sort_key() for t in p[1]))
    if q.distinct:
        seen: set[tuple] = set()
        unique: list[tuple[Binding, tuple[Term, ...]]] = []
        for b, r in pairs:
            key = tuple(t.sort_key() for t in r)
            if key not in seen:
                seen.add(key)
                unique.append((b, r))
        pairs = unique

    # stable sorts from the last ORDER BY key to the first, on top of the
    # deterministic total tie-break applied above
    for v, direction in reversed(q.order_by):
        pairs.sort(key=lambda p: _order_key_component(p[0].get(v)),
                   reverse=direction == "DESC")
    rows = [r for _, r in pairs]
    if q.limit is not None:
        rows = rows[: q.limit]
    return ResultTable(tuple(q.projection), tuple(rows))
