"""
Density expressions and constraints.

Nodes are immutable and compare structurally, so a printed and reparsed constraint
equals the original after normalisation (nested sums and products flattened).
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

from src.exceptions import CompatibilityError
from src.graph.graph_spec import EdgeState, GraphSpec


class DensityExpr:
    """Base class of expression nodes."""

    def children(self) -> Tuple["DensityExpr", ...]:
        return ()

    def atoms(self) -> Iterator["Atom"]:
        for child in self.children():
            yield from child.atoms()

    def has_fraction(self) -> bool:
        return any(child.has_fraction() for child in self.children())


@dataclass(frozen=True)
class Const(DensityExpr):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class Atom(DensityExpr):
    """A graph density d(H, W) (rooted and decorated graphs included)."""

    name: str
    graph: GraphSpec = field(compare=False)

    def atoms(self) -> Iterator["Atom"]:
        yield self


@dataclass(frozen=True)
class Sum(DensityExpr):
    terms: Tuple[DensityExpr, ...]

    def children(self):
        return self.terms


@dataclass(frozen=True)
class Product(DensityExpr):
    factors: Tuple[DensityExpr, ...]

    def children(self):
        return self.factors


@dataclass(frozen=True)
class Ratio(DensityExpr):
    """Formal fraction of two density expressions."""

    numerator: DensityExpr
    denominator: DensityExpr

    def children(self):
        return (self.numerator, self.denominator)

    def has_fraction(self) -> bool:
        return True


def make_sum(terms: List[DensityExpr]) -> DensityExpr:
    flat: List[DensityExpr] = []
    for term in terms:
        flat.extend(term.terms if isinstance(term, Sum) else (term,))
    return flat[0] if len(flat) == 1 else Sum(tuple(flat))


def make_product(factors: List[DensityExpr]) -> DensityExpr:
    flat: List[DensityExpr] = []
    for factor in factors:
        flat.extend(factor.factors if isinstance(factor, Product) else (factor,))
    return flat[0] if len(flat) == 1 else Product(tuple(flat))


def negate(expr: DensityExpr) -> DensityExpr:
    if isinstance(expr, Const):
        return Const(-expr.value)
    return make_product([Const(-1), expr])


@dataclass(frozen=True)
class Constraint:
    """An equality lhs = rhs between density expressions."""

    name: str
    lhs: DensityExpr
    rhs: DensityExpr

    def atoms(self) -> List[Atom]:
        return list(self.lhs.atoms()) + list(self.rhs.atoms())

    @property
    def is_rooted(self) -> bool:
        return any(a.graph.is_rooted for a in self.atoms())

    @property
    def is_decorated(self) -> bool:
        return any(a.graph.is_decorated for a in self.atoms())

    def cross_multiplied(self) -> "Constraint":
        """The fraction-free form N_l * D_r = N_r * D_l."""
        if not (self.lhs.has_fraction() or self.rhs.has_fraction()):
            return self
        ln, ld = numerator_denominator(self.lhs)
        rn, rd = numerator_denominator(self.rhs)
        return Constraint(self.name, _simplify_product([ln, rd]), _simplify_product([rn, ld]))


def numerator_denominator(expr: DensityExpr) -> Tuple[DensityExpr, DensityExpr]:
    """Write an expression as a single formal fraction N / D with fraction-free N and D."""
    one = Const(1)
    if isinstance(expr, (Const, Atom)):
        return expr, one
    if isinstance(expr, Ratio):
        an, ad = numerator_denominator(expr.numerator)
        bn, bd = numerator_denominator(expr.denominator)
        return _simplify_product([an, bd]), _simplify_product([ad, bn])
    if isinstance(expr, Product):
        parts = [numerator_denominator(f) for f in expr.factors]
        return _simplify_product([n for n, _ in parts]), _simplify_product([d for _, d in parts])
    if isinstance(expr, Sum):
        parts = [numerator_denominator(t) for t in expr.terms]
        terms = []
        for i, (n, _) in enumerate(parts):
            terms.append(_simplify_product([n] + [d for j, (_, d) in enumerate(parts) if j != i]))
        return make_sum(terms), _simplify_product([d for _, d in parts])
    raise TypeError(f"unknown expression node {type(expr).__name__}")


def _simplify_product(factors: List[DensityExpr]) -> DensityExpr:
    kept = [f for f in factors if not (isinstance(f, Const) and f.value == 1)]
    return make_product(kept) if kept else Const(1)


# -- compatibility -------------------------------------------------------------------------


def _root_key(graph: GraphSpec) -> Tuple:
    h0 = graph.root_graph()
    return (h0.n, h0.edges, h0.nonedges, h0.free, h0.decorations)


def check_compatible(constraint: Constraint) -> None:
    """
    All atoms of a constraint must be unrooted, or rooted with the same root graph H0.

    Formal fractions are only meaningful between rooted expressions.

    Raises:
        CompatibilityError: If the atoms disagree.
    """
    atoms = constraint.atoms()
    rooted = [a for a in atoms if a.graph.is_rooted]
    if rooted and len(rooted) != len(atoms):
        names = sorted({a.name for a in atoms if not a.graph.is_rooted})
        raise CompatibilityError(f"constraint '{constraint.name}' mixes rooted and unrooted graphs ({', '.join(names)})")
    keys = {_root_key(a.graph) for a in rooted}
    if len(keys) > 1:
        raise CompatibilityError(f"constraint '{constraint.name}' uses graphs with different root graphs")
    if not rooted and (_has_graph_fraction(constraint.lhs) or _has_graph_fraction(constraint.rhs)):
        raise CompatibilityError(f"constraint '{constraint.name}' divides unrooted densities")


def _has_graph_fraction(expr: DensityExpr) -> bool:
    if isinstance(expr, Ratio) and any(True for _ in expr.atoms()):
        return True
    return any(_has_graph_fraction(c) for c in expr.children())


# -- printing ------------------------------------------------------------------------------


def format_const(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"({value.numerator}/{value.denominator})"


def to_text(expr: DensityExpr) -> str:
    """Render an expression in the constraint-file syntax."""
    if isinstance(expr, Const):
        return format_const(expr.value)
    if isinstance(expr, Atom):
        return expr.name
    if isinstance(expr, Sum):
        return " + ".join(_wrap(t, (Sum,)) for t in expr.terms)
    if isinstance(expr, Product):
        return " * ".join(_wrap(f, (Sum, Product, Ratio)) for f in expr.factors)
    if isinstance(expr, Ratio):
        return f"{_wrap(expr.numerator, (Sum, Product, Ratio))} / {_wrap(expr.denominator, (Sum, Product, Ratio))}"
    raise TypeError(f"unknown expression node {type(expr).__name__}")


def _wrap(expr: DensityExpr, kinds) -> str:
    text = to_text(expr)
    return f"({text})" if isinstance(expr, kinds) else text


def graph_to_text(name: str, graph: GraphSpec) -> str:
    """A `graph` block declaring a named graph."""
    lines = [f"graph {name} {{", f"  vertices {graph.n}"]
    if graph.roots:
        lines.append("  roots " + ", ".join(str(r) for r in graph.roots))
    if graph.decorations is not None:
        lines.append("  parts " + ", ".join(graph.decorations))
    lines.append(f"  default {graph.default.value}")
    listed = {EdgeState.EDGE: graph.edges, EdgeState.NONEDGE: graph.nonedges, EdgeState.FREE: graph.free}
    for state, pairs in listed.items():
        if state != graph.default and pairs:
            lines.append(f"  {state.value} " + ", ".join(f"{i}-{j}" for i, j in pairs))
    lines.append("}")
    return "\n".join(lines)


def constraint_to_text(constraint: Constraint) -> str:
    return f"constraint {constraint.name}: {to_text(constraint.lhs)} = {to_text(constraint.rhs)}"


@dataclass
class ConstraintFile:
    """Parsed contents of a constraint file: graph declarations and constraints in order."""

    graphs: Dict[str, GraphSpec] = field(default_factory=dict)
    constraints: List[Constraint] = field(default_factory=list)
    source: Optional[str] = None

    def to_text(self) -> str:
        blocks = [graph_to_text(name, graph) for name, graph in self.graphs.items()]
        blocks.extend(constraint_to_text(c) for c in self.constraints)
        return "\n\n".join(blocks) + "\n"
