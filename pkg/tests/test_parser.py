import os
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.constraints.ast import (
    Atom,
    Const,
    Constraint,
    Product,
    Ratio,
    Sum,
    constraint_to_text,
    make_product,
    make_sum,
    numerator_denominator,
    to_text,
)
from src.constraints.parser import load_constraints, parse, parse_file, tokenize
from src.exceptions import CompatibilityError, ConstraintSyntaxError
from src.graph.builder import named_graph
from src.tools.file_utils import list_files

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")
CORPUS = list_files(os.path.join(FIXTURES, "corpus"), [".gc"])
MALFORMED = list_files(os.path.join(FIXTURES, "malformed"), [".gc"])


def graphs_of(constraints):
    return [[a.graph.model_dump() for a in c.atoms()] for c in constraints]


def test_corpus_size():
    assert len(CORPUS) >= 30
    assert len(MALFORMED) >= 10


@pytest.mark.parametrize("path", CORPUS, ids=os.path.basename)
def test_print_parse_round_trip(path):
    parsed = load_constraints(path)
    printed = parsed.to_text()
    reparsed = parse_file(printed)
    assert reparsed.constraints == parsed.constraints
    assert graphs_of(reparsed.constraints) == graphs_of(parsed.constraints)
    assert {k: g.model_dump() for k, g in reparsed.graphs.items()} == \
        {k: g.model_dump() for k, g in parsed.graphs.items()}
    assert reparsed.to_text() == printed


EXPECTED_POSITIONS = {
    "unknown_graph.gc": (1, 24),
    "bad_character.gc": (1, 26),
    "unclosed_paren.gc": (1, 28),
    "missing_rhs.gc": (2, 1),
    "missing_equals.gc": (2, 1),
    "division_by_zero.gc": (1, 24),
    "bad_graph_item.gc": (3, 3),
    "bad_default.gc": (3, 11),
    "fractional_vertices.gc": (2, 12),
    "graph_without_vertices.gc": (1, 7),
    "pair_out_of_range.gc": (1, 7),
    "duplicate_names.gc": (1, 1),
}


@pytest.mark.parametrize("path", MALFORMED, ids=os.path.basename)
def test_malformed_files_rejected_with_position(path):
    with pytest.raises(ConstraintSyntaxError) as info:
        load_constraints(path)
    error = info.value
    assert error.source == path
    assert (error.line, error.column) == EXPECTED_POSITIONS[os.path.basename(path)]
    assert f"{error.line}:{error.column}:" in str(error)


def test_anonymous_constraints_named_by_line():
    constraints = parse("K2 = 1/2\n\nK3 = 1/8\n")
    assert [c.name for c in constraints] == ["line1", "line3"]


def test_precedence_and_folding():
    (c,) = parse("constraint p: K2 + 2 * K3 = 3/4 - K2")
    assert isinstance(c.lhs, Sum)
    assert c.lhs.terms[1] == Product((Const(2), Atom("K3", named_graph("K3"))))
    # a formal fraction of an unrooted density is rejected, constants fold
    with pytest.raises(CompatibilityError):
        parse("constraint q: K2 / K3 = 1")
    (d,) = parse("constraint r: K2 = 6 / 8")
    assert d.rhs == Const(Fraction(3, 4))


def test_decorated_edge_atoms():
    (c,) = parse("constraint z: edge[A0,A2] = 0")
    (atom,) = c.atoms()
    assert atom.name == "edge[A0,A2]"
    assert atom.graph.decorations == ("A0", "A2")
    assert c.is_decorated


def test_compatibility_rules():
    with pytest.raises(CompatibilityError):
        parse("constraint mixed: K2r = K2")
    with pytest.raises(CompatibilityError):
        parse("constraint roots: K2r = cherry-rr")
    (c,) = parse("constraint frac: K2r / K1r = 1/2")
    assert c.is_rooted
    assert isinstance(c.lhs, Ratio)


def test_cross_multiplication():
    (c,) = parse("constraint frac: K2r / K1r = 1/2")
    crossed = c.cross_multiplied()
    assert not crossed.lhs.has_fraction() and not crossed.rhs.has_fraction()
    assert to_text(crossed.lhs) == "K2r"
    assert to_text(crossed.rhs) == "(1/2) * K1r"
    num, den = numerator_denominator(Const(Fraction(1, 2)))
    assert (num, den) == (Const(Fraction(1, 2)), Const(1))


def test_tokens_carry_positions():
    tokens = tokenize("K2 =\n  1/2")
    assert [(t.text, t.line, t.column) for t in tokens[:3]] == [("K2", 1, 1), ("=", 1, 4), ("1", 2, 3)]
    assert tokens[-1].kind == "eof"


def test_hyphenated_names_need_spaces_for_subtraction():
    with pytest.raises(ConstraintSyntaxError):
        parse("constraint h: K2-K3 = 0")
    (c,) = parse("constraint h: K2 - K3 = 0")
    assert isinstance(c.lhs, Sum)


ATOMS = ["K2", "K3", "P3", "C4", "I2", "K2x2-disjoint-free"]

atoms = st.sampled_from(ATOMS).map(lambda name: Atom(name, named_graph(name)))
constants = st.fractions(min_value=-3, max_value=3, max_denominator=6).map(Const)
expressions = st.recursive(
    st.one_of(atoms, constants),
    lambda children: st.one_of(
        st.lists(children, min_size=2, max_size=3).map(make_sum),
        st.lists(children, min_size=2, max_size=3).map(make_product),
    ),
    max_leaves=8,
)


@given(expressions, expressions)
def test_printed_expressions_reparse_to_themselves(lhs, rhs):
    constraint = Constraint("generated", lhs, rhs)
    (reparsed,) = parse(constraint_to_text(constraint))
    assert reparsed == constraint
