"""
Tokenizer and recursive-descent parser for constraint files.

Grammar (EBNF):

    file       = { statement } ;
    statement  = graph_def | constraint ;
    graph_def  = "graph" NAME "{" { graph_item [ ";" ] } "}" ;
    graph_item = "vertices" INT
               | "roots" INT { "," INT }
               | "parts" NAME { "," NAME }
               | "default" ( "edge" | "nonedge" | "free" )
               | ( "edge" | "nonedge" | "free" ) pair { "," pair } ;
    pair       = INT "-" INT ;
    constraint = [ "constraint" NAME ":" ] expr "=" expr ;
    expr       = term { ( "+" | "-" ) term } ;
    term       = factor { ( "*" | "/" ) factor } ;
    factor     = NUMBER | atom | "(" expr ")" | "-" factor ;
    atom       = NAME | "edge" "[" NAME "," NAME "]" ;

A hyphen inside a NAME must be followed by a letter, so subtraction between names needs
spaces (`a - b`). `/` between two constants is exact division; any other `/` is a formal
fraction.
"""
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

from src.constraints.ast import (
    Atom,
    Const,
    Constraint,
    ConstraintFile,
    DensityExpr,
    Ratio,
    check_compatible,
    make_product,
    make_sum,
    negate,
)
from src.exceptions import ConstraintSyntaxError
from src.graph.builder import VOCABULARY, decorated_edge, named_graph
from src.graph.graph_spec import EdgeState, GraphSpec
from src.tools.file_utils import read_file

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(
    r"(?P<space>[ \t\r]+)|(?P<newline>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<number>\d+(?:\.\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z][A-Za-z0-9_]*)*)"
    r"|(?P<symbol>[{}\[\](),:;=+\-*/])"
)

STATES = {"edge": EdgeState.EDGE, "nonedge": EdgeState.NONEDGE, "free": EdgeState.FREE}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str, source: Optional[str] = None) -> List[Token]:
    tokens: List[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ConstraintSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1, source)
        kind = match.lastgroup
        if kind == "newline":
            line, line_start = line + 1, match.end()
        elif kind not in ("space", "comment"):
            tokens.append(Token(kind, match.group(), line, match.start() - line_start + 1))
        pos = match.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class Parser:
    """Parses one constraint file; graph names resolve to local declarations, then the vocabulary."""

    def __init__(self, text: str, source: Optional[str] = None, check: bool = True):
        self.source = source
        self.tokens = tokenize(text, source)
        self.pos = 0
        self.check = check
        self.graphs: Dict[str, GraphSpec] = {}

    # -- token helpers -------------------------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _error(self, message: str, token: Optional[Token] = None) -> ConstraintSyntaxError:
        token = token or self.current
        found = "end of input" if token.kind == "eof" else repr(token.text)
        return ConstraintSyntaxError(f"{message}, found {found}", token.line, token.column, self.source)

    def _at(self, text: str) -> bool:
        return self.current.kind in ("symbol", "name") and self.current.text == text

    def _advance(self) -> Token:
        token = self.current
        self.pos += 1
        return token

    def _expect(self, text: str) -> Token:
        if not self._at(text):
            raise self._error(f"expected '{text}'")
        return self._advance()

    def _expect_kind(self, kind: str, what: str) -> Token:
        if self.current.kind != kind:
            raise self._error(f"expected {what}")
        return self._advance()

    def _int(self) -> int:
        token = self._expect_kind("number", "an integer")
        if "." in token.text:
            raise self._error("expected an integer", token)
        return int(token.text)

    # -- statements ----------------------------------------------------------------------

    def parse_file(self) -> ConstraintFile:
        result = ConstraintFile(source=self.source)
        while self.current.kind != "eof":
            if self._at(";"):
                self._advance()
            elif self._at("graph"):
                name, graph = self._graph_def()
                self.graphs[name] = graph
                result.graphs[name] = graph
            else:
                result.constraints.append(self._constraint())
        names = [c.name for c in result.constraints]
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise ConstraintSyntaxError(f"duplicate constraint names {duplicates}", 1, 1, self.source)
        logger.debug("parsed %d graphs and %d constraints from %s",
                     len(result.graphs), len(result.constraints), self.source or "<text>")
        return result

    def _graph_def(self):
        self._expect("graph")
        name_token = self._expect_kind("name", "a graph name")
        self._expect("{")
        n: Optional[int] = None
        fields: Dict[str, object] = {"edges": [], "nonedges": [], "free": []}
        while not self._at("}"):
            if self._at(";"):
                self._advance()
                continue
            keyword = self._expect_kind("name", "a graph item")
            if keyword.text == "vertices":
                n = self._int()
            elif keyword.text == "roots":
                fields["roots"] = self._int_list()
            elif keyword.text == "parts":
                labels = [self._expect_kind("name", "a part name").text]
                while self._at(","):
                    self._advance()
                    labels.append(self._expect_kind("name", "a part name").text)
                fields["decorations"] = labels
            elif keyword.text == "default":
                state = self._expect_kind("name", "edge, nonedge or free")
                if state.text not in STATES:
                    raise self._error("expected edge, nonedge or free", state)
                fields["default"] = STATES[state.text]
            elif keyword.text in STATES:
                key = {"edge": "edges", "nonedge": "nonedges", "free": "free"}[keyword.text]
                fields[key].extend(self._pair_list())
            else:
                raise self._error("expected a graph item", keyword)
        self._expect("}")
        if n is None:
            raise self._error(f"graph '{name_token.text}' does not declare its vertices", name_token)
        try:
            graph = GraphSpec(n=n, name=name_token.text, **fields)
        except ValueError as exc:
            raise ConstraintSyntaxError(f"invalid graph '{name_token.text}': {exc}",
                                        name_token.line, name_token.column, self.source) from exc
        return name_token.text, graph

    def _int_list(self) -> List[int]:
        values = [self._int()]
        while self._at(","):
            self._advance()
            values.append(self._int())
        return values

    def _pair_list(self):
        pairs = [self._pair()]
        while self._at(","):
            self._advance()
            pairs.append(self._pair())
        return pairs

    def _pair(self):
        i = self._int()
        self._expect("-")
        return (i, self._int())

    def _constraint(self) -> Constraint:
        start = self.current
        name = f"line{start.line}"
        if self._at("constraint"):
            self._advance()
            name = self._expect_kind("name", "a constraint name").text
            self._expect(":")
        lhs = self._expr()
        self._expect("=")
        rhs = self._expr()
        constraint = Constraint(name, lhs, rhs)
        if self.check:
            check_compatible(constraint)
        return constraint

    # -- expressions ---------------------------------------------------------------------

    def _expr(self) -> DensityExpr:
        terms = [self._term()]
        while self._at("+") or self._at("-"):
            op = self._advance()
            term = self._term()
            terms.append(term if op.text == "+" else negate(term))
        return make_sum(terms)

    def _term(self) -> DensityExpr:
        expr = self._factor()
        while self._at("*") or self._at("/"):
            op = self._advance()
            right = self._factor()
            if op.text == "*":
                expr = make_product([expr, right])
            elif isinstance(expr, Const) and isinstance(right, Const):
                if right.value == 0:
                    raise self._error("division by zero", op)
                expr = Const(expr.value / right.value)
            else:
                expr = Ratio(expr, right)
        return expr

    def _factor(self) -> DensityExpr:
        token = self.current
        if token.kind == "number":
            self._advance()
            return Const(Fraction(token.text))
        if self._at("("):
            self._advance()
            inner = self._expr()
            self._expect(")")
            return inner
        if self._at("-"):
            self._advance()
            return negate(self._factor())
        if token.kind == "name":
            return self._atom()
        raise self._error("expected an expression")

    def _atom(self) -> Atom:
        token = self._advance()
        if token.text == "edge" and self._at("["):
            self._advance()
            x = self._expect_kind("name", "a part name").text
            self._expect(",")
            y = self._expect_kind("name", "a part name").text
            self._expect("]")
            return Atom(f"edge[{x},{y}]", decorated_edge(x, y))
        if token.text in self.graphs:
            return Atom(token.text, self.graphs[token.text])
        if token.text in VOCABULARY:
            return Atom(token.text, named_graph(token.text))
        raise self._error(f"unknown graph '{token.text}'", token)


def parse_file(text: str, source: Optional[str] = None) -> ConstraintFile:
    """Parse a constraint file into its graph declarations and constraints."""
    return Parser(text, source).parse_file()


def parse(text: str, source: Optional[str] = None) -> List[Constraint]:
    """
    Parse constraint text.

    Args:
        text (str): Constraint file contents.
        source (Optional[str]): File name used in error messages.

    Returns:
        List[Constraint]: The constraints in file order.

    Raises:
        ConstraintSyntaxError: On malformed input, with line and column.
        CompatibilityError: If the atoms of a constraint have different root graphs.
    """
    return parse_file(text, source).constraints


def load_constraints(path: str) -> ConstraintFile:
    return parse_file(read_file(path), source=path)
