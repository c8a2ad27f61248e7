"""
Monotone policy language: AST, tokenizer and recursive-descent parser

    expr   := term ('OR' term)*
    term   := factor ('AND' factor)*
    factor := NAME | INT 'of' '(' expr (',' expr)+ ')' | '(' expr ')'

Keywords are case-insensitive; AND binds tighter than OR.
"""

import re
from dataclasses import dataclass
from typing import Iterable, List, Optional, Set, Tuple, Union

from scheme.errors import ParameterError, PolicySyntaxError


# ============================================================
# Policy AST Nodes
# ============================================================
@dataclass(frozen=True)
class Leaf:
    name: str


@dataclass(frozen=True)
class And:
    children: Tuple["PolicyExpr", ...]


@dataclass(frozen=True)
class Or:
    children: Tuple["PolicyExpr", ...]


@dataclass(frozen=True)
class Threshold:
    k: int
    children: Tuple["PolicyExpr", ...]

    def __post_init__(self):
        if not 1 <= self.k <= len(self.children):
            raise ParameterError(f"threshold {self.k} of {len(self.children)} is out of range")


PolicyExpr = Union[Leaf, And, Or, Threshold]


def evaluate(expr: PolicyExpr, attributes: Iterable[str]) -> bool:
    """Direct monotone evaluation of the AST"""
    attributes = set(attributes)

    def visit(node: PolicyExpr) -> bool:
        if isinstance(node, Leaf):
            return node.name in attributes
        if isinstance(node, And):
            return all(visit(c) for c in node.children)
        if isinstance(node, Or):
            return any(visit(c) for c in node.children)
        return sum(1 for c in node.children if visit(c)) >= node.k

    return visit(expr)


def leaves(expr: PolicyExpr) -> List[str]:
    """Attribute names in left-to-right order, repeats included"""
    if isinstance(expr, Leaf):
        return [expr.name]
    out: List[str] = []
    for child in expr.children:
        out.extend(leaves(child))
    return out


def attribute_names(expr: PolicyExpr) -> Set[str]:
    return set(leaves(expr))


def policy_to_text(expr: PolicyExpr) -> str:
    """Canonical text that parses back to the same AST"""
    if isinstance(expr, Leaf):
        return expr.name
    inner = [policy_to_text(c) for c in expr.children]
    if isinstance(expr, And):
        return "(" + " AND ".join(inner) + ")"
    if isinstance(expr, Or):
        return "(" + " OR ".join(inner) + ")"
    return f"{expr.k} of (" + ", ".join(inner) + ")"


# ============================================================
# Tokenizer
# ============================================================
@dataclass(frozen=True)
class Token:
    kind: str       # NAME, INT, AND, OR, OF, LPAREN, RPAREN, COMMA, EOF
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[(),])")
_KEYWORDS = {"and": "AND", "or": "OR", "of": "OF"}
_PUNCT = {"(": "LPAREN", ")": "RPAREN", ",": "COMMA"}


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        column = pos - line_start + 1
        if m is None:
            raise PolicySyntaxError(f"unexpected character {text[pos]!r}", line, column, text)
        kind = m.lastgroup
        value = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "int":
            tokens.append(Token("INT", value, line, column))
        elif kind == "name":
            tokens.append(Token(_KEYWORDS.get(value.lower(), "NAME"), value, line, column))
        elif kind == "punct":
            tokens.append(Token(_PUNCT[value], value, line, column))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


# ============================================================
# Parser (recursive descent)
# ============================================================
class Parser:
    def __init__(self, tokens: List[Token], text: Optional[str] = None):
        self.toks = tokens
        self.pos = 0
        self.text = text

    def peek(self) -> Token:
        return self.toks[self.pos]

    def error(self, message: str, tok: Optional[Token] = None) -> PolicySyntaxError:
        tok = tok or self.peek()
        found = "end of input" if tok.kind == "EOF" else repr(tok.text)
        return PolicySyntaxError(f"{message}, found {found}", tok.line, tok.column, self.text)

    def consume(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise self.error(f"expected {what}")
        self.pos += 1
        return tok

    def parse(self) -> PolicyExpr:
        node = self.parse_or()
        if self.peek().kind != "EOF":
            raise self.error("expected AND, OR or end of input")
        return node

    def parse_or(self) -> PolicyExpr:
        children = [self.parse_and()]
        while self.peek().kind == "OR":
            self.pos += 1
            children.append(self.parse_and())
        return children[0] if len(children) == 1 else Or(tuple(children))

    def parse_and(self) -> PolicyExpr:
        children = [self.parse_factor()]
        while self.peek().kind == "AND":
            self.pos += 1
            children.append(self.parse_factor())
        return children[0] if len(children) == 1 else And(tuple(children))

    def parse_factor(self) -> PolicyExpr:
        tok = self.peek()
        if tok.kind == "NAME":
            self.pos += 1
            return Leaf(tok.text)
        if tok.kind == "LPAREN":
            self.pos += 1
            node = self.parse_or()
            self.consume("RPAREN", "')'")
            return node
        if tok.kind == "INT":
            return self.parse_threshold()
        raise self.error("expected attribute name, threshold or '('")

    def parse_threshold(self) -> PolicyExpr:
        k_tok = self.consume("INT", "threshold count")
        self.consume("OF", "'of'")
        self.consume("LPAREN", "'('")
        children = [self.parse_or()]
        while self.peek().kind == "COMMA":
            self.pos += 1
            children.append(self.parse_or())
        self.consume("RPAREN", "')' or ','")
        if len(children) < 2:
            raise self.error("threshold needs at least two operands", k_tok)
        k = int(k_tok.text)
        if not 1 <= k <= len(children):
            raise self.error(f"threshold {k} of {len(children)} is out of range", k_tok)
        return Threshold(k, tuple(children))


def parse_policy(text: str) -> PolicyExpr:
    return Parser(tokenize(text), text).parse()
