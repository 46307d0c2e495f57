"""Textual germ expressions: parsing, Taylor expansion, normalization.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | base ('^' natural)?
    base   := rational | 'v' | 'theta' | 'exp' '(' expr ')' | '(' expr ')'

Rationals are integers or ``p/q`` literals.
"""

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .germ import ExpandedGerm, KnownRegion
from .puiseux import PuiseuxPoly

DEFAULT_ORDER = 12


class ParseError(ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class DegenerateInput(ValueError):
    """The germ is constant in v or in theta after normalization."""


# -- AST ---------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str  # 'v' or 'theta'


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str  # '+', '-', '*'
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


@dataclass(frozen=True)
class Exp:
    arg: object


def contains_exp(node):
    if isinstance(node, Exp):
        return True
    if isinstance(node, (Neg, Pow)):
        return contains_exp(node.operand if isinstance(node, Neg) else node.base)
    if isinstance(node, BinOp):
        return contains_exp(node.left) or contains_exp(node.right)
    return False


def count_exp(node):
    if isinstance(node, Exp):
        return 1 + count_exp(node.arg)
    if isinstance(node, Neg):
        return count_exp(node.operand)
    if isinstance(node, Pow):
        return count_exp(node.base)
    if isinstance(node, BinOp):
        return count_exp(node.left) + count_exp(node.right)
    return 0


# -- tokenizer / parser ------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(theta|exp|v)|(\S))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("num", m.group(1), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*^()/":
                raise ParseError(f"unexpected character {ch!r}", start)
            tokens.append(("op", ch, start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, off = self.take()
        if text != value:
            raise ParseError(f"expected {value!r}, found {text or 'end of input'!r}", off)

    def parse(self):
        node = self.expr()
        kind, text, off = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected {text!r}", off)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            node = BinOp("*", node, self.factor())
        return node

    def factor(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.factor())
        node = self.base()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            kind, text, off = self.peek()
            if kind != "num":
                raise ParseError("non-integer exponent", off)
            self.take()
            nxt = self.peek()
            if nxt[:2] == ("op", "/"):
                raise ParseError("non-integer exponent", off)
            node = Pow(node, int(text))
        return node

    def base(self):
        kind, text, off = self.take()
        if kind == "num":
            value = Fraction(int(text))
            if self.peek()[:2] == ("op", "/"):
                self.take()
                k2, t2, o2 = self.take()
                if k2 != "num":
                    raise ParseError("expected denominator of rational literal", o2)
                if int(t2) == 0:
                    raise ParseError("zero denominator", o2)
                value = Fraction(int(text), int(t2))
            return Num(value)
        if kind == "name":
            if text == "exp":
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Exp(arg)
            return Var(text)
        if text == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {text or 'end of input'!r}", off)


def parse(text):
    """Parse a germ expression into an AST.

    >>> parse("v*(exp(theta)-1)")
    BinOp(op='*', left=Var(name='v'), right=BinOp(op='-', left=Exp(arg=Var(name='theta')), right=Num(value=Fraction(1, 1))))
    """
    ast = _Parser(text).parse()
    _check_exp_args(ast)
    return ast


def _check_exp_args(node):
    if isinstance(node, Exp):
        if _expand(node.arg, 1).coeff(0, 0):
            raise ParseError("exp of an argument that does not vanish at the origin", 0)
        _check_exp_args(node.arg)
    elif isinstance(node, Neg):
        _check_exp_args(node.operand)
    elif isinstance(node, Pow):
        _check_exp_args(node.base)
    elif isinstance(node, BinOp):
        _check_exp_args(node.left)
        _check_exp_args(node.right)


# -- expansion ---------------------------------------------------------------


def _trunc(poly, order):
    return poly.filter(lambda p, q: p + q <= order)


def _expand(node, order):
    if isinstance(node, Num):
        return PuiseuxPoly.const(node.value)
    if isinstance(node, Var):
        return PuiseuxPoly.v() if node.name == "v" else PuiseuxPoly.theta()
    if isinstance(node, Neg):
        return -_expand(node.operand, order)
    if isinstance(node, BinOp):
        a, b = _expand(node.left, order), _expand(node.right, order)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        return _trunc(a * b, order)
    if isinstance(node, Pow):
        base = _expand(node.base, order)
        out = PuiseuxPoly.const(Fraction(1))
        for _ in range(node.exponent):
            out = _trunc(out * base, order)
        return out
    if isinstance(node, Exp):
        arg = _expand(node.arg, order)
        out = PuiseuxPoly.const(Fraction(1))
        power = PuiseuxPoly.const(Fraction(1))
        for k in range(1, order + 1):
            power = _trunc(power * arg, order) * Fraction(1, k)
            if not power:
                break
            out = out + power
        return out
    raise TypeError(f"unknown node {node!r}")


def _total_degree(node):
    if isinstance(node, Num):
        return 0
    if isinstance(node, Var):
        return 1
    if isinstance(node, Neg):
        return _total_degree(node.operand)
    if isinstance(node, Pow):
        return _total_degree(node.base) * node.exponent
    if isinstance(node, BinOp):
        a, b = _total_degree(node.left), _total_degree(node.right)
        return a + b if node.op == "*" else max(a, b)
    return math.inf


def expand(ast, order=DEFAULT_ORDER):
    """Taylor-expand an AST to total degree ``order``."""
    if order < 2:
        raise ValueError("truncation order must be at least 2")
    if contains_exp(ast):
        poly = _trunc(_expand(ast, order), order)
        return ExpandedGerm(poly, order, exact=False, known=KnownRegion.total_degree(order))
    # exact polynomial input: keep it whole, widening the order if needed
    order = max(order, _total_degree(ast))
    return ExpandedGerm(_expand(ast, order), order, exact=True)


def normalize(g):
    """Drop the constant and linear-theta terms and check the germ is nontrivial."""
    poly = g.poly.filter(lambda p, q: not (p == 0 and q in (0, 1)))
    if not poly:
        raise DegenerateInput("empty support after normalization")
    if not any(p > 0 and q > 0 for p, q in poly.terms):
        raise DegenerateInput("germ is constant in v or constant in theta (no c_{p,q} with p, q > 0)")
    return g.replace(poly)


def germ_from_text(text, order=DEFAULT_ORDER):
    return normalize(expand(parse(text), order))


def evaluate_ast(node, v, theta):
    """Direct floating-point evaluation, used to cross-check expansions."""
    if isinstance(node, Num):
        return float(node.value)
    if isinstance(node, Var):
        return v if node.name == "v" else theta
    if isinstance(node, Neg):
        return -evaluate_ast(node.operand, v, theta)
    if isinstance(node, Pow):
        return evaluate_ast(node.base, v, theta) ** node.exponent
    if isinstance(node, Exp):
        return math.exp(evaluate_ast(node.arg, v, theta))
    a, b = evaluate_ast(node.left, v, theta), evaluate_ast(node.right, v, theta)
    return a + b if node.op == "+" else a - b if node.op == "-" else a * b
