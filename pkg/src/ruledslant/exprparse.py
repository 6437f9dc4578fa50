"""Scalar expressions in one variable: parser, printer and evaluators.

Grammar (loosest to tightest)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("-" | "+") unary | power
    power   := atom ("^" unary)?          # right-associative
    atom    := NUMBER | NAME | NAME "(" expr ("," expr)* ")" | "(" expr ")"

so ``-2^2`` is ``-(2^2)`` and ``2^3^2`` is ``2^(3^2)``.  Implicit
multiplication is not accepted.  Evaluation never returns NaN or infinity;
domain violations raise :class:`ExprDomainError`.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import taylor
from .errors import ExprArityError, ExprDomainError, ExprNameError, ExprSyntaxError
from .taylor import Jet

FUNCTIONS = ("sin", "cos", "tan", "sqrt", "exp", "log", "abs", "atan")
CONSTANTS = {"pi": math.pi, "e": math.e}


# -- AST ---------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Const, Var, Neg, BinOp, Call]


@dataclass(frozen=True)
class ExprAST:
    """A parsed expression together with the name of its free variable."""

    root: Node
    var: str = "s"
    source: str = ""

    def __call__(self, x):
        if np.ndim(x) == 0:
            return evaluate(self, float(x))
        return evaluate_array(self, x)

    def __str__(self):
        return to_text(self)

    @property
    def is_constant(self) -> bool:
        return not _has_var(self.root)


# -- tokenizer / parser ------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>\*\*|[-+*/^(),]))"
)


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def _tokenize(text: str):
    tokens = []
    pos = 0
    while text[pos:].strip():
        m = _TOKEN.match(text, pos)
        if m is None:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected character {text[bad]!r}", _byte_offset(text, bad))
        kind = m.lastgroup
        value = m.group(kind)
        if kind == "op" and value == "**":
            value = "^"
        tokens.append((kind, value, _byte_offset(text, m.start(kind))))
        pos = m.end()
    tokens.append(("end", "", _byte_offset(text, len(text))))
    return tokens


class _Parser:
    def __init__(self, text: str, var: str):
        self.text = text
        self.var = var
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, v, off = self.take()
        if v != value or kind == "end":
            what = "end of input" if kind == "end" else repr(v)
            raise ExprSyntaxError(f"expected {value!r}, found {what}", off)

    def parse(self) -> Node:
        node = self.expr()
        kind, v, off = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {v!r}", off)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        kind, v, _ = self.peek()
        if kind == "op" and v == "-":
            self.take()
            return Neg(self.unary())
        if kind == "op" and v == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Node:
        kind, v, off = self.take()
        if kind == "num":
            return Num(float(v))
        if kind == "name":
            if self.peek()[1] == "(" and self.peek()[0] == "op":
                if v not in FUNCTIONS:
                    raise ExprNameError(f"unknown function {v!r}", off)
                self.take()
                args = [self.expr()]
                while self.peek()[1] == "," and self.peek()[0] == "op":
                    self.take()
                    args.append(self.expr())
                self.expect(")")
                if len(args) != 1:
                    raise ExprArityError(f"{v}() takes 1 argument, got {len(args)}", off)
                return Call(v, args[0])
            if v == self.var:
                return Var(v)
            if v in CONSTANTS:
                return Const(v)
            if v in FUNCTIONS:
                raise ExprArityError(f"{v} is a function and needs an argument", off)
            raise ExprNameError(f"unknown identifier {v!r}", off)
        if kind == "op" and v == "(":
            node = self.expr()
            self.expect(")")
            return node
        what = "end of input" if kind == "end" else repr(v)
        raise ExprSyntaxError(f"expected an operand, found {what}", off)


def parse(text: str, var: str = "s") -> ExprAST:
    """Parse ``text`` into an :class:`ExprAST` whose free variable is ``var``."""
    if not isinstance(text, str) or not text.strip():
        raise ExprSyntaxError("empty expression", 0)
    if var in CONSTANTS or var in FUNCTIONS:
        raise ExprNameError(f"variable name {var!r} shadows a builtin", 0)
    return ExprAST(_Parser(text, var).parse(), var, text)


# -- printer -----------------------------------------------------------------

def _fmt(node: Node) -> str:
    if isinstance(node, Num):
        return repr(float(node.value))
    if isinstance(node, (Const, Var)):
        return node.name
    if isinstance(node, Neg):
        return f"(-{_fmt(node.operand)})"
    if isinstance(node, BinOp):
        return f"({_fmt(node.left)} {node.op} {_fmt(node.right)})"
    return f"{node.func}({_fmt(node.arg)})"


def to_text(ast: ExprAST) -> str:
    """Fully parenthesized text that parses back to an equivalent tree."""
    return _fmt(ast.root)


def _has_var(node: Node) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Neg):
        return _has_var(node.operand)
    if isinstance(node, BinOp):
        return _has_var(node.left) or _has_var(node.right)
    if isinstance(node, Call):
        return _has_var(node.arg)
    return False


# -- scalar evaluation -------------------------------------------------------

def _domain(msg, x):
    raise ExprDomainError(f"{msg} (at parameter value {x!r})")


def _ev(node: Node, x: float) -> float:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -_ev(node.operand, x)
    if isinstance(node, BinOp):
        a = _ev(node.left, x)
        b = _ev(node.right, x)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            if b == 0.0:
                _domain("division by zero", x)
            return a / b
        if a == 0.0 and b < 0:
            _domain("zero raised to a negative power", x)
        if a < 0 and not float(b).is_integer():
            _domain("negative base with non-integer exponent", x)
        try:
            return math.pow(a, b)
        except OverflowError:
            _domain("overflow in power", x)
    a = _ev(node.arg, x)
    f = node.func
    if f == "sqrt":
        if a < 0:
            _domain("sqrt of a negative number", x)
        return math.sqrt(a)
    if f == "log":
        if a <= 0:
            _domain("log of a non-positive number", x)
        return math.log(a)
    if f == "exp":
        try:
            return math.exp(a)
        except OverflowError:
            _domain("overflow in exp", x)
    if f == "abs":
        return abs(a)
    return getattr(math, f)(a)


def evaluate(ast: ExprAST, x: float) -> float:
    """Evaluate at one real value."""
    y = _ev(ast.root, float(x))
    if not math.isfinite(y):
        _domain("non-finite result", x)
    return float(y)


# -- array evaluation --------------------------------------------------------

def _first_bad(mask, x):
    x = np.broadcast_to(x, np.shape(mask))
    return float(np.asarray(x)[mask].flat[0])


def _eva(node: Node, x: np.ndarray) -> np.ndarray:
    if isinstance(node, Num):
        return np.full_like(x, node.value)
    if isinstance(node, Const):
        return np.full_like(x, CONSTANTS[node.name])
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -_eva(node.operand, x)
    if isinstance(node, BinOp):
        a = _eva(node.left, x)
        b = _eva(node.right, x)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            bad = b == 0.0
            if bad.any():
                _domain("division by zero", _first_bad(bad, x))
            return a / b
        bad = (a == 0.0) & (b < 0)
        if bad.any():
            _domain("zero raised to a negative power", _first_bad(bad, x))
        bad = (a < 0) & (b != np.round(b))
        if bad.any():
            _domain("negative base with non-integer exponent", _first_bad(bad, x))
        return np.power(a, b)
    a = _eva(node.arg, x)
    f = node.func
    if f == "sqrt":
        bad = a < 0
        if bad.any():
            _domain("sqrt of a negative number", _first_bad(bad, x))
        return np.sqrt(a)
    if f == "log":
        bad = a <= 0
        if bad.any():
            _domain("log of a non-positive number", _first_bad(bad, x))
        return np.log(a)
    if f == "abs":
        return np.abs(a)
    if f == "atan":
        return np.arctan(a)
    return getattr(np, f)(a)


def evaluate_array(ast: ExprAST, x) -> np.ndarray:
    """Vectorized evaluation over an array of parameter values."""
    x = np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        y = _eva(ast.root, x)
    bad = ~np.isfinite(y)
    if bad.any():
        _domain("non-finite result", _first_bad(bad, x))
    return y


# -- jet evaluation ----------------------------------------------------------

def _evj(node: Node, x: Jet) -> Jet:
    if isinstance(node, Num):
        return Jet.constant(node.value, x)
    if isinstance(node, Const):
        return Jet.constant(CONSTANTS[node.name], x)
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -_evj(node.operand, x)
    if isinstance(node, BinOp):
        a = _evj(node.left, x)
        if node.op == "^" and not _has_var(node.right):
            p = _ev(node.right, 0.0)
            if float(p).is_integer() and abs(p) <= 64:
                if p < 0 and (a.value == 0.0).any():
                    _domain("zero raised to a negative power", _first_bad(a.value == 0.0, x.value))
                return a.ipow(int(p))
            if (a.value <= 0).any():
                _domain("non-positive base with non-integer exponent", _first_bad(a.value <= 0, x.value))
            return a.rpow(p)
        b = _evj(node.right, x)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            bad = b.value == 0.0
            if bad.any():
                _domain("division by zero", _first_bad(bad, x.value))
            return a / b
        bad = a.value <= 0
        if bad.any():
            _domain("non-positive base with variable exponent", _first_bad(bad, x.value))
        return taylor.exp(b * taylor.log(a))
    a = _evj(node.arg, x)
    f = node.func
    if f == "sqrt":
        bad = a.value <= 0
        if bad.any():
            _domain("sqrt is not differentiable at non-positive arguments", _first_bad(bad, x.value))
        return taylor.sqrt(a)
    if f == "log":
        bad = a.value <= 0
        if bad.any():
            _domain("log of a non-positive number", _first_bad(bad, x.value))
        return taylor.log(a)
    if f == "abs":
        return taylor.absolute(a)
    return getattr(taylor, f)(a)


def evaluate_jet(ast: ExprAST, x, order: int) -> Jet:
    """Value and the first ``order`` derivatives at every point of ``x``."""
    xj = Jet.variable(np.asarray(x, dtype=float), order)
    with np.errstate(all="ignore"):
        y = _evj(ast.root, xj)
    bad = ~np.isfinite(y.c).all(axis=0)
    if bad.any():
        _domain("non-finite derivative", _first_bad(bad, xj.value))
    return y
