"""Expression trees for test functions: parsing, evaluation, differentiation, printing.

Grammar (whitespace insignificant)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | base ('^' factor)?
    base   := NUMBER | 'x' | FUNC '(' expr ')' | '(' expr ')'
    FUNC   := 'exp' | 'sin' | 'cos' | 'ln'

Unary minus binds looser than ``^``: ``-x^2`` is ``-(x^2)``. Exponents must be
integer-valued constant expressions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from rootlab.bigreal import ELEMENTARY, BigReal, PrecisionContext, eval_elementary, parse_decimal
from rootlab.errors import DomainError, ExpressionSyntaxError, UnknownIdentifier

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


class Expr:
    """Base class of expression nodes. Nodes are immutable and hashable."""

    __slots__ = ()

    def evaluate(self, x: BigReal) -> BigReal:
        return evaluate_expr(self, x)

    def __str__(self) -> str:
        return to_source(self)


@dataclass(frozen=True)
class Num(Expr):
    text: str

    @property
    def value(self) -> Fraction:
        return Fraction(self.text)


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Call(Expr):
    fn: str
    arg: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # one of + - * /
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Expr

    @property
    def power(self) -> int:
        value = constant_value(self.exponent)
        assert value is not None and value.denominator == 1
        return int(value)


X = Var()
ZERO = Num("0")
ONE = Num("1")


# -- parsing ----------------------------------------------------------------------


@dataclass
class _Token:
    kind: str
    text: str
    offset: int


def _tokenize(src: str) -> list[_Token]:
    tokens: list[_Token] = []
    position = 0
    while position < len(src):
        if src[position:].strip() == "":
            break
        match = _TOKEN.match(src, position)
        if match is None:
            bad = len(src) - len(src[position:].lstrip())
            raise ExpressionSyntaxError(
                message=f"unexpected character {src[bad]!r}", offset=len(src[:bad].encode())
            )
        kind = match.lastgroup
        assert kind is not None
        start = match.start(kind)
        tokens.append(_Token(kind, match.group(kind), len(src[:start].encode())))
        position = match.end()
    tokens.append(_Token("end", "", len(src.encode())))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.tokens = _tokenize(src)
        self.index = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def _advance(self) -> _Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _accept(self, text: str) -> bool:
        if self.current.kind == "op" and self.current.text == text:
            self.index += 1
            return True
        return False

    def _expect(self, text: str) -> None:
        if not self._accept(text):
            found = self.current.text or "end of input"
            raise ExpressionSyntaxError(message=f"expected {text!r}, found {found!r}", offset=self.current.offset)

    def parse(self) -> Expr:
        node = self.expr()
        if self.current.kind != "end":
            raise ExpressionSyntaxError(message=f"unexpected {self.current.text!r}", offset=self.current.offset)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.current.kind == "op" and self.current.text in "+-":
            op = self._advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.current.kind == "op" and self.current.text in "*/":
            op = self._advance().text
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        if self._accept("-"):
            return Neg(self.factor())
        node = self.base()
        if self._accept("^"):
            offset = self.current.offset
            exponent = self.factor()
            value = constant_value(exponent)
            if value is None or value.denominator != 1:
                raise ExpressionSyntaxError(message="exponent must be an integer constant", offset=offset)
            node = Pow(node, exponent)
        return node

    def base(self) -> Expr:
        token = self.current
        if token.kind == "number":
            self._advance()
            return Num(token.text)
        if token.kind == "name":
            self._advance()
            if token.text == "x":
                return X
            if token.text in ELEMENTARY:
                self._expect("(")
                arg = self.expr()
                self._expect(")")
                return Call(token.text, arg)
            raise UnknownIdentifier(message="unknown identifier", name=token.text, offset=token.offset)
        if self._accept("("):
            node = self.expr()
            self._expect(")")
            return node
        found = token.text or "end of input"
        raise ExpressionSyntaxError(message=f"unexpected {found!r}", offset=token.offset)


def parse_expression(src: str) -> Expr:
    """Parse ``src`` into an expression tree.

    Raises:
        ExpressionSyntaxError: Malformed input, with the byte offset of the problem.
        UnknownIdentifier: A name other than x, exp, sin, cos, ln.
    """
    return _Parser(src).parse()


# -- constants --------------------------------------------------------------------


def constant_value(node: Expr) -> Fraction | None:
    """Exact value of a constant subexpression, or None if it depends on x."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Neg):
        inner = constant_value(node.arg)
        return None if inner is None else -inner
    if isinstance(node, BinOp):
        left, right = constant_value(node.left), constant_value(node.right)
        if left is None or right is None:
            return None
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        return None if right == 0 else left / right
    if isinstance(node, Pow):
        base, exponent = constant_value(node.base), constant_value(node.exponent)
        if base is None or exponent is None or exponent.denominator != 1:
            return None
        if base == 0 and exponent < 0:
            return None
        return base ** int(exponent)
    return None


def make_const(value: int | Fraction) -> Expr:
    value = Fraction(value)
    if value < 0:
        return Neg(make_const(-value))
    if value.denominator == 1:
        return Num(str(value.numerator))
    return BinOp("/", Num(str(value.numerator)), Num(str(value.denominator)))


# -- evaluation -------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _literal(text: str, bits: int) -> BigReal:
    return parse_decimal(text, PrecisionContext(bits))


def evaluate_expr(node: Expr, x: BigReal) -> BigReal:
    """Evaluate ``node`` at ``x`` in the precision context of ``x``.

    Raises:
        DomainError: ln of a non-positive value, division by zero, overflow.
    """
    if isinstance(node, Var):
        return x
    if isinstance(node, Num):
        return _literal(node.text, x.context.bits)
    if isinstance(node, Neg):
        return -evaluate_expr(node.arg, x)
    if isinstance(node, Call):
        return eval_elementary(node.fn, evaluate_expr(node.arg, x))
    if isinstance(node, Pow):
        return evaluate_expr(node.base, x) ** node.power
    if isinstance(node, BinOp):
        left = evaluate_expr(node.left, x)
        right = evaluate_expr(node.right, x)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if right.is_zero():
            raise DomainError(f"division by zero in {to_source(node)}")
        return left / right
    raise TypeError(f"not an expression node: {node!r}")


# -- differentiation --------------------------------------------------------------


def _is_const(node: Expr, value: int) -> bool:
    return constant_value(node) == value if isinstance(node, (Num, Neg)) else False


def _add(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0):
        return b
    if _is_const(b, 0):
        return a
    if isinstance(b, Neg):
        return _sub(a, b.arg)
    return BinOp("+", a, b)


def _sub(a: Expr, b: Expr) -> Expr:
    if _is_const(b, 0):
        return a
    if _is_const(a, 0):
        return _neg(b)
    return BinOp("-", a, b)


def _neg(a: Expr) -> Expr:
    if _is_const(a, 0):
        return ZERO
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def _mul(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0) or _is_const(b, 0):
        return ZERO
    if _is_const(a, 1):
        return b
    if _is_const(b, 1):
        return a
    if isinstance(a, Neg):
        return _neg(_mul(a.arg, b))
    if isinstance(b, Neg):
        return _neg(_mul(a, b.arg))
    return BinOp("*", a, b)


def _div(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0):
        return ZERO
    if _is_const(b, 1):
        return a
    return BinOp("/", a, b)


def _pow(base: Expr, n: int) -> Expr:
    if n == 0:
        return ONE
    if n == 1:
        return base
    return Pow(base, make_const(n))


def differentiate(node: Expr) -> Expr:
    """Symbolic d/dx with light algebraic simplification."""
    if isinstance(node, Num):
        return ZERO
    if isinstance(node, Var):
        return ONE
    if isinstance(node, Neg):
        return _neg(differentiate(node.arg))
    if isinstance(node, Call):
        inner = differentiate(node.arg)
        if node.fn == "exp":
            outer = node
        elif node.fn == "sin":
            outer = Call("cos", node.arg)
        elif node.fn == "cos":
            outer = Neg(Call("sin", node.arg))
        else:
            return _div(inner, node.arg)
        return _mul(outer, inner)
    if isinstance(node, Pow):
        n = node.power
        return _mul(_mul(make_const(n), _pow(node.base, n - 1)), differentiate(node.base))
    if isinstance(node, BinOp):
        du, dv = differentiate(node.left), differentiate(node.right)
        if node.op == "+":
            return _add(du, dv)
        if node.op == "-":
            return _sub(du, dv)
        if node.op == "*":
            return _add(_mul(du, node.right), _mul(node.left, dv))
        numerator = _sub(_mul(du, node.right), _mul(node.left, dv))
        return _div(numerator, _pow(node.right, 2))
    raise TypeError(f"not an expression node: {node!r}")


# -- printing ---------------------------------------------------------------------

_ATOM = 5


def _precedence(node: Expr) -> int:
    if isinstance(node, BinOp):
        return 1 if node.op in "+-" else 2
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return _ATOM


def _wrap(node: Expr, parenthesize: bool) -> str:
    text = to_source(node)
    return f"({text})" if parenthesize else text


def to_source(node: Expr) -> str:
    """Render with the fewest parentheses that parse back to the same tree."""
    if isinstance(node, Num):
        return node.text
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Call):
        return f"{node.fn}({to_source(node.arg)})"
    if isinstance(node, Neg):
        return "-" + _wrap(node.arg, _precedence(node.arg) < 3)
    if isinstance(node, Pow):
        base = _wrap(node.base, _precedence(node.base) < _ATOM)
        return f"{base}^{_wrap(node.exponent, _precedence(node.exponent) < 3)}"
    if isinstance(node, BinOp):
        level = _precedence(node)
        left = _wrap(node.left, _precedence(node.left) < level)
        right_level = _precedence(node.right)
        right = _wrap(node.right, right_level <= level or isinstance(node.right, Neg))
        return f"{left}{node.op}{right}"
    raise TypeError(f"not an expression node: {node!r}")
