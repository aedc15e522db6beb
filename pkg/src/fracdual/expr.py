"""Parser and evaluator for the equation mini-language.

Grammar (EBNF):

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := ("-")? power
    power  := atom ("^" factor)?
    atom   := number | "x" | "u" | "pi" | "e" | ident "(" expr ")" | "(" expr ")"
    ident  := sin|cos|tan|exp|ln|sqrt|abs|gamma

"^" is right-associative and binds tighter than unary minus. Numeric
literals accept decimal and scientific notation. Trees are immutable
after parsing; evaluation is pure and accepts floats or numpy arrays
for x and u. Domain violations (tan near a pole, ln of a non-positive,
sqrt of a negative, division by zero, fractional powers of negatives)
raise EvalDomainError instead of propagating NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .special_functions import GammaPoleError, SpecialFunctionDomainError, gamma

__all__ = [
    "ExpressionTree",
    "Const",
    "Var",
    "Unary",
    "Binary",
    "Call",
    "ParseError",
    "UnknownIdentifierError",
    "EvalDomainError",
    "parse_expression",
    "evaluate",
    "to_string",
]

_FUNCTIONS = ("sin", "cos", "tan", "exp", "ln", "sqrt", "abs", "gamma")
_CONSTANTS = {"pi": math.pi, "e": math.e}
_TAN_COS_GUARD = 1e-12


class ParseError(ValueError):
    """Syntax error; carries the byte offset of the offending character."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class UnknownIdentifierError(ParseError):
    """Identifier is not a function, constant, or variable of the grammar."""


class EvalDomainError(ValueError):
    """Evaluation left a function's real domain.

    ``index`` is the position of the first offending entry when the
    evaluation was vectorized, else None.
    """

    def __init__(self, message: str, index=None):
        if index is not None:
            message = f"{message} (array index {index})"
        super().__init__(message)
        self.index = index


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    name: str  # "x" or "u"


@dataclass(frozen=True)
class Unary:
    op: str  # "-"
    operand: "ExpressionTree"


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * / ^
    left: "ExpressionTree"
    right: "ExpressionTree"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "ExpressionTree"


ExpressionTree = Union[Const, Var, Unary, Binary, Call]


# --- tokenizer --------------------------------------------------------------

_SINGLE = set("+-*/^()")


def _tokenize(text: str):
    tokens = []  # (kind, value, offset)
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _SINGLE:
            tokens.append(("op", c, i))
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            tokens.append(("number", text[i:j], i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("ident", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(("eof", "", n))
    return tokens


# --- recursive-descent parser ------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, value, offset = self.peek()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}", offset)
        return self.advance()

    def parse(self) -> ExpressionTree:
        tree = self.expr()
        kind, value, offset = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected trailing input {value!r}", offset)
        return tree

    def expr(self) -> ExpressionTree:
        node = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in ("+", "-"):
                self.advance()
                node = Binary(value, node, self.term())
            else:
                return node

    def term(self) -> ExpressionTree:
        node = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in ("*", "/"):
                self.advance()
                node = Binary(value, node, self.factor())
            else:
                return node

    def factor(self) -> ExpressionTree:
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            return Unary("-", self.power())
        return self.power()

    def power(self) -> ExpressionTree:
        base = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            return Binary("^", base, self.factor())
        return base

    def atom(self) -> ExpressionTree:
        kind, value, offset = self.advance()
        if kind == "number":
            return Const(float(value))
        if kind == "ident":
            if value in ("x", "u"):
                return Var(value)
            if value in _CONSTANTS:
                return Const(_CONSTANTS[value])
            if value in _FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Call(value, arg)
            raise UnknownIdentifierError(f"unknown identifier {value!r}", offset)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError(f"expected a value, got {value!r}" if value else "unexpected end of input", offset)


def parse_expression(text: str) -> ExpressionTree:
    """Parse ``text`` into an immutable ExpressionTree."""
    return _Parser(text).parse()


# --- evaluation ---------------------------------------------------------------


def _first_bad_index(mask):
    idx = np.nonzero(np.atleast_1d(mask))[0]
    return int(idx[0]) if idx.size else None


def _check(mask, message):
    if np.any(mask):
        raise EvalDomainError(message, index=_first_bad_index(mask) if np.ndim(mask) else None)


def _pow(base, expo):
    base = np.asarray(base, dtype=float)
    expo = np.asarray(expo, dtype=float)
    if np.all(base > 0.0):
        with np.errstate(over="ignore"):
            return np.power(base, expo)
    neg = base < 0.0
    zero = base == 0.0
    _check(neg & (expo != np.floor(expo)), "fractional power of a negative base")
    _check(zero & (expo < 0.0), "zero raised to a negative power")
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        mag = np.power(np.abs(base), expo)
        sign = np.where(neg & (np.mod(expo, 2.0) == 1.0), -1.0, 1.0)
        out = np.where(zero, np.where(expo == 0.0, 1.0, 0.0), sign * mag)
    return out


def _eval(node: ExpressionTree, x, u):
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return x if node.name == "x" else u
    if isinstance(node, Unary):
        return -_eval(node.operand, x, u)
    if isinstance(node, Binary):
        left = _eval(node.left, x, u)
        right = _eval(node.right, x, u)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if node.op == "/":
            _check(np.asarray(right) == 0.0, "division by zero")
            return left / right
        return _pow(left, right)
    # Call
    arg = _eval(node.arg, x, u)
    f = node.func
    if f == "sin":
        return np.sin(arg)
    if f == "cos":
        return np.cos(arg)
    if f == "tan":
        _check(np.abs(np.cos(arg)) < _TAN_COS_GUARD, "tan evaluated at a pole")
        return np.tan(arg)
    if f == "exp":
        with np.errstate(over="ignore"):
            return np.exp(arg)
    if f == "ln":
        _check(np.asarray(arg) <= 0.0, "ln of a non-positive value")
        return np.log(arg)
    if f == "sqrt":
        _check(np.asarray(arg) < 0.0, "sqrt of a negative value")
        return np.sqrt(arg)
    if f == "abs":
        return np.abs(arg)
    # gamma
    try:
        return gamma(arg)
    except (GammaPoleError, SpecialFunctionDomainError) as exc:
        raise EvalDomainError(str(exc)) from exc


def evaluate(tree: ExpressionTree, x=0.0, u=0.0):
    """Evaluate ``tree`` at (x, u).

    Scalars in, float out; numpy arrays in, array out (broadcasting the
    scalar argument when only one is an array).
    """
    result = _eval(tree, x, u)
    if np.isscalar(x) and np.isscalar(u) and not isinstance(result, float):
        return float(result)
    return result


# --- printing -----------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def _fmt_number(v: float) -> str:
    if v == math.pi:
        return "pi"
    if v == math.e:
        return "e"
    return repr(v)


def _print(node: ExpressionTree) -> tuple[str, int]:
    if isinstance(node, Const):
        return _fmt_number(node.value), 5
    if isinstance(node, Var):
        return node.name, 5
    if isinstance(node, Call):
        inner, _ = _print(node.arg)
        return f"{node.func}({inner})", 5
    if isinstance(node, Unary):
        inner, prec = _print(node.operand)
        # grammar admits a single leading minus per factor, so nested
        # negations must be parenthesized
        if prec < _PREC["neg"] or isinstance(node.operand, Unary):
            inner = f"({inner})"
        return f"-{inner}", _PREC["neg"]
    left, lp = _print(node.left)
    right, rp = _print(node.right)
    prec = _PREC[node.op]
    if node.op == "^":
        # left side of ^ must be an atom; right side is a factor
        if lp <= prec:
            left = f"({left})"
        if rp < _PREC["neg"]:
            right = f"({right})"
    else:
        if lp < prec:
            left = f"({left})"
        # wrap equal-precedence right operands so the reparse rebuilds the
        # identical tree even for right-nested chains
        if rp <= prec:
            right = f"({right})"
    return f"{left}{node.op}{right}", prec


def to_string(tree: ExpressionTree) -> str:
    """Canonical text form; parse_expression(to_string(t)) == t."""
    return _print(tree)[0]
