"""A small arithmetic expression language over ``x`` and ``t``.

Grammar, loosest binding first::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := atom ("^" unary)?          # right-associative
    atom    := NUMBER | "x" | "t" | "pi"
             | NAME "(" expr ")"
             | "piecewise" "(" ("(" expr "," expr "," expr ")" ",")+ expr ")"
             | "(" expr ")"

``piecewise`` picks the first ``[lo, hi)`` interval containing ``x`` and
falls back to the trailing default. Interval bounds must be constant.
Evaluation is vectorised: ``x`` and ``t`` may be numpy arrays.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from fracmol import specfun


class ExprError(ValueError):
    """Parse or evaluation error; ``offset`` is a character index when known."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    name: str
    arg: "Expr"


@dataclass(frozen=True)
class Piecewise:
    pieces: tuple[tuple[float, float, "Expr"], ...]
    default: "Expr"


Expr = Union[Num, Var, Neg, BinOp, Call, Piecewise]

VARIABLES = ("x", "t")
CONSTANTS = {"pi": math.pi}
FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "sqrt": np.sqrt,
    "abs": np.abs,
    "gamma": specfun.gamma,
    "fresnelc": specfun.fresnel_c,
    "fresnels": specfun.fresnel_s,
}

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^(),]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.take()
        if val != value or kind == "end":
            found = "end of input" if kind == "end" else repr(val)
            raise ExprError(f"expected {value!r}, found {found}", pos)

    def parse(self) -> Expr:
        e = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExprError(f"unexpected {val!r}", pos)
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            left = BinOp(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            left = BinOp(op, left, self.unary())
        return left

    def unary(self) -> Expr:
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        kind, val, pos = self.take()
        if kind == "num":
            return Num(float(val))
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "name":
            if val in VARIABLES:
                return Var(val)
            if val in CONSTANTS:
                return Var(val)
            if val == "piecewise":
                return self.piecewise(pos)
            if val in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                kind2, val2, pos2 = self.peek()
                if val2 == ",":
                    raise ExprError(f"{val}() takes exactly one argument", pos2)
                self.expect(")")
                return Call(val, arg)
            raise ExprError(f"unknown identifier {val!r}", pos)
        found = "end of input" if kind == "end" else repr(val)
        raise ExprError(f"unexpected {found}", pos)

    def _constant(self, e: Expr, pos: int) -> float:
        try:
            return float(evaluate(e, 0.0, 0.0, _require_constant=True))
        except _NotConstant:
            raise ExprError("piecewise bounds must be constant", pos) from None

    def piecewise(self, start: int) -> Piecewise:
        self.expect("(")
        pieces = []
        while True:
            kind, val, pos = self.peek()
            # a piece starts with "(" followed by three comma-separated items
            if val == "(" and self._looks_like_piece():
                self.take()
                lo_pos = self.peek()[2]
                lo = self._constant(self.expr(), lo_pos)
                self.expect(",")
                hi_pos = self.peek()[2]
                hi = self._constant(self.expr(), hi_pos)
                self.expect(",")
                value = self.expr()
                self.expect(")")
                self.expect(",")
                if hi <= lo:
                    raise ExprError("piecewise interval must have lo < hi", lo_pos)
                pieces.append((lo, hi, value))
                continue
            break
        if not pieces:
            raise ExprError("piecewise needs at least one (lo, hi, value) piece", start)
        default = self.expr()
        self.expect(")")
        ordered = sorted(pieces, key=lambda p: p[0])
        for (lo1, hi1, _), (lo2, _, _) in zip(ordered, ordered[1:]):
            if lo2 < hi1:
                raise ExprError("piecewise intervals overlap", start)
        return Piecewise(tuple(pieces), default)

    def _looks_like_piece(self) -> bool:
        # scan to the matching ")" and count top-level commas
        depth = 0
        commas = 0
        for kind, val, _ in self.tokens[self.i:]:
            if kind == "end":
                return False
            if val == "(":
                depth += 1
            elif val == ")":
                depth -= 1
                if depth == 0:
                    return commas == 2
            elif val == "," and depth == 1:
                commas += 1
        return False


def parse_expr(text: str) -> Expr:
    """Parse ``text`` into an expression tree."""
    if not isinstance(text, str):
        raise ExprError(f"expression must be a string, got {type(text).__name__}")
    return _Parser(text).parse()


class _NotConstant(Exception):
    pass


def evaluate(e: Expr, x, t, *, _require_constant: bool = False):
    """Evaluate ``e`` at ``(x, t)``; arrays broadcast like numpy."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        if e.name in CONSTANTS:
            return CONSTANTS[e.name]
        if _require_constant:
            raise _NotConstant
        return x if e.name == "x" else t
    if isinstance(e, Neg):
        return -evaluate(e.operand, x, t, _require_constant=_require_constant)
    if isinstance(e, BinOp):
        a = evaluate(e.left, x, t, _require_constant=_require_constant)
        b = evaluate(e.right, x, t, _require_constant=_require_constant)
        with np.errstate(divide="ignore", invalid="ignore"):
            if e.op == "+":
                return np.add(a, b)
            if e.op == "-":
                return np.subtract(a, b)
            if e.op == "*":
                return np.multiply(a, b)
            if e.op == "/":
                return np.divide(a, b)
            return np.power(np.asarray(a, dtype=float), b)
    if isinstance(e, Call):
        return FUNCTIONS[e.name](evaluate(e.arg, x, t, _require_constant=_require_constant))
    if isinstance(e, Piecewise):
        if _require_constant:
            raise _NotConstant
        xa = np.asarray(x, dtype=float)
        conds = [(xa >= lo) & (xa < hi) for lo, hi, _ in e.pieces]
        choices = [np.broadcast_to(evaluate(v, x, t), np.broadcast_shapes(xa.shape, np.shape(t)))
                   for _, _, v in e.pieces]
        default = np.broadcast_to(evaluate(e.default, x, t), np.broadcast_shapes(xa.shape, np.shape(t)))
        out = np.select([np.broadcast_to(c, default.shape) for c in conds], choices, default)
        return float(out) if out.ndim == 0 else out
    raise TypeError(f"not an expression node: {e!r}")


def eval_expr(e: Expr, x, t):
    """Evaluate ``e``; scalar inputs give a float, array inputs an array of their broadcast shape."""
    out = evaluate(e, x, t)
    shape = np.broadcast_shapes(np.shape(x), np.shape(t))
    out = np.broadcast_to(np.asarray(out, dtype=float), shape)
    return float(out) if out.ndim == 0 else out.copy()


def uses_variable(e: Expr, name: str) -> bool:
    if isinstance(e, Var):
        return e.name == name
    if isinstance(e, Num):
        return False
    if isinstance(e, Neg):
        return uses_variable(e.operand, name)
    if isinstance(e, BinOp):
        return uses_variable(e.left, name) or uses_variable(e.right, name)
    if isinstance(e, Call):
        return uses_variable(e.arg, name)
    if isinstance(e, Piecewise):
        # piecewise always selects on x
        return name == "x" or uses_variable(e.default, name) or any(
            uses_variable(v, name) for _, _, v in e.pieces
        )
    raise TypeError(f"not an expression node: {e!r}")


def to_text(e: Expr) -> str:
    """Render ``e`` so that ``parse_expr(to_text(e)) == e``."""
    if isinstance(e, Num):
        return repr(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return f"(-{to_text(e.operand)})"
    if isinstance(e, BinOp):
        return f"({to_text(e.left)} {e.op} {to_text(e.right)})"
    if isinstance(e, Call):
        return f"{e.name}({to_text(e.arg)})"
    if isinstance(e, Piecewise):
        parts = [f"({lo!r}, {hi!r}, {to_text(v)})" for lo, hi, v in e.pieces]
        return f"piecewise({', '.join(parts)}, {to_text(e.default)})"
    raise TypeError(f"not an expression node: {e!r}")


def _piecewise_select(x, pieces, default):
    xa = np.asarray(x, dtype=float)
    shape = np.broadcast_shapes(xa.shape, *(np.shape(v) for _, _, v in pieces), np.shape(default))
    conds = [np.broadcast_to((xa >= lo) & (xa < hi), shape) for lo, hi, _ in pieces]
    choices = [np.broadcast_to(v, shape) for _, _, v in pieces]
    return np.select(conds, choices, np.broadcast_to(default, shape))


def _source(e: Expr) -> str:
    if isinstance(e, Num):
        return repr(e.value)
    if isinstance(e, Var):
        return repr(CONSTANTS[e.name]) if e.name in CONSTANTS else e.name
    if isinstance(e, Neg):
        return f"(-{_source(e.operand)})"
    if isinstance(e, BinOp):
        if e.op == "^":
            return f"_pow({_source(e.left)}, {_source(e.right)})"
        return f"({_source(e.left)} {e.op} {_source(e.right)})"
    if isinstance(e, Call):
        return f"_f_{e.name}({_source(e.arg)})"
    if isinstance(e, Piecewise):
        pieces = ", ".join(f"({lo!r}, {hi!r}, {_source(v)})" for lo, hi, v in e.pieces)
        return f"_piecewise(x, ({pieces},), {_source(e.default)})"
    raise TypeError(f"not an expression node: {e!r}")


def _pow(a, b):
    return np.power(np.asarray(a, dtype=float), b)


def compile_expr(e: Expr):
    """Turn ``e`` into a plain Python function of ``(x, t)``.

    Same results as :func:`eval_expr` but several times faster, which
    matters for sources evaluated at every integrator stage.
    """
    namespace = {f"_f_{name}": fn for name, fn in FUNCTIONS.items()}
    namespace.update(_pow=_pow, _piecewise=_piecewise_select, np=np)
    code = f"def _compiled(x, t):\n    return {_source(e)}\n"
    exec(compile(code, "<fracmol.expr>", "exec"), namespace)
    fn = namespace["_compiled"]

    def call(x, t):
        with np.errstate(divide="ignore", invalid="ignore"):
            out = fn(x, t)
        shape = np.broadcast_shapes(np.shape(x), np.shape(t))
        out = np.broadcast_to(np.asarray(out, dtype=float), shape)
        return float(out) if out.ndim == 0 else out

    return call
