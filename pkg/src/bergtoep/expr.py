"""Small arithmetic expression language for symbol definitions.

Grammar (whitespace-insensitive):

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := ("-")? power
    power  := atom ("^" factor)?
    atom   := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"

"^" binds tightest and is right-associative; known functions are
sin, cos, exp, log, sqrt, abs.  Evaluation works elementwise on numpy
arrays as well as on scalars.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
}


class ParseError(ValueError):
    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        self.offset = offset
        self.expected = expected
        detail = f"{message} at offset {offset}"
        if expected:
            detail += f" (expected one of: {', '.join(expected)})"
        super().__init__(detail)


class EvalError(ValueError):
    def __init__(self, message: str, subexpr: "Expr"):
        self.subexpr = subexpr
        super().__init__(f"{message} in {to_source(subexpr)!r}")


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
    op: str  # one of + - * / ^
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Num | Var | Neg | BinOp | Call

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<ident>[a-z][a-z0-9_]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(source: str):
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            stripped = source[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}",
                             len(source) - len(stripped))
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("eof", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, off = self.peek()
        if kind != "op" or val != op:
            raise ParseError(f"unexpected token {val or 'end of input'!r}",
                             off, (op,))
        return self.advance()

    def parse(self) -> Expr:
        e = self.expr()
        kind, val, off = self.peek()
        if kind != "eof":
            raise ParseError(f"trailing input {val!r}", off,
                             ("+", "-", "*", "/", "^", "end of input"))
        return e

    def expr(self) -> Expr:
        node = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.advance()
                node = BinOp(val, node, self.term())
            else:
                return node

    def term(self) -> Expr:
        node = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.advance()
                node = BinOp(val, node, self.factor())
            else:
                return node

    def factor(self) -> Expr:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.advance()
            return Neg(self.power())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.advance()
            return BinOp("^", base, self.factor())
        return base

    def atom(self) -> Expr:
        kind, val, off = self.advance()
        if kind == "num":
            return Num(float(val))
        if kind == "ident":
            nkind, nval, _ = self.peek()
            if nkind == "op" and nval == "(":
                if val not in FUNCTIONS:
                    raise ParseError(f"unknown function {val!r}", off,
                                     tuple(sorted(FUNCTIONS)))
                self.advance()
                arg = self.expr()
                self.expect_op(")")
                return Call(val, arg)
            return Var(val)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        raise ParseError(f"unexpected token {val or 'end of input'!r}", off,
                         ("NUMBER", "IDENT", "(", "-"))


def parse(source: str) -> Expr:
    """Parse source text into an AST."""
    return _Parser(source).parse()


def evaluate(e: Expr, env: dict):
    """Evaluate e with variables bound by env (scalars or numpy arrays)."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        try:
            return env[e.name]
        except KeyError:
            raise EvalError(f"unbound variable {e.name!r}", e) from None
    if isinstance(e, Neg):
        return -evaluate(e.operand, env)
    if isinstance(e, BinOp):
        lhs = evaluate(e.left, env)
        rhs = evaluate(e.right, env)
        if e.op == "+":
            return lhs + rhs
        if e.op == "-":
            return lhs - rhs
        if e.op == "*":
            return lhs * rhs
        if e.op == "/":
            if np.any(rhs == 0):
                raise EvalError("division by zero", e)
            return lhs / rhs
        # '^'
        with np.errstate(invalid="raise", divide="raise"):
            try:
                return lhs**rhs
            except FloatingPointError:
                raise EvalError("invalid power", e) from None
    if isinstance(e, Call):
        arg = evaluate(e.arg, env)
        if e.func == "log" and np.any(arg <= 0):
            raise EvalError("log of non-positive argument", e)
        if e.func == "sqrt" and np.any(arg < 0):
            raise EvalError("sqrt of negative argument", e)
        return FUNCTIONS[e.func](arg)
    raise TypeError(f"not an expression node: {e!r}")


def variables(e: Expr) -> set[str]:
    if isinstance(e, Num):
        return set()
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Neg):
        return variables(e.operand)
    if isinstance(e, BinOp):
        return variables(e.left) | variables(e.right)
    if isinstance(e, Call):
        return variables(e.arg)
    raise TypeError(f"not an expression node: {e!r}")


def subst(e: Expr, mapping: dict[str, Expr]) -> Expr:
    """Replace variables by expressions throughout e."""
    if isinstance(e, Num):
        return e
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if isinstance(e, Neg):
        return Neg(subst(e.operand, mapping))
    if isinstance(e, BinOp):
        return BinOp(e.op, subst(e.left, mapping), subst(e.right, mapping))
    if isinstance(e, Call):
        return Call(e.func, subst(e.arg, mapping))
    raise TypeError(f"not an expression node: {e!r}")


def to_source(e: Expr) -> str:
    """Render e back to source text; parse(to_source(e)) == e."""
    return _render(e, 0)


# precedence levels: 0 add, 1 mul, 2 unary minus, 3 power, 4 atom
def _render(e: Expr, context: int) -> str:
    if isinstance(e, Num):
        v = e.value
        text = repr(int(v)) if v == int(v) and v >= 0 else repr(v)
        if v < 0:
            # negative literals do not survive the grammar; render via Neg
            return _render(Neg(Num(-v)), context)
        return text
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Call):
        return f"{e.func}({_render(e.arg, 0)})"
    if isinstance(e, Neg):
        inner = f"-{_render(e.operand, 3)}"
        return f"({inner})" if context > 2 else inner
    if isinstance(e, BinOp):
        if e.op in "+-":
            level = 0
            text = f"{_render(e.left, 0)} {e.op} {_render(e.right, 1)}"
        elif e.op in "*/":
            level = 1
            text = f"{_render(e.left, 1)} {e.op} {_render(e.right, 2)}"
        else:
            level = 3
            # right operand of ^ is a factor, so same-precedence recursion
            text = f"{_render(e.left, 4)}^{_render(e.right, 3)}"
        return f"({text})" if context > level else text
    raise TypeError(f"not an expression node: {e!r}")
