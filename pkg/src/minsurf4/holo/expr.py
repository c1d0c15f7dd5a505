"""A small expression language for holomorphic functions of ``z``.

Grammar (whitespace insensitive)::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := ('-' | '+') factor | base ('^' integer)?
    base    := number | 'i' | 'z' | func '(' expr ')' | '(' expr ')'
    integer := '-'? digits
    func    := exp | sin | cos | sinh | cosh | log

Exponents are integers only, so every expression is single-valued away from
its poles and the zeros of ``log`` arguments.

Evaluation returns second-order jets ``(f, f', f'')`` using truncated Taylor
arithmetic on the tree; all operations broadcast over numpy arrays of ``z``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from ..errors import ExprSyntaxError, SingularPoint, UnknownFunction

FUNCTIONS = ("exp", "sin", "cos", "sinh", "cosh", "log")

SINGULAR_EPS = 1e-12


# --- AST ------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: complex


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Const, Var, Neg, BinOp, Pow, Call]


def Add(a, b):
    return BinOp("+", a, b)


def Sub(a, b):
    return BinOp("-", a, b)


def Mul(a, b):
    return BinOp("*", a, b)


def Div(a, b):
    return BinOp("/", a, b)


def Exp(a):
    return Call("exp", a)


def singular_risks(e: Expr) -> list[tuple[str, Expr]]:
    """Sub-expressions that can make ``e`` singular: denominators and log arguments."""
    out: list[tuple[str, Expr]] = []

    def walk(n):
        if isinstance(n, BinOp):
            if n.op == "/":
                out.append(("denominator", n.right))
            walk(n.left)
            walk(n.right)
        elif isinstance(n, Pow):
            if n.exponent < 0:
                out.append(("denominator", n.base))
            walk(n.base)
        elif isinstance(n, Call):
            if n.func == "log":
                out.append(("log argument", n.arg))
            walk(n.arg)
        elif isinstance(n, Neg):
            walk(n.arg)

    walk(e)
    return out


# --- printing ---------------------------------------------------------------


def _fmt_const(c: complex) -> str:
    c = complex(c)
    if c.imag == 0.0:
        return repr(c.real) if c.real >= 0 else f"(-{repr(-c.real)})"
    if c.real == 0.0:
        if c.imag == 1.0:
            return "i"
        return f"({repr(c.imag)}*i)" if c.imag > 0 else f"(-({repr(-c.imag)}*i))"
    return f"({_fmt_const(c.real)} + {_fmt_const(1j * c.imag)})"


def to_text(e: Expr) -> str:
    """Fully parenthesized text that parses back to an equal tree."""
    if isinstance(e, Const):
        return _fmt_const(e.value)
    if isinstance(e, Var):
        return "z"
    if isinstance(e, Neg):
        return f"(-{to_text(e.arg)})"
    if isinstance(e, BinOp):
        return f"({to_text(e.left)} {e.op} {to_text(e.right)})"
    if isinstance(e, Pow):
        return f"{to_text_base(e.base)}^{e.exponent}"
    if isinstance(e, Call):
        return f"{e.func}({to_text(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")


def to_text_base(e: Expr) -> str:
    s = to_text(e)
    # a text starting with "(" may still be a power, e.g. "(z + 1)^2"
    if isinstance(e, (Var, Call)) or (s.startswith("(") and not isinstance(e, Pow)):
        return s
    return f"({s})"


# --- parser -------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?|\d+(?:[eE][-+]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


class _Tok(NamedTuple):
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(_Tok("end", "", n))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ExprSyntaxError(msg, self.text, tok.pos)

    def expect(self, op):
        t = self.peek()
        if t.kind != "op" or t.text != op:
            self.fail(f"expected {op!r}")
        return self.take()

    def expr(self):
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.take().text
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        t = self.peek()
        if t.kind == "op" and t.text in "+-":
            self.take()
            inner = self.factor()
            return Neg(inner) if t.text == "-" else inner
        node = self.base()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.take()
            sign = 1
            if self.peek().kind == "op" and self.peek().text == "-":
                self.take()
                sign = -1
            t = self.peek()
            if t.kind != "num" or not t.text.isdigit():
                self.fail("expected integer exponent")
            self.take()
            node = Pow(node, sign * int(t.text))
        return node

    def base(self):
        t = self.peek()
        if t.kind == "num":
            self.take()
            return Const(complex(float(t.text)))
        if t.kind == "name":
            self.take()
            if t.text == "z":
                return Var()
            if t.text == "i":
                return Const(1j)
            if self.peek().kind == "op" and self.peek().text == "(":
                if t.text not in FUNCTIONS:
                    raise UnknownFunction(f"unknown function {t.text!r} at offset {t.pos}")
                self.take()
                arg = self.expr()
                self.expect(")")
                return Call(t.text, arg)
            self.fail(f"unknown name {t.text!r}", t)
        if t.kind == "op" and t.text == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        self.fail("unexpected token" if t.kind != "end" else "unexpected end of input")


def parse_expr(text: str) -> Expr:
    p = _Parser(text)
    node = p.expr()
    if p.peek().kind != "end":
        p.fail("trailing input")
    return node


# --- jets ---------------------------------------------------------------------


class Jet2(NamedTuple):
    """Value, first and second complex derivative (scalars or arrays)."""

    f: object
    df: object
    d2f: object


def _check_small(v, what, z, eps):
    mag = np.abs(v)
    bad = mag < eps
    if np.any(bad):
        zz = np.broadcast_to(z, np.shape(bad))
        idx = np.flatnonzero(np.ravel(bad))[0]
        raise SingularPoint(f"{what} vanishes (|.|<{eps:g})", np.ravel(zz)[idx])


def _mul(a: Jet2, b: Jet2) -> Jet2:
    return Jet2(
        a.f * b.f,
        a.df * b.f + a.f * b.df,
        a.d2f * b.f + 2.0 * a.df * b.df + a.f * b.d2f,
    )


def _div(a: Jet2, b: Jet2, z, eps) -> Jet2:
    _check_small(b.f, "denominator", z, eps)
    q = a.f / b.f
    dq = (a.df - q * b.df) / b.f
    d2q = (a.d2f - 2.0 * dq * b.df - q * b.d2f) / b.f
    return Jet2(q, dq, d2q)


def _compose(g0, g1, g2, a: Jet2) -> Jet2:
    # (g∘a)' = g'(a) a', (g∘a)'' = g''(a) a'^2 + g'(a) a''
    return Jet2(g0, g1 * a.df, g2 * a.df * a.df + g1 * a.d2f)


def eval_jet2(e: Expr, z, eps: float = SINGULAR_EPS) -> Jet2:
    """Second-order jet of ``e`` at ``z`` (complex scalar or array)."""
    z = np.asarray(z, dtype=complex)
    one = np.ones_like(z)
    zero = np.zeros_like(z)

    def ev(n) -> Jet2:
        if isinstance(n, Const):
            return Jet2(n.value * one, zero, zero)
        if isinstance(n, Var):
            return Jet2(z, one, zero)
        if isinstance(n, Neg):
            a = ev(n.arg)
            return Jet2(-a.f, -a.df, -a.d2f)
        if isinstance(n, BinOp):
            a, b = ev(n.left), ev(n.right)
            if n.op == "+":
                return Jet2(a.f + b.f, a.df + b.df, a.d2f + b.d2f)
            if n.op == "-":
                return Jet2(a.f - b.f, a.df - b.df, a.d2f - b.d2f)
            if n.op == "*":
                return _mul(a, b)
            return _div(a, b, z, eps)
        if isinstance(n, Pow):
            a = ev(n.base)
            k = abs(n.exponent)
            acc = Jet2(one, zero, zero)
            sq = a
            while k:
                if k & 1:
                    acc = _mul(acc, sq)
                k >>= 1
                if k:
                    sq = _mul(sq, sq)
            if n.exponent < 0:
                acc = _div(Jet2(one, zero, zero), acc, z, eps)
            return acc
        if isinstance(n, Call):
            a = ev(n.arg)
            u = a.f
            if n.func == "exp":
                v = np.exp(u)
                return _compose(v, v, v, a)
            if n.func == "sin":
                s, c = np.sin(u), np.cos(u)
                return _compose(s, c, -s, a)
            if n.func == "cos":
                s, c = np.sin(u), np.cos(u)
                return _compose(c, -s, -c, a)
            if n.func == "sinh":
                s, c = np.sinh(u), np.cosh(u)
                return _compose(s, c, s, a)
            if n.func == "cosh":
                s, c = np.sinh(u), np.cosh(u)
                return _compose(c, s, c, a)
            if n.func == "log":
                _check_small(u, "log argument", z, eps)
                inv = 1.0 / u
                return _compose(np.log(u), inv, -inv * inv, a)
            raise UnknownFunction(n.func)
        raise TypeError(f"not an expression node: {n!r}")

    with np.errstate(all="ignore"):
        jet = ev(e)
    finite = np.isfinite(jet.f) & np.isfinite(jet.df) & np.isfinite(jet.d2f)
    if not np.all(finite):
        idx = np.flatnonzero(~np.ravel(finite))[0]
        raise SingularPoint("non-finite jet", np.ravel(np.broadcast_to(z, np.shape(finite)))[idx])
    if z.ndim == 0:
        return Jet2(complex(jet.f), complex(jet.df), complex(jet.d2f))
    return jet


def validate_on(e: Expr, nodes, eps: float = SINGULAR_EPS) -> None:
    """Pre-scan denominators and log arguments on ``nodes``; raise SingularPoint naming the node."""
    nodes = np.asarray(nodes, dtype=complex)
    for what, sub in singular_risks(e):
        val = eval_jet2(sub, nodes, eps).f
        _check_small(val, what, nodes, eps)
