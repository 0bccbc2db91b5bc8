"""Scalar expressions over x1..xn with exact forward-mode first derivatives.

The grammar is infix with standard precedence; ``^`` binds tightest and only
accepts a nonnegative integer literal exponent, which keeps differentiation
total and exact.  Admitted primitives are smooth: + - * / ^ unary minus and
sin, cos, exp, sqrt.  Evaluation is vectorized over numpy point batches.

sqrt at exactly 0 evaluates to value 0 with zero partials and raises a
"subgradient at kink" diagnostic flag on the jet; this makes fields such as
``sqrt(x1^2+x2^2)*x1`` C^1 at the origin with the expected zero derivative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArityMismatch, DomainError, ExprSyntaxError, UnknownVariable

SQRT_NEG_TOL = 1e-12

_FUNCTIONS = ("sin", "cos", "exp", "sqrt")

# precedence levels used by the printer
_P_ADD, _P_MUL, _P_UNARY, _P_POW, _P_ATOM = 1, 2, 3, 4, 5


def _fmt(v: float) -> str:
    return format(v, ".17g")


# --------------------------------------------------------------------------
# AST
# --------------------------------------------------------------------------

class Node:
    prec = _P_ATOM

    def val(self, x):
        raise NotImplementedError

    def jet(self, x, ctx):
        raise NotImplementedError


@dataclass(frozen=True)
class Const(Node):
    v: float

    def val(self, x):
        return np.full(x.shape[:-1], self.v)

    def jet(self, x, ctx):
        return np.full(x.shape[:-1], self.v), np.zeros_like(x)

    def __str__(self):
        return _fmt(self.v)


@dataclass(frozen=True)
class Var(Node):
    i: int  # zero-based

    def val(self, x):
        return x[..., self.i]

    def jet(self, x, ctx):
        g = np.zeros_like(x)
        g[..., self.i] = 1.0
        return x[..., self.i], g

    def __str__(self):
        return f"x{self.i + 1}"


@dataclass(frozen=True)
class Add(Node):
    a: Node
    b: Node
    prec = _P_ADD

    def val(self, x):
        return self.a.val(x) + self.b.val(x)

    def jet(self, x, ctx):
        va, ga = self.a.jet(x, ctx)
        vb, gb = self.b.jet(x, ctx)
        return va + vb, ga + gb


@dataclass(frozen=True)
class Sub(Node):
    a: Node
    b: Node
    prec = _P_ADD

    def val(self, x):
        return self.a.val(x) - self.b.val(x)

    def jet(self, x, ctx):
        va, ga = self.a.jet(x, ctx)
        vb, gb = self.b.jet(x, ctx)
        return va - vb, ga - gb


@dataclass(frozen=True)
class Mul(Node):
    a: Node
    b: Node
    prec = _P_MUL

    def val(self, x):
        return self.a.val(x) * self.b.val(x)

    def jet(self, x, ctx):
        va, ga = self.a.jet(x, ctx)
        vb, gb = self.b.jet(x, ctx)
        return va * vb, va[..., None] * gb + vb[..., None] * ga


@dataclass(frozen=True)
class Div(Node):
    a: Node
    b: Node
    prec = _P_MUL

    def val(self, x):
        vb = self.b.val(x)
        if np.any(vb == 0.0):
            raise DomainError("division by zero")
        return self.a.val(x) / vb

    def jet(self, x, ctx):
        va, ga = self.a.jet(x, ctx)
        vb, gb = self.b.jet(x, ctx)
        if np.any(vb == 0.0):
            raise DomainError("division by zero")
        v = va / vb
        return v, (ga - v[..., None] * gb) / vb[..., None]


@dataclass(frozen=True)
class Pow(Node):
    a: Node
    k: int
    prec = _P_POW

    def val(self, x):
        return self.a.val(x) ** self.k

    def jet(self, x, ctx):
        va, ga = self.a.jet(x, ctx)
        if self.k == 0:
            return np.ones_like(va), np.zeros_like(ga)
        return va ** self.k, (self.k * va ** (self.k - 1))[..., None] * ga


@dataclass(frozen=True)
class Neg(Node):
    a: Node
    prec = _P_UNARY

    def val(self, x):
        return -self.a.val(x)

    def jet(self, x, ctx):
        va, ga = self.a.jet(x, ctx)
        return -va, -ga


@dataclass(frozen=True)
class Fun(Node):
    name: str
    a: Node

    def val(self, x):
        va = self.a.val(x)
        if self.name == "sin":
            return np.sin(va)
        if self.name == "cos":
            return np.cos(va)
        if self.name == "exp":
            return np.exp(va)
        # sqrt
        if np.any(va < -SQRT_NEG_TOL):
            raise DomainError("sqrt of negative argument")
        return np.sqrt(np.maximum(va, 0.0))

    def jet(self, x, ctx):
        va, ga = self.a.jet(x, ctx)
        if self.name == "sin":
            return np.sin(va), np.cos(va)[..., None] * ga
        if self.name == "cos":
            return np.cos(va), -np.sin(va)[..., None] * ga
        if self.name == "exp":
            e = np.exp(va)
            return e, e[..., None] * ga
        if np.any(va < -SQRT_NEG_TOL):
            raise DomainError("sqrt of negative argument")
        va = np.maximum(va, 0.0)
        v = np.sqrt(va)
        at_kink = va == 0.0
        if np.any(at_kink):
            ctx["kink"] = True
        safe = np.where(at_kink, 1.0, v)
        g = np.where(at_kink[..., None], 0.0, ga / (2.0 * safe[..., None]))
        return v, g


# --------------------------------------------------------------------------
# Lexer / parser
# --------------------------------------------------------------------------

@dataclass
class _Tok:
    kind: str   # num ident op lparen rparen end
    text: str
    pos: int
    value: float = 0.0


def _lex(text):
    toks = []
    i, m = 0, len(text)
    while i < m:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit() or c == ".":
            j = i
            while j < m and (text[j].isdigit() or text[j] == "."):
                j += 1
            if j < m and text[j] in "eE":
                k = j + 1
                if k < m and text[k] in "+-":
                    k += 1
                if k < m and text[k].isdigit():
                    while k < m and text[k].isdigit():
                        k += 1
                    j = k
            lit = text[i:j]
            try:
                v = float(lit)
            except ValueError:
                raise ExprSyntaxError(f"bad number literal {lit!r}", i)
            toks.append(_Tok("num", lit, i, v))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < m and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Tok("ident", text[i:j], i))
            i = j
            continue
        if c in "+-*/^":
            toks.append(_Tok("op", c, i))
            i += 1
            continue
        if c == "(":
            toks.append(_Tok("lparen", c, i))
            i += 1
            continue
        if c == ")":
            toks.append(_Tok("rparen", c, i))
            i += 1
            continue
        raise ExprSyntaxError(f"unexpected character {c!r}", i)
    toks.append(_Tok("end", "", m))
    return toks


class _Parser:
    def __init__(self, text, arity):
        self.text = text
        self.arity = arity
        self.toks = _lex(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def next(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind, what):
        t = self.next()
        if t.kind != kind:
            raise ExprSyntaxError(f"expected {what}", t.pos)
        return t

    def parse(self):
        node = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise ExprSyntaxError(f"unexpected token {t.text!r}", t.pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.next().text
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.next().text
            rhs = self.unary()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def unary(self):
        t = self.peek()
        if t.kind == "op" and t.text == "-":
            self.next()
            return Neg(self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        t = self.peek()
        if t.kind == "op" and t.text == "^":
            self.next()
            e = self.next()
            if e.kind != "num" or e.value != int(e.value) or e.value < 0:
                raise ExprSyntaxError("exponent must be a nonnegative integer literal", e.pos)
            node = Pow(node, int(e.value))
        return node

    def atom(self):
        t = self.next()
        if t.kind == "num":
            return Const(t.value)
        if t.kind == "lparen":
            node = self.expr()
            self.expect("rparen", "')'")
            return node
        if t.kind == "ident":
            if t.text in _FUNCTIONS:
                self.expect("lparen", "'(' after function name")
                arg = self.expr()
                self.expect("rparen", "')'")
                return Fun(t.text, arg)
            if len(t.text) > 1 and t.text[0] == "x" and t.text[1:].isdigit():
                idx = int(t.text[1:])
                if not 1 <= idx <= self.arity:
                    raise ArityMismatch(
                        f"variable {t.text} exceeds arity {self.arity}")
                return Var(idx - 1)
            raise UnknownVariable(f"unknown identifier {t.text!r}")
        raise ExprSyntaxError("expected a value", t.pos)


# --------------------------------------------------------------------------
# Public API
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class JetValue:
    value: float
    partials: np.ndarray
    kink: bool = False


@dataclass(frozen=True)
class Expression:
    """Immutable parsed expression of a fixed arity; evaluation is pure."""

    root: Node
    arity: int

    def __str__(self):
        return _print(self.root)

    def _points(self, point):
        x = np.asarray(point, dtype=float)
        if x.shape[-1] != self.arity:
            raise ArityMismatch(
                f"point has length {x.shape[-1]}, expected {self.arity}")
        return x

    def evaluate(self, point) -> float:
        x = self._points(point)
        v = self.root.val(x)
        if not np.all(np.isfinite(v)):
            raise DomainError("non-finite value in evaluation")
        return float(v) if x.ndim == 1 else v

    def values(self, points) -> np.ndarray:
        """Batch evaluation over an (m, n) array of points."""
        return self.evaluate(points)

    def eval_jet(self, point) -> JetValue:
        x = self._points(point)
        ctx = {"kink": False}
        v, g = self.root.jet(x, ctx)
        if not (np.all(np.isfinite(v)) and np.all(np.isfinite(g))):
            raise DomainError("non-finite value in jet evaluation")
        return JetValue(float(v), g, ctx["kink"])

    def jets(self, points):
        """Batch jets: returns (values (m,), gradients (m, n))."""
        x = self._points(points)
        ctx = {"kink": False}
        v, g = self.root.jet(x, ctx)
        if not (np.all(np.isfinite(v)) and np.all(np.isfinite(g))):
            raise DomainError("non-finite value in jet evaluation")
        return v, g

    def gradient(self, point) -> np.ndarray:
        return self.eval_jet(point).partials


def parse(text: str, arity: int) -> Expression:
    """Parse ``text`` over variables x1..x{arity}; arity must be 1, 2 or 3."""
    if arity not in (1, 2, 3):
        raise ArityMismatch(f"arity must be 1, 2 or 3, got {arity}")
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 0)
    root = _Parser(text, arity).parse()
    return Expression(root, arity)


def constant(v: float, arity: int) -> Expression:
    return Expression(Const(float(v)), arity)


def _print(node, parent_prec=0):
    if isinstance(node, Const):
        s = _fmt(node.v)
        # a leading minus inside a tighter context needs parentheses
        if node.v < 0 and parent_prec > _P_ADD:
            return f"({s})"
        return s
    if isinstance(node, Var):
        return str(node)
    if isinstance(node, Fun):
        return f"{node.name}({_print(node.a)})"
    if isinstance(node, Neg):
        s = "-" + _print(node.a, _P_UNARY)
        return f"({s})" if parent_prec > _P_UNARY else s
    if isinstance(node, Pow):
        s = f"{_print(node.a, _P_POW + 1)}^{node.k}"
        return f"({s})" if parent_prec > _P_POW else s
    ops = {Add: " + ", Sub: " - ", Mul: "*", Div: "/"}
    sym = ops[type(node)]
    prec = node.prec
    # left operand may share the level; the right one needs a strictly
    # tighter level so reparsing rebuilds the identical tree
    s = _print(node.a, prec) + sym + _print(node.b, prec + 1)
    return f"({s})" if parent_prec > prec else s


def check_derivatives(e: Expression, point, step: float) -> float:
    """Max abs discrepancy between central differences and the exact jet."""
    x = np.asarray(point, dtype=float)
    jet = e.eval_jet(x)
    worst = 0.0
    for i in range(e.arity):
        xp, xm = x.copy(), x.copy()
        xp[i] += step
        xm[i] -= step
        fd = (e.evaluate(xp) - e.evaluate(xm)) / (2.0 * step)
        worst = max(worst, abs(fd - jet.partials[i]))
    return worst
