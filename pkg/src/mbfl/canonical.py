"""AST-level canonical forms for equivalent/duplicate mutant detection.

Two programs with equal canonical forms produce the same status, output and
step count on every input, so pruning on canonical equality is sound (the
converse does not hold). Every rewrite below preserves:

* the value of each expression under 64-bit wrap-around,
* whether evaluation raises a division-by-zero error,
* the number of statement steps executed.

The last point is why a constant-condition ``if`` folds to a ``skip`` tick
followed by the taken branch, rather than to the branch alone: when a loop
runs out of step budget the partial output depends on the step count.
"""
from __future__ import annotations

from typing import Hashable

from .minilang.ast import (
    Assign,
    BinOp,
    CompoundAssign,
    Const,
    Expr,
    If,
    Print,
    Program,
    Return,
    Skip,
    Statement,
    UnOp,
    Var,
    While,
    wrap,
)

_COMMUTATIVE = frozenset({"+", "*", "==", "!=", "&", "|", "^"})
_BOOLEAN_OPS = frozenset({"<", "<=", ">", ">=", "==", "!=", "&&", "||"})
_NEGATED_REL = {"<": ">=", "<=": ">", ">": "<=", ">=": "<", "==": "!=", "!=": "=="}
_TICK = ("skip",)


def _fold(op: str, a: int, b: int) -> int | None:
    if op == "+":
        return wrap(a + b)
    if op == "-":
        return wrap(a - b)
    if op == "*":
        return wrap(a * b)
    if op in ("/", "%"):
        if b == 0:
            return None
        q = abs(a) // abs(b)
        if (a < 0) != (b < 0):
            q = -q
        return wrap(q) if op == "/" else a - b * q
    if op == "<":
        return int(a < b)
    if op == "<=":
        return int(a <= b)
    if op == ">":
        return int(a > b)
    if op == ">=":
        return int(a >= b)
    if op == "==":
        return int(a == b)
    if op == "!=":
        return int(a != b)
    if op == "&&":
        return int(bool(a) and bool(b))
    if op == "||":
        return int(bool(a) or bool(b))
    if op == "&":
        return a & b
    if op == "|":
        return a | b
    if op == "^":
        return a ^ b
    raise ValueError(op)


def is_total(e: Expr) -> bool:
    """True if evaluating ``e`` can never raise (no division or modulo)."""
    if isinstance(e, BinOp):
        return e.op not in ("/", "%") and is_total(e.left) and is_total(e.right)
    if isinstance(e, UnOp):
        return is_total(e.operand)
    return True


def is_boolean(e: Expr) -> bool:
    if isinstance(e, Const):
        return e.value in (0, 1)
    if isinstance(e, BinOp):
        return e.op in _BOOLEAN_OPS
    return isinstance(e, UnOp) and e.op == "!"


def _sort_key(e: Expr) -> tuple[int, str]:
    # constants sort last so that (x + c1) + c2 exposes c1 for folding
    return (1 if isinstance(e, Const) else 0, repr(e))


def _truth(e: Expr) -> Expr:
    """Canonical 0/1 expression with the truthiness of ``e``."""
    return e if is_boolean(e) else canon_expr(BinOp("!=", e, Const(0)))


def canon_expr(e: Expr) -> Expr:
    if isinstance(e, (Const, Var)):
        return e
    if isinstance(e, UnOp):
        return _canon_unary(e.op, canon_expr(e.operand))
    return _canon_binary(e.op, canon_expr(e.left), canon_expr(e.right))


def _canon_unary(op: str, x: Expr) -> Expr:
    if isinstance(x, Const):
        return Const(wrap(-x.value) if op == "-" else int(x.value == 0))
    if op == "-":
        if isinstance(x, UnOp) and x.op == "-":
            return x.operand
        if isinstance(x, BinOp) and x.op == "-":
            # -(a - b) == b - a under wrap-around
            return _canon_binary("-", x.right, x.left)
        return UnOp("-", x)
    if isinstance(x, UnOp) and x.op == "!":
        return _truth(x.operand)
    if isinstance(x, BinOp) and x.op in _NEGATED_REL:
        return _canon_binary(_NEGATED_REL[x.op], x.left, x.right)
    return UnOp("!", x)


def _canon_binary(op: str, a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        folded = _fold(op, a.value, b.value)
        if folded is not None:
            return Const(folded)
        return BinOp(op, a, b)

    if op in ("&&", "||"):
        return _canon_logical(op, a, b)

    if op == ">":
        op, a, b = "<", b, a
    elif op == ">=":
        op, a, b = "<=", b, a

    if op == "-":
        if isinstance(b, Const):
            return _canon_binary("+", a, Const(wrap(-b.value)))
        if isinstance(b, UnOp) and b.op == "-":
            return _canon_binary("+", a, b.operand)
        if a == Const(0):
            return _canon_unary("-", b)
        return BinOp("-", a, b)

    if op in _COMMUTATIVE and _sort_key(b) < _sort_key(a):
        a, b = b, a

    if op == "+":
        if b == Const(0):
            return a
        if isinstance(b, UnOp) and b.op == "-":
            return _canon_binary("-", a, b.operand)
        if isinstance(a, UnOp) and a.op == "-":
            return _canon_binary("-", b, a.operand)
        if (
            isinstance(b, Const)
            and isinstance(a, BinOp)
            and a.op == "+"
            and isinstance(a.right, Const)
        ):
            return _canon_binary("+", a.left, Const(wrap(a.right.value + b.value)))
    elif op == "*":
        if b == Const(1):
            return a
        if b == Const(0) and is_total(a):
            return Const(0)
        if b == Const(-1):
            return _canon_unary("-", a)
    elif op == "/":
        if b == Const(1):
            return a
    elif op == "%":
        if b in (Const(1), Const(-1)) and is_total(a):
            return Const(0)
    elif op in ("|", "^"):
        if b == Const(0):
            return a
        if op == "^" and a == b and is_total(a):
            return Const(0)
        if op == "|" and a == b:
            return a
    elif op == "&":
        if b == Const(0) and is_total(a):
            return Const(0)
        if b == Const(-1) or a == b:
            return a
    elif op in ("==", "<=") and a == b and is_total(a):
        return Const(1)
    elif op in ("!=", "<") and a == b and is_total(a):
        return Const(0)
    return BinOp(op, a, b)


def _canon_logical(op: str, a: Expr, b: Expr) -> Expr:
    absorbing = 0 if op == "&&" else 1
    if isinstance(a, Const):
        if bool(a.value) == bool(absorbing):
            return Const(absorbing)
        return _truth(b)
    if isinstance(b, Const):
        if bool(b.value) != bool(absorbing):
            return _truth(a)
        if is_total(a):
            return Const(absorbing)
    if a == b:
        return _truth(a)
    return BinOp(op, a, b)


def _cond_key(e: Expr) -> tuple[Expr, bool]:
    """Strip truthiness wrappers off a condition; returns (cond, negated)."""
    negated = False
    while True:
        if isinstance(e, BinOp) and e.op == "!=" and isinstance(e.right, Const) and e.right.value == 0:
            e = e.left
        elif isinstance(e, UnOp) and e.op == "!":
            e = e.operand
            negated = not negated
        # a <= b is !(b < a) and a != b is !(a == b); operands are side-effect
        # free, so evaluation order does not matter
        elif isinstance(e, BinOp) and e.op == "<=":
            e = BinOp("<", e.right, e.left)
            negated = not negated
        elif isinstance(e, BinOp) and e.op == "!=":
            e = BinOp("==", e.left, e.right)
            negated = not negated
        else:
            return e, negated


def _canon_body(body: tuple[Statement, ...]) -> tuple[Hashable, ...]:
    out: list[Hashable] = []
    for stmt in body:
        out.extend(_canon_stmt(stmt))
        if isinstance(stmt, Return):
            break  # rest of the block is unreachable
    return tuple(out)


def _canon_stmt(s: Statement) -> list[Hashable]:
    if isinstance(s, Skip):
        return [_TICK]
    if isinstance(s, CompoundAssign):
        s = Assign(s.line, s.target, BinOp(s.op, Var(s.target), s.value))
    if isinstance(s, Assign):
        value = canon_expr(s.value)
        if value == Var(s.target):
            return [_TICK]
        return [("assign", s.target, value)]
    if isinstance(s, Print):
        return [("print", canon_expr(s.value))]
    if isinstance(s, Return):
        return [("return", canon_expr(s.value))]
    if isinstance(s, If):
        cond, negated = _cond_key(canon_expr(s.cond))
        then, orelse = _canon_body(s.then), _canon_body(s.orelse)
        if negated:
            then, orelse = orelse, then
        if isinstance(cond, Const):
            return [_TICK, *(then if cond.value else orelse)]
        return [("if", cond, then, orelse)]
    if isinstance(s, While):
        cond, negated = _cond_key(canon_expr(s.cond))
        if negated:
            cond = _canon_unary("!", cond)
        if isinstance(cond, Const) and not cond.value:
            return [_TICK]
        return [("while", cond, _canon_body(s.body))]
    raise TypeError(s)


def canonicalize(p: Program) -> Hashable:
    """Hashable normalized form of ``p``; line numbers are not part of it."""
    return (p.params, _canon_body(p.statements))
