"""AST node types for the mini language.

Expressions and statements are frozen dataclasses so programs can be hashed,
shared between threads and pickled to worker processes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

ARITH_OPS = ("+", "-", "*", "/", "%")
REL_OPS = ("<", "<=", ">", ">=", "==", "!=")
LOGIC_OPS = ("&&", "||")
BIT_OPS = ("&", "|", "^")
BINARY_OPS = ARITH_OPS + REL_OPS + LOGIC_OPS + BIT_OPS
UNARY_OPS = ("-", "!")

INT_BITS = 64
INT_MIN = -(1 << (INT_BITS - 1))
INT_MAX = (1 << (INT_BITS - 1)) - 1
_MASK = (1 << INT_BITS) - 1


def wrap(value: int) -> int:
    """Reduce an arbitrary Python int to the signed 64-bit range."""
    return ((value - INT_MIN) & _MASK) + INT_MIN


@dataclass(frozen=True)
class Const:
    value: int
    kind = "int-literal"


@dataclass(frozen=True)
class Var:
    name: str
    kind = "var-ref"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    kind = "binary-op"


@dataclass(frozen=True)
class UnOp:
    op: str
    operand: "Expr"
    kind = "unary-op"


Expr = Union[Const, Var, BinOp, UnOp]


@dataclass(frozen=True)
class Assign:
    line: int
    target: str
    value: Expr
    kind = "assign"


@dataclass(frozen=True)
class CompoundAssign:
    line: int
    target: str
    op: str
    value: Expr
    kind = "compound-assign"


@dataclass(frozen=True)
class If:
    line: int
    cond: Expr
    then: tuple["Statement", ...]
    orelse: tuple["Statement", ...] = ()
    # layout only: where the closing braces sat in the source
    else_line: int | None = field(default=None, compare=False)
    end_line: int | None = field(default=None, compare=False)
    kind = "if"


@dataclass(frozen=True)
class While:
    line: int
    cond: Expr
    body: tuple["Statement", ...]
    end_line: int | None = field(default=None, compare=False)
    kind = "while"


@dataclass(frozen=True)
class Print:
    line: int
    value: Expr
    kind = "print"


@dataclass(frozen=True)
class Return:
    line: int
    value: Expr
    kind = "return"


@dataclass(frozen=True)
class Skip:
    line: int
    kind = "skip"


Statement = Union[Assign, CompoundAssign, If, While, Print, Return, Skip]


def iter_statements(body: tuple[Statement, ...]) -> Iterator[Statement]:
    """Pre-order walk; yields statements in source-line order."""
    for stmt in body:
        yield stmt
        if isinstance(stmt, If):
            yield from iter_statements(stmt.then)
            yield from iter_statements(stmt.orelse)
        elif isinstance(stmt, While):
            yield from iter_statements(stmt.body)


def statement_exprs(stmt: Statement) -> tuple[Expr, ...]:
    if isinstance(stmt, (Assign, CompoundAssign, Print, Return)):
        return (stmt.value,)
    if isinstance(stmt, (If, While)):
        return (stmt.cond,)
    return ()


@dataclass(frozen=True)
class Program:
    source_name: str
    statements: tuple[Statement, ...]
    params: tuple[str, ...] = ()

    @property
    def lines(self) -> tuple[int, ...]:
        """Executable line numbers, ascending. This is the SLOC universe."""
        return tuple(s.line for s in iter_statements(self.statements))

    def statement_at(self, line: int) -> Statement:
        for stmt in iter_statements(self.statements):
            if stmt.line == line:
                return stmt
        raise KeyError(line)

    def variables(self) -> tuple[str, ...]:
        """Params first, then other assigned/read names in first-use order."""
        seen = dict.fromkeys(self.params)
        for stmt in iter_statements(self.statements):
            if isinstance(stmt, (Assign, CompoundAssign)):
                seen.setdefault(stmt.target)
            for expr in statement_exprs(stmt):
                for name in _expr_vars(expr):
                    seen.setdefault(name)
        return tuple(seen)


def _expr_vars(expr: Expr) -> Iterator[str]:
    if isinstance(expr, Var):
        yield expr.name
    elif isinstance(expr, BinOp):
        yield from _expr_vars(expr.left)
        yield from _expr_vars(expr.right)
    elif isinstance(expr, UnOp):
        yield from _expr_vars(expr.operand)
