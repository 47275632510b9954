"""Render ASTs back to mini-language source.

Programs are printed line-preserving: every statement lands on its original
line number so a printed mutant re-parses to the same SLOC universe.
"""
from __future__ import annotations

from collections import defaultdict

from .ast import (
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
)

_PREC = {
    "||": 1, "&&": 2, "|": 3, "^": 4, "&": 5,
    "==": 6, "!=": 6,
    "<": 7, "<=": 7, ">": 7, ">=": 7,
    "+": 8, "-": 8,
    "*": 9, "/": 9, "%": 9,
}
_UNARY_PREC = 10


def _prec(expr: Expr) -> int:
    if isinstance(expr, BinOp):
        return _PREC[expr.op]
    if isinstance(expr, UnOp) or (isinstance(expr, Const) and expr.value < 0):
        return _UNARY_PREC
    return 11


def unparse_expr(expr: Expr) -> str:
    if isinstance(expr, Const):
        return str(expr.value)
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, UnOp):
        inner = unparse_expr(expr.operand)
        if isinstance(expr.operand, BinOp) or _prec(expr.operand) == _UNARY_PREC:
            inner = f"({inner})"
        return f"{expr.op}{inner}"
    p = _PREC[expr.op]
    left = unparse_expr(expr.left)
    right = unparse_expr(expr.right)
    if _prec(expr.left) < p:
        left = f"({left})"
    if _prec(expr.right) <= p:
        right = f"({right})"
    return f"{left} {expr.op} {right}"


def statement_header(stmt: Statement) -> str:
    """Text of the statement's own line, without nested bodies."""
    if isinstance(stmt, Assign):
        return f"{stmt.target} = {unparse_expr(stmt.value)};"
    if isinstance(stmt, CompoundAssign):
        return f"{stmt.target} {stmt.op}= {unparse_expr(stmt.value)};"
    if isinstance(stmt, If):
        return f"if ({unparse_expr(stmt.cond)}) {{"
    if isinstance(stmt, While):
        return f"while ({unparse_expr(stmt.cond)}) {{"
    if isinstance(stmt, Print):
        return f"print {unparse_expr(stmt.value)};"
    if isinstance(stmt, Return):
        return f"return {unparse_expr(stmt.value)};"
    if isinstance(stmt, Skip):
        return "skip;"
    raise TypeError(stmt)


def to_source(program: Program) -> str:
    rows: dict[int, list[str]] = defaultdict(list)
    depth: dict[int, int] = {}

    def emit(line: int, text: str, level: int) -> None:
        rows[line].append(text)
        depth.setdefault(line, level)

    def walk(body: tuple[Statement, ...], level: int) -> int:
        last = 0
        for stmt in body:
            emit(stmt.line, statement_header(stmt), level)
            last = stmt.line
            if isinstance(stmt, If):
                last = walk(stmt.then, level + 1) or stmt.line
                if stmt.orelse or stmt.else_line is not None:
                    else_line = max(stmt.else_line or 0, last)
                    emit(else_line, "} else {", level)
                    last = walk(stmt.orelse, level + 1) or else_line
                end = max(stmt.end_line or 0, last)
                emit(end, "}", level)
                last = end
            elif isinstance(stmt, While):
                last = walk(stmt.body, level + 1) or stmt.line
                end = max(stmt.end_line or 0, last)
                emit(end, "}", level)
                last = end
        return last

    header = [f"param {name};" for name in program.params]
    walk(program.statements, 0)
    first = min(rows) if rows else len(header) + 1
    out: list[str] = []
    # params go on the lines before the first statement when room permits
    if len(header) < first:
        out.extend(header)
    elif header:
        rows[first].insert(0, " ".join(header))
    lineno = len(out)
    for line in sorted(rows):
        while lineno < line - 1:
            out.append("")
            lineno += 1
        out.append("    " * depth[line] + " ".join(rows[line]))
        lineno += 1
    return "\n".join(out) + "\n"
