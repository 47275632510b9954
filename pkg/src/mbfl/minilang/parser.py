"""Recursive-descent parser for the mini language.

Grammar (one statement per physical line, ``#`` starts a comment)::

    program   := ("param" IDENT ";")* stmt+
    stmt      := IDENT "=" expr ";"
               | IDENT ("+=" | "-=" | "*=" | "/=" | "%=") expr ";"
               | "if" "(" expr ")" "{" stmt* "}" ["else" "{" stmt* "}"]
               | "while" "(" expr ")" "{" stmt* "}"
               | "print" expr ";" | "return" expr ";"

Expression precedence follows C, lowest first: ``||``, ``&&``, ``|``, ``^``,
``&``, equality, relational, additive, multiplicative, unary.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

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
    iter_statements,
    statement_exprs,
    wrap,
)

KEYWORDS = {"param", "if", "else", "while", "print", "return", "skip"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>&&|\|\||<=|>=|==|!=|[-+*/%]=|[-+*/%<>!&|^=(){};])
    """,
    re.VERBOSE,
)

_BINARY_LEVELS: tuple[tuple[str, ...], ...] = (
    ("||",),
    ("&&",),
    ("|",),
    ("^",),
    ("&",),
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("+", "-"),
    ("*", "/", "%"),
)


class MiniLangSyntaxError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise MiniLangSyntaxError(
                f"unexpected character {source[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        text = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "ident" and text in KEYWORDS:
            tokens.append(Token("kw", text, line, pos - line_start + 1))
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, text, line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class Parser:
    def __init__(self, source: str, allow_skip: bool = False):
        self.tokens = tokenize(source)
        self.pos = 0
        self.allow_skip = allow_skip

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, tok: Token | None = None) -> MiniLangSyntaxError:
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return MiniLangSyntaxError(f"{message}, found {found}", tok.line, tok.col)

    def advance(self) -> Token:
        tok = self.tok
        self.pos += 1
        return tok

    def check(self, text: str) -> bool:
        return self.tok.kind in ("op", "kw") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.check(text):
            raise self.error(f"expected {text!r}")
        return self.advance()

    def expect_ident(self) -> Token:
        if self.tok.kind != "ident":
            raise self.error("expected identifier")
        return self.advance()

    def parse_program(self, source_name: str) -> Program:
        params: list[str] = []
        while self.check("param"):
            self.advance()
            name = self.expect_ident()
            if name.text in params:
                raise MiniLangSyntaxError(
                    f"duplicate parameter {name.text!r}", name.line, name.col
                )
            params.append(name.text)
            self.expect(";")
        body = self.parse_block_body(top=True)
        if not body:
            raise self.error("program has no executable statements")
        program = Program(source_name, tuple(body), tuple(params))
        # mutant sources may read a variable whose only assignment was deleted;
        # such reads see the zero initial value, so they are only checked in
        # hand-written programs
        _check_program(program, check_defined=not self.allow_skip)
        return program

    def parse_block_body(self, top: bool = False) -> list[Statement]:
        body = []
        while not (self.tok.kind == "eof" or (not top and self.check("}"))):
            body.append(self.parse_statement())
        return body

    def parse_braced(self) -> tuple[tuple[Statement, ...], int]:
        self.expect("{")
        body = self.parse_block_body()
        close = self.expect("}")
        return tuple(body), close.line

    def parse_statement(self) -> Statement:
        tok = self.tok
        line = tok.line
        if tok.kind == "kw":
            if tok.text == "if":
                self.advance()
                cond = self.parse_paren_cond()
                then, end_line = self.parse_braced()
                else_line = None
                orelse: tuple[Statement, ...] = ()
                if self.check("else"):
                    else_line = end_line
                    self.advance()
                    orelse, end_line = self.parse_braced()
                return If(line, cond, then, orelse, else_line, end_line)
            if tok.text == "while":
                self.advance()
                cond = self.parse_paren_cond()
                body, end_line = self.parse_braced()
                return While(line, cond, body, end_line)
            if tok.text in ("print", "return"):
                self.advance()
                value = self.parse_expr()
                self.expect(";")
                return (Print if tok.text == "print" else Return)(line, value)
            if tok.text == "skip" and self.allow_skip:
                self.advance()
                self.expect(";")
                return Skip(line)
            if tok.text == "param":
                raise self.error("parameter declarations must precede statements")
            raise self.error("expected statement")
        if tok.kind == "ident":
            self.advance()
            op = self.tok
            if self.check("="):
                self.advance()
                value = self.parse_expr()
                self.expect(";")
                return Assign(line, tok.text, value)
            if op.kind == "op" and op.text in ("+=", "-=", "*=", "/=", "%="):
                self.advance()
                value = self.parse_expr()
                self.expect(";")
                return CompoundAssign(line, tok.text, op.text[0], value)
            raise self.error("expected assignment operator")
        raise self.error("expected statement")

    def parse_paren_cond(self) -> Expr:
        self.expect("(")
        cond = self.parse_expr()
        self.expect(")")
        return cond

    def parse_expr(self, level: int = 0) -> Expr:
        if level == len(_BINARY_LEVELS):
            return self.parse_unary()
        ops = _BINARY_LEVELS[level]
        left = self.parse_expr(level + 1)
        while self.tok.kind == "op" and self.tok.text in ops:
            op = self.advance().text
            right = self.parse_expr(level + 1)
            left = BinOp(op, left, right)
        return left

    def parse_unary(self) -> Expr:
        if self.check("-") or self.check("!"):
            op = self.advance().text
            return UnOp(op, self.parse_unary())
        return self.parse_primary()

    def parse_primary(self) -> Expr:
        tok = self.tok
        if tok.kind == "int":
            self.advance()
            return Const(wrap(int(tok.text)))
        if tok.kind == "ident":
            self.advance()
            return Var(tok.text)
        if self.check("("):
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        raise self.error("expected expression")


def _check_program(program: Program, check_defined: bool = True) -> None:
    prev = 0
    assigned = set(program.params)
    stmts = list(iter_statements(program.statements))
    for stmt in stmts:
        if stmt.line <= prev:
            raise MiniLangSyntaxError("more than one statement on a line", stmt.line, 1)
        prev = stmt.line
        if isinstance(stmt, (Assign, CompoundAssign)):
            assigned.add(stmt.target)
    if not check_defined:
        return
    for stmt in stmts:
        for expr in statement_exprs(stmt):
            for name in _names(expr):
                if name not in assigned:
                    raise MiniLangSyntaxError(f"undefined variable {name!r}", stmt.line, 1)


def _names(expr: Expr):
    if isinstance(expr, Var):
        yield expr.name
    elif isinstance(expr, BinOp):
        yield from _names(expr.left)
        yield from _names(expr.right)
    elif isinstance(expr, UnOp):
        yield from _names(expr.operand)


def parse(source: str, source_name: str = "<string>", allow_skip: bool = False) -> Program:
    """Parse mini-language text into a :class:`Program`.

    ``allow_skip`` parses a serialized mutant: ``skip;`` is accepted and reads
    of never-assigned variables are not reported.
    """
    return Parser(source, allow_skip).parse_program(source_name)
