"""Compile a Program into flat stack-machine bytecode.

Both VM backends (``_vm`` compiled, ``_vm_py`` pure Python) execute exactly
this instruction stream, so they agree on outputs, coverage and step counts.

Layout: a flat list of int64 words. Opcodes with an operand are followed by
one word (constant value, variable slot, coverage index or jump target).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

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

HALT = 0
STMT = 1  # operand: coverage index; counts one step
CONST = 2
LOAD = 3
STORE = 4
PRINT = 5
RETURN = 6
JMP = 7
JZ = 8
JNZ = 9
BOOL = 10
NEG = 11
NOT = 12
ADD = 20
SUB = 21
MUL = 22
DIV = 23
MOD = 24
LT = 25
LE = 26
GT = 27
GE = 28
EQ = 29
NE = 30
BAND = 31
BOR = 32
BXOR = 33

BINARY_OPCODES = {
    "+": ADD, "-": SUB, "*": MUL, "/": DIV, "%": MOD,
    "<": LT, "<=": LE, ">": GT, ">=": GE, "==": EQ, "!=": NE,
    "&": BAND, "|": BOR, "^": BXOR,
}
WITH_OPERAND = frozenset({STMT, CONST, LOAD, STORE, JMP, JZ, JNZ})

STATUS_NAMES = ("completed", "runtime-error", "step-budget-exceeded")


@dataclass(frozen=True)
class CompiledProgram:
    code: np.ndarray  # int64
    n_slots: int
    n_params: int
    lines: tuple[int, ...]  # coverage index -> line number
    max_stack: int


class _Compiler:
    def __init__(self, program: Program):
        self.slots = {name: i for i, name in enumerate(program.variables())}
        self.line_index = {line: i for i, line in enumerate(program.lines)}
        self.code: list[int] = []
        self.depth = 0
        self.max_depth = 1

    def emit(self, *words: int) -> int:
        self.code.extend(words)
        return len(self.code) - 1

    def push(self, n: int = 1) -> None:
        self.depth += n
        self.max_depth = max(self.max_depth, self.depth)

    def expr(self, e: Expr) -> None:
        if isinstance(e, Const):
            self.emit(CONST, e.value)
            self.push()
        elif isinstance(e, Var):
            self.emit(LOAD, self.slots[e.name])
            self.push()
        elif isinstance(e, UnOp):
            self.expr(e.operand)
            self.emit(NEG if e.op == "-" else NOT)
        elif e.op in ("&&", "||"):
            # short-circuit; result normalised to 0/1
            self.expr(e.left)
            skip = self.emit(JZ if e.op == "&&" else JNZ, -1)
            self.push(-1)
            self.expr(e.right)
            self.emit(BOOL)
            done = self.emit(JMP, -1)
            self.push(-1)
            self.code[skip] = len(self.code)
            self.emit(CONST, 0 if e.op == "&&" else 1)
            self.push()
            self.code[done] = len(self.code)
        else:
            self.expr(e.left)
            self.expr(e.right)
            self.emit(BINARY_OPCODES[e.op])
            self.push(-1)

    def body(self, stmts: tuple[Statement, ...]) -> None:
        for s in stmts:
            self.statement(s)

    def statement(self, s: Statement) -> None:
        top = len(self.code)
        self.emit(STMT, self.line_index[s.line])
        if isinstance(s, Assign):
            self.expr(s.value)
            self.emit(STORE, self.slots[s.target])
            self.push(-1)
        elif isinstance(s, CompoundAssign):
            self.emit(LOAD, self.slots[s.target])
            self.push()
            self.expr(s.value)
            self.emit(BINARY_OPCODES[s.op])
            self.push(-1)
            self.emit(STORE, self.slots[s.target])
            self.push(-1)
        elif isinstance(s, (Print, Return)):
            self.expr(s.value)
            self.emit(PRINT if isinstance(s, Print) else RETURN)
            self.push(-1)
        elif isinstance(s, If):
            self.expr(s.cond)
            jz = self.emit(JZ, -1)
            self.push(-1)
            self.body(s.then)
            if s.orelse:
                jmp = self.emit(JMP, -1)
                self.code[jz] = len(self.code)
                self.body(s.orelse)
                self.code[jmp] = len(self.code)
            else:
                self.code[jz] = len(self.code)
        elif isinstance(s, While):
            self.expr(s.cond)
            jz = self.emit(JZ, -1)
            self.push(-1)
            self.body(s.body)
            self.emit(JMP, top)
            self.code[jz] = len(self.code)
        elif not isinstance(s, Skip):
            raise TypeError(s)


def compile_program(program: Program) -> CompiledProgram:
    c = _Compiler(program)
    c.body(program.statements)
    c.emit(HALT)
    return CompiledProgram(
        code=np.asarray(c.code, dtype=np.int64),
        n_slots=len(c.slots),
        n_params=len(program.params),
        lines=program.lines,
        max_stack=c.max_depth,
    )
