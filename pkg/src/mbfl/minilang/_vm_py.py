"""Pure-Python bytecode VM, used when the compiled extension is unavailable."""
from __future__ import annotations

from .bytecode import (
    ADD, BAND, BOOL, BOR, BXOR, CONST, DIV, EQ, GE, GT, HALT, JMP, JNZ, JZ,
    LE, LOAD, LT, MOD, MUL, NE, NEG, NOT, PRINT, RETURN, STMT, STORE, SUB,
)

_MIN = -(1 << 63)
_MASK = (1 << 64) - 1


def run(code, n_slots, n_lines, inputs, budget, max_stack=256):
    """Execute ``code``; returns ``(status, output, covered, steps)``.

    ``status`` is 0 completed, 1 runtime error, 2 step budget exceeded.
    ``covered`` is a bytearray with one flag per coverage index. ``max_stack``
    is accepted for signature parity with the compiled build.
    """
    code = code.tolist() if hasattr(code, "tolist") else list(code)
    slots = [0] * n_slots
    slots[: len(inputs)] = inputs
    covered = bytearray(n_lines)
    output = []
    stack = []
    push = stack.append
    pop = stack.pop
    steps = 0
    pc = 0
    while True:
        op = code[pc]
        if op == STMT:
            if steps >= budget:
                return 2, output, covered, steps
            steps += 1
            covered[code[pc + 1]] = 1
            pc += 2
        elif op == LOAD:
            push(slots[code[pc + 1]])
            pc += 2
        elif op == CONST:
            push(code[pc + 1])
            pc += 2
        elif op == STORE:
            slots[code[pc + 1]] = pop()
            pc += 2
        elif op == JZ:
            pc = code[pc + 1] if pop() == 0 else pc + 2
        elif op == JNZ:
            pc = code[pc + 1] if pop() != 0 else pc + 2
        elif op == JMP:
            pc = code[pc + 1]
        elif op >= ADD:
            b = pop()
            a = pop()
            if op == ADD:
                r = ((a + b - _MIN) & _MASK) + _MIN
            elif op == SUB:
                r = ((a - b - _MIN) & _MASK) + _MIN
            elif op == MUL:
                r = ((a * b - _MIN) & _MASK) + _MIN
            elif op == DIV or op == MOD:
                if b == 0:
                    return 1, output, covered, steps
                q = abs(a) // abs(b)
                if (a < 0) != (b < 0):
                    q = -q
                r = ((q - _MIN) & _MASK) + _MIN if op == DIV else a - b * q
            elif op == LT:
                r = 1 if a < b else 0
            elif op == LE:
                r = 1 if a <= b else 0
            elif op == GT:
                r = 1 if a > b else 0
            elif op == GE:
                r = 1 if a >= b else 0
            elif op == EQ:
                r = 1 if a == b else 0
            elif op == NE:
                r = 1 if a != b else 0
            elif op == BAND:
                r = a & b
            elif op == BOR:
                r = a | b
            else:
                r = a ^ b
            push(r)
            pc += 1
        elif op == NEG:
            push(((-pop() - _MIN) & _MASK) + _MIN)
            pc += 1
        elif op == NOT:
            push(1 if pop() == 0 else 0)
            pc += 1
        elif op == BOOL:
            push(1 if pop() != 0 else 0)
            pc += 1
        elif op == PRINT:
            output.append(pop())
            pc += 1
        elif op == RETURN:
            output.append(pop())
            return 0, output, covered, steps
        elif op == HALT:
            return 0, output, covered, steps
        else:
            raise ValueError(f"bad opcode {op} at {pc}")
