# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled bytecode VM. Mirrors ``_vm_py.run`` instruction for instruction."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t, uint64_t, INT64_MIN

cnp.import_array()

cdef enum:
    HALT = 0
    STMT = 1
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


def run(code_in, Py_ssize_t n_slots, Py_ssize_t n_lines, inputs, int64_t budget,
        Py_ssize_t max_stack=256):
    cdef cnp.int64_t[::1] code = np.ascontiguousarray(code_in, dtype=np.int64)
    cdef int64_t *slots = <int64_t *> malloc((n_slots + 1) * sizeof(int64_t))
    cdef int64_t *stack = <int64_t *> malloc((max_stack + 1) * sizeof(int64_t))
    cdef bytearray covered = bytearray(n_lines)
    cdef unsigned char *cov = covered
    cdef list output = []
    cdef Py_ssize_t pc = 0, sp = 0, i
    cdef int64_t steps = 0, a, b, r
    cdef int64_t op
    cdef int status = 0
    if slots == NULL or stack == NULL:
        free(slots)
        free(stack)
        raise MemoryError()
    try:
        for i in range(n_slots):
            slots[i] = 0
        for i in range(len(inputs)):
            slots[i] = inputs[i]
        while True:
            op = code[pc]
            if op == STMT:
                if steps >= budget:
                    status = 2
                    break
                steps += 1
                cov[code[pc + 1]] = 1
                pc += 2
            elif op == LOAD:
                stack[sp] = slots[code[pc + 1]]
                sp += 1
                pc += 2
            elif op == CONST:
                stack[sp] = code[pc + 1]
                sp += 1
                pc += 2
            elif op == STORE:
                sp -= 1
                slots[code[pc + 1]] = stack[sp]
                pc += 2
            elif op == JZ:
                sp -= 1
                pc = code[pc + 1] if stack[sp] == 0 else pc + 2
            elif op == JNZ:
                sp -= 1
                pc = code[pc + 1] if stack[sp] != 0 else pc + 2
            elif op == JMP:
                pc = code[pc + 1]
            elif op >= ADD:
                sp -= 1
                b = stack[sp]
                a = stack[sp - 1]
                if op == ADD:
                    r = <int64_t> (<uint64_t> a + <uint64_t> b)
                elif op == SUB:
                    r = <int64_t> (<uint64_t> a - <uint64_t> b)
                elif op == MUL:
                    r = <int64_t> (<uint64_t> a * <uint64_t> b)
                elif op == DIV or op == MOD:
                    if b == 0:
                        status = 1
                        break
                    if a == INT64_MIN and b == -1:
                        r = a if op == DIV else 0
                    elif op == DIV:
                        r = a / b
                    else:
                        r = a % b
                elif op == LT:
                    r = a < b
                elif op == LE:
                    r = a <= b
                elif op == GT:
                    r = a > b
                elif op == GE:
                    r = a >= b
                elif op == EQ:
                    r = a == b
                elif op == NE:
                    r = a != b
                elif op == BAND:
                    r = a & b
                elif op == BOR:
                    r = a | b
                else:
                    r = a ^ b
                stack[sp - 1] = r
                pc += 1
            elif op == NEG:
                stack[sp - 1] = <int64_t> (0 - <uint64_t> stack[sp - 1])
                pc += 1
            elif op == NOT:
                stack[sp - 1] = stack[sp - 1] == 0
                pc += 1
            elif op == BOOL:
                stack[sp - 1] = stack[sp - 1] != 0
                pc += 1
            elif op == PRINT:
                sp -= 1
                output.append(stack[sp])
                pc += 1
            elif op == RETURN:
                sp -= 1
                output.append(stack[sp])
                break
            elif op == HALT:
                break
            else:
                raise ValueError(f"bad opcode {op} at {pc}")
    finally:
        free(slots)
        free(stack)
    return status, output, covered, steps
