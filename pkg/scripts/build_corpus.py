"""Regenerate the bundled seeded-fault corpus under corpus/.

Each bug is a correct program, a fault edit (one or more single-line
substitutions), test inputs, and a Python reference function. Expected outputs
come from the reference function, never from the interpreter; the script then
checks that the fixed program passes every test and the faulty one fails at
least one.

    python scripts/build_corpus.py
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from pathlib import Path

from mbfl.minilang import TestCase, execute, format_suite, parse, verdict

ROOT = Path(__file__).resolve().parent.parent / "corpus"


def tdiv(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return q if (a < 0) == (b < 0) else -q


@dataclass
class Bug:
    id: str
    fixed: str
    edits: list[tuple]  # (correct line text, faulty line text[, line number])
    inputs: list[tuple[int, ...]]
    reference: object

    def faulty(self) -> tuple[str, list[int]]:
        lines = self.fixed.splitlines()
        fault_lines = []
        for old, new, *at in self.edits:
            hits = [i for i, text in enumerate(lines) if text.strip() == old]
            if at:
                hits = [i for i in hits if i + 1 == at[0]]
            assert len(hits) == 1, (self.id, old, hits)
            i = hits[0]
            indent = lines[i][: len(lines[i]) - len(lines[i].lstrip())]
            lines[i] = indent + new
            fault_lines.append(i + 1)
        return "\n".join(lines) + "\n", sorted(fault_lines)


def ref_median(x, y, z):
    return [sorted((x, y, z))[1]]


def ref_gcd_lcm(a, b):
    g = math.gcd(a, b)
    return [g, 0 if g == 0 else abs(a) // g * abs(b)]


def ref_primes(n):
    ps = [k for k in range(2, n + 1) if all(k % d for d in range(2, math.isqrt(k) + 1))]
    return [len(ps), ps[-1] if ps else 0]


def ref_fib(n):
    n = max(min(n, 90), 0)
    fs = [0, 1]
    while len(fs) <= n + 1:
        fs.append(fs[-1] + fs[-2])
    return [fs[n], sum(fs[:n])]


def ref_digits(n):
    s = str(abs(n))
    if n == 0:
        return [1, 0, 0]
    rev = int(s[::-1])
    return [len(s), sum(map(int, s)), -rev if n < 0 else rev]


def ref_modpow(base, exp, m):
    return [pow(base, exp, m)]


def ref_triangle(a, b, c):
    if min(a, b, c) <= 0:
        return [0]
    x, y, z = sorted((a, b, c))
    if x + y <= z:
        return [0]
    if a == b == c:
        return [1]
    if a == b or b == c or a == c:
        return [2]
    return [3]


def ref_calendar(y, m):
    leap = int((y % 4 == 0 and y % 100 != 0) or y % 400 == 0)
    if not 1 <= m <= 12:
        return [leap, 0]
    days = [31, 28 + leap, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31][m - 1]
    return [leap, days]


def ref_collatz(n):
    steps, peak = 0, n
    while n > 1 and steps < 1000:
        n = n // 2 if n % 2 == 0 else 3 * n + 1
        peak = max(peak, n)
        steps += 1
    return [steps, peak]


def ref_isqrt(n):
    return [-1 if n < 0 else math.isqrt(n)]


def ref_bits(n):
    if n <= 0:
        return [0, 0, -1]
    c = bin(n).count("1")
    return [c, c % 2, n.bit_length() - 1]


def ref_tax(income):
    tax, rest = 0, income
    if rest > 50000:
        tax += (rest - 50000) * 40 // 100
        rest = 50000
    if rest > 20000:
        tax += (rest - 20000) * 20 // 100
        rest = 20000
    if rest > 10000:
        tax += (rest - 10000) * 10 // 100
    return [max(tax, 0)]


BUGS = [
    Bug(
        "median",
        """\
# median of three integers
param x;
param y;
param z;
m = z;
if (y < z) {
    if (x < y) {
        m = y;
    } else {
        if (x < z) {
            m = x;
        }
    }
} else {
    if (x > y) {
        m = y;
    } else {
        if (x > z) {
            m = x;
        }
    }
}
return m;
""",
        [("m = x;", "m = y;", 11)],
        [(1, 2, 3), (3, 2, 1), (2, 3, 1), (1, 3, 2), (5, 5, 5), (3, 1, 5)],
        ref_median,
    ),
    Bug(
        "gcd_lcm",
        """\
# greatest common divisor and least common multiple
param a;
param b;
if (a < 0) {
    a = -a;
}
if (b < 0) {
    b = -b;
}
x = a;
y = b;
while (y != 0) {
    t = x % y;
    x = y;
    y = t;
}
print x;
if (x == 0) {
    print 0;
} else {
    print a / x * b;
}
""",
        [("while (y != 0) {", "while (y > 1) {")],
        [(12, 8), (8, 12), (0, 5), (5, 0), (0, 0), (-12, 18), (21, -14), (7, 3), (9, 4), (10, 1)],
        ref_gcd_lcm,
    ),
    Bug(
        "primes",
        """\
# count the primes up to n and report the largest
param n;
count = 0;
last = 0;
k = 2;
while (k <= n) {
    d = 2;
    prime = 1;
    while (d * d <= k && prime) {
        if (k % d == 0) {
            prime = 0;
        }
        d += 1;
    }
    if (prime) {
        count += 1;
        last = k;
    }
    k += 1;
}
print count;
print last;
""",
        [("while (d * d <= k && prime) {", "while (d * d < k && prime) {")],
        [(0,), (1,), (2,), (3,), (4,), (8,), (10,), (13,), (25,), (30,)],
        ref_primes,
    ),
    Bug(
        "fib",
        """\
# n-th Fibonacci number and the sum of the first n (n capped at 90)
param n;
if (n > 90) {
    n = 90;
}
a = 0;
b = 1;
s = 0;
i = 0;
while (i < n) {
    s += a;
    t = a + b;
    a = b;
    b = t;
    i += 1;
}
print a;
print s;
""",
        [("if (n > 90) {", "if (n > 50) {")],
        [(0,), (1,), (2,), (5,), (10,), (20,), (50,), (51,), (60,), (-3,)],
        ref_fib,
    ),
    Bug(
        "digits",
        """\
# digit count, digit sum and reversed value of an integer
param n;
neg = 0;
if (n < 0) {
    neg = 1;
    n = -n;
}
count = 0;
sum = 0;
rev = 0;
while (n > 0) {
    d = n % 10;
    sum += d;
    rev = rev * 10 + d;
    count += 1;
    n = n / 10;
}
if (count == 0) {
    count = 1;
}
if (neg) {
    rev = -rev;
}
print count;
print sum;
print rev;
""",
        [("if (count == 0) {", "if (count < 0) {")],
        [(0,), (7,), (10,), (123,), (-45,), (9081,), (-100,), (55555,)],
        ref_digits,
    ),
    Bug(
        "modpow",
        """\
# modular exponentiation base^exp mod m (exp >= 0, m > 0)
param base;
param exp;
param m;
r = 1 % m;
b = base % m;
if (b < 0) {
    b += m;
}
e = exp;
while (e > 0) {
    if (e % 2 == 1) {
        r = r * b % m;
    }
    b = b * b % m;
    e = e / 2;
}
return r;
""",
        [("if (e % 2 == 1) {", "if (e % 4 == 1) {")],
        [(2, 0, 7), (2, 1, 7), (3, 2, 11), (2, 4, 13), (5, 5, 23), (7, 8, 97), (2, 3, 1000),
         (-3, 5, 17), (4, 7, 19), (9, 1, 1)],
        ref_modpow,
    ),
    Bug(
        "triangle",
        """\
# triangle kind: 0 invalid, 1 equilateral, 2 isosceles, 3 scalene
param a;
param b;
param c;
kind = 3;
if (a <= 0 || b <= 0 || c <= 0) {
    kind = 0;
} else {
    if (a + b <= c || a + c <= b || b + c <= a) {
        kind = 0;
    } else {
        if (a == b && b == c) {
            kind = 1;
        } else {
            if (a == b || b == c || a == c) {
                kind = 2;
            }
        }
    }
}
print kind;
""",
        [
            ("if (a + b <= c || a + c <= b || b + c <= a) {", "if (a + b < c || a + c <= b || b + c < a) {"),
            ("if (a == b || b == c || a == c) {", "if (a == b || b == c) {"),
        ],
        [(3, 4, 5), (2, 2, 2), (2, 2, 3), (3, 2, 2), (0, 1, 1), (1, 2, 9), (1, 1, 2),
         (3, 4, 3), (5, 3, 4), (-1, 2, 2), (4, 4, 7)],
        ref_triangle,
    ),
    Bug(
        "calendar",
        """\
# leap-year flag and number of days in month m of year y
param y;
param m;
leap = 0;
if (y % 4 == 0 && y % 100 != 0 || y % 400 == 0) {
    leap = 1;
}
days = 31;
if (m == 2) {
    days = 28 + leap;
} else {
    if (m == 4 || m == 6 || m == 9 || m == 11) {
        days = 30;
    }
}
if (m < 1 || m > 12) {
    days = 0;
}
print leap;
print days;
""",
        [("if (y % 4 == 0 && y % 100 != 0 || y % 400 == 0) {",
          "if (y % 4 == 0 && y % 100 != 0 || y % 200 == 0) {")],
        [(2024, 2), (2023, 2), (1900, 2), (2000, 2), (1800, 2), (2023, 4), (2023, 12),
         (2023, 13), (2023, 0), (2021, 9)],
        ref_calendar,
    ),
    Bug(
        "collatz",
        """\
# Collatz trajectory: steps to reach 1 and peak value (at most 1000 steps)
param n;
steps = 0;
peak = n;
while (n > 1 && steps < 1000) {
    if (n % 2 == 0) {
        n = n / 2;
    } else {
        n = 3 * n + 1;
    }
    if (n > peak) {
        peak = n;
    }
    steps += 1;
}
print steps;
print peak;
""",
        [("peak = n;", "peak = 0;", 4)],
        [(1,), (3,), (6,), (7,), (8,), (27,), (0,), (5,)],
        ref_collatz,
    ),
    Bug(
        "isqrt",
        """\
# integer square root by bisection; -1 for negative input
param n;
if (n < 0) {
    return -1;
}
lo = 0;
hi = n + 1;
while (hi - lo > 1) {
    mid = (lo + hi) / 2;
    if (mid * mid <= n) {
        lo = mid;
    } else {
        hi = mid;
    }
}
return lo;
""",
        [("hi = n + 1;", "hi = n;"), ("if (mid * mid <= n) {", "if (mid * mid < n) {")],
        [(0,), (1,), (2,), (3,), (4,), (8,), (15,), (16,), (99,), (-4,)],
        ref_isqrt,
    ),
    Bug(
        "bits",
        """\
# population count, parity and highest set bit of a non-negative integer
param n;
count = 0;
parity = 0;
high = -1;
pos = 0;
while (n > 0) {
    bit = n & 1;
    count += bit;
    parity = parity ^ bit;
    if (bit == 1) {
        high = pos;
    }
    n = n / 2;
    pos += 1;
}
print count;
print parity;
print high;
""",
        [("parity = parity ^ bit;", "parity = parity | bit;")],
        [(0,), (1,), (2,), (4,), (7,), (3,), (10,), (255,), (1024,)],
        ref_bits,
    ),
    Bug(
        "tax",
        """\
# progressive income tax in whole units
param income;
tax = 0;
rest = income;
if (rest > 50000) {
    tax += (rest - 50000) * 40 / 100;
    rest = 50000;
}
if (rest > 20000) {
    tax += (rest - 20000) * 20 / 100;
    rest = 20000;
}
if (rest > 10000) {
    tax += (rest - 10000) * 10 / 100;
}
if (tax < 0) {
    tax = 0;
}
print tax;
""",
        [("rest = 20000;", "rest = 19000;")],
        [(0,), (5000,), (10000,), (15000,), (20000,), (25000,), (50000,), (80000,), (-100,)],
        ref_tax,
    ),
]


def build(bug: Bug) -> None:
    src, fault_lines = bug.faulty()
    fixed = parse(bug.fixed, "fixed.ml")
    faulty = parse(src, "program.ml")
    assert fixed.lines == faulty.lines, bug.id
    tests = [
        TestCase(f"t{i}", inp, tuple(bug.reference(*inp))) for i, inp in enumerate(bug.inputs, 1)
    ]
    for t in tests:
        out = execute(fixed, t)
        assert verdict(out, t) == "pass", (bug.id, t, out)
    failing = [t.id for t in tests if verdict(execute(faulty, t), t) == "fail"]
    assert failing and len(failing) < len(tests), (bug.id, failing)
    d = ROOT / bug.id
    d.mkdir(parents=True, exist_ok=True)
    (d / "fixed.ml").write_text(bug.fixed)
    (d / "program.ml").write_text(src)
    (d / "tests.txt").write_text(format_suite(tests))
    (d / "faults.txt").write_text(" ".join(map(str, fault_lines)) + "\n")
    print(f"{bug.id:10s} sloc={len(faulty.lines):3d} tests={len(tests):2d} "
          f"failing={len(failing)} faulty={fault_lines}")


def main() -> int:
    for bug in BUGS:
        build(bug)
    rows = [f"{b.id} {b.id}/program.ml {b.id}/tests.txt {b.id}/faults.txt" for b in BUGS]
    (ROOT / "manifest.txt").write_text(
        "# bug-id  program  tests  faults (paths relative to this file)\n" + "\n".join(rows) + "\n"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
