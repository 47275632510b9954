"""Hand-computed suspiciousness oracles on small synthetic matrices.

Verdict strings list one P/F per test. Unless a ``differs`` pattern is given,
a mutant's output differs from the original exactly where its verdict does.
Every expected value below was worked out by hand from the formulas:

    ochiai = failed_k / sqrt(totfailed * (failed_k + passed_k))
    mu(s)  = (1/mut(s)) * sum_m ( |f2p_m & fP(s)| / |fP|  -  alpha * |p2f_m & pP(s)| / |pP| )
    alpha  = (sum_m |f2p_m| / |fP|) / (sum_m |p2f_m| / |pP|), or 1 if the divisor is 0
"""
import math
from dataclasses import dataclass

from conftest import make_cm, make_rm

NEG_INF = -math.inf


@dataclass
class Oracle:
    name: str
    cm: object
    rm: object
    alpha: float
    metallaxis: dict
    muse: dict


def _s1():
    # t1 F, t2 P, t3 P; t1 covers 1,2; t2 covers 1,3; t3 covers all
    cm = make_cm([[1, 1, 0], [1, 0, 1], [1, 1, 1]], "FPP")
    #        m1 L1   m2 L2   m3 L2 (dormant)   m4 L3
    rm = make_rm(cm, [1, 2, 2, 3], ["PPP", "FFP", "FPP", "PFF"])
    # ochiai: m1 1/sqrt(1*1) = 1; m2 0; m3 0; m4 1/sqrt(1*3)
    # alpha: f2p (1 + 1)/1 = 2, p2f (1 + 2)/2 = 3/2 -> 4/3
    # line 2: m2's p2f test t2 does not cover line 2 -> 0
    # line 3: covered by t2, t3 only; m4: f2p t1 not covering -> 0, p2f 2/2 -> -4/3
    return Oracle("s1", cm, rm, 4 / 3, {1: 1.0, 2: 0.0, 3: 1 / math.sqrt(3)}, {1: 1.0, 2: 0.0, 3: -4 / 3})


def _s2():
    # two failing, two passing, everything covered
    cm = make_cm([[1, 1]] * 4, "FFPP")
    rm = make_rm(cm, [1, 1, 2, 2], ["PFPP", "PPFF", "FFFP", "PPPP"])
    # ochiai: m1 1/sqrt(2*1); m2 2/sqrt(2*4) (same value); m3 0; m4 2/sqrt(2*2) = 1
    # alpha: f2p (1+2+0+2)/2 = 5/2, p2f (0+2+1+0)/2 = 3/2 -> 5/3
    # line 1: ((1+2)/2 - 5/3 * 2/2) / 2 = -1/12
    # line 2: ((0+2)/2 - 5/3 * 1/2) / 2 = 1/12
    return Oracle("s2", cm, rm, 5 / 3, {1: 1 / math.sqrt(2), 2: 1.0}, {1: -1 / 12, 2: 1 / 12})


def _s3():
    # lone failing test flipped by the sole mutant; lines 2 and 3 carry no mutant
    cm = make_cm([[1, 1, 1], [1, 1, 1]], "FP")
    rm = make_rm(cm, [1], ["PP"])
    # alpha falls back to 1 (no p2f anywhere); line 1: (1/1 - 0) / 1 = 1
    return Oracle("s3", cm, rm, 1.0, {1: 1.0, 2: 0.0, 3: 0.0}, {1: 1.0, 2: NEG_INF, 3: NEG_INF})


def _s4():
    # five failing, five passing, one line
    cm = make_cm([[1]] * 10, "FFFFFPPPPP")
    rm = make_rm(cm, [1, 1], ["PPPFF" + "FFFFP", "FFFFF" + "FFPPP"])
    # alpha: f2p 3/5 = 0.6, p2f (4+2)/5 = 1.2 -> 0.5
    # ochiai: m1 3/sqrt(5*7); m2 0
    # mu: (3/5 - 0.5 * 6/5) / 2 = 0
    return Oracle("s4", cm, rm, 0.5, {1: 3 / math.sqrt(35)}, {1: 0.0})


def _s5():
    # a mutant that changes the failure without fixing it still counts as a kill
    cm = make_cm([[1, 1], [1, 0], [1, 1]], "FFP")
    rm = make_rm(cm, [2, 1], ["FFP", "FPF"], differs=["110", "011"])
    # ochiai: m1 2/sqrt(2*2) = 1; m2 1/sqrt(2*2) = 1/2
    # alpha: f2p 1/2, p2f 1/1 -> 1/2
    # line 1: (1/2 - 1/2 * 1/1) / 1 = 0; line 2: m1 flips nothing -> 0
    return Oracle("s5", cm, rm, 0.5, {1: 0.5, 2: 1.0}, {1: 0.0, 2: 0.0})


ORACLES = [_s1(), _s2(), _s3(), _s4(), _s5()]
