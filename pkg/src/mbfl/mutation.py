"""First-order mutant generation and duplicate pruning.

Operator catalogue (mini-language adaptation of the usual C operator set):

====== ==================================================================
AOR    arithmetic ``+ - * / %`` replaced by each of the other four
LCR    ``&&`` and ``||`` swapped
ROR    relational ``< <= > >= == !=`` replaced by each of the other five
UOM    at each variable reference: ``v+1``, ``v-1``, ``-v``, ``!v``;
       at each unary operator: the operator removed
OAAA   compound-assignment operator replaced by each of the other four
OBBN   bitwise ``& | ^`` replaced by each of the other two
OCNG   ``if``/``while`` condition negated
SSDL   statement replaced by ``skip`` (an ``if``/``while`` with its block)
CRCR   integer constant ``c`` replaced by ``0, 1, -1, c+1, c-1, -c`` (minus c)
====== ==================================================================

Generation order is by line, then operator (table order), then site within
the statement (pre-order), then replacement.
"""
from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .canonical import canonicalize
from .minilang.ast import (
    ARITH_OPS,
    BIT_OPS,
    REL_OPS,
    BinOp,
    CompoundAssign,
    Const,
    Expr,
    If,
    Program,
    Skip,
    Statement,
    UnOp,
    Var,
    While,
    iter_statements,
    statement_exprs,
    wrap,
)
from .minilang.printer import statement_header, unparse_expr


class OperatorId(str, enum.Enum):
    AOR = "AOR"
    LCR = "LCR"
    ROR = "ROR"
    UOM = "UOM"
    OAAA = "OAAA"
    OBBN = "OBBN"
    OCNG = "OCNG"
    SSDL = "SSDL"
    CRCR = "CRCR"

    def __str__(self) -> str:
        return self.value


ALL_OPERATORS = tuple(OperatorId)

# UOM sub-forms; "inc"/"dec" alone give the classic +-1 operator
UOM_FORMS = ("inc", "dec", "neg", "not", "remove")


@dataclass(frozen=True)
class Mutant:
    id: str
    operator: OperatorId
    line: int
    program: Program = field(repr=False)
    description: str


@dataclass(frozen=True)
class MutantStats:
    generated: int
    duplicates_removed: int
    retained: int
    equivalent: int = 0  # subset of duplicates_removed that matched the original


@dataclass(frozen=True)
class MutantSet:
    original: Program
    mutants: tuple[Mutant, ...]
    stats: MutantStats
    # (pruned mutant, id of the retained mutant it duplicates, or None when
    # it is equivalent to the original)
    pruned: tuple[tuple[Mutant, str | None], ...] = ()

    def __len__(self) -> int:
        return len(self.mutants)

    def by_id(self, mutant_id: str) -> Mutant:
        for m in self.mutants:
            if m.id == mutant_id:
                return m
        raise KeyError(mutant_id)


def parse_operators(spec: str | Iterable[str] | None) -> tuple[OperatorId, ...]:
    """Accepts ``None`` (all), ``"AOR,ROR"`` or an iterable of names."""
    if spec is None:
        return ALL_OPERATORS
    names = spec.split(",") if isinstance(spec, str) else list(spec)
    names = [n.strip().upper() for n in names if n.strip()]
    try:
        chosen = {OperatorId(n) for n in names}
    except ValueError as exc:
        raise ValueError(f"unknown mutation operator: {exc}") from None
    return tuple(op for op in ALL_OPERATORS if op in chosen)


# -- expression sites ------------------------------------------------------

def _sites(e: Expr, path: tuple[str, ...] = ()) -> Iterator[tuple[tuple[str, ...], Expr]]:
    yield path, e
    if isinstance(e, BinOp):
        yield from _sites(e.left, path + ("left",))
        yield from _sites(e.right, path + ("right",))
    elif isinstance(e, UnOp):
        yield from _sites(e.operand, path + ("operand",))


def _replace(e: Expr, path: tuple[str, ...], new: Expr) -> Expr:
    if not path:
        return new
    head, rest = path[0], path[1:]
    return dataclasses.replace(e, **{head: _replace(getattr(e, head), rest, new)})


def _site_replacements(op: OperatorId, node: Expr, uom_forms) -> list[Expr]:
    if op is OperatorId.AOR and isinstance(node, BinOp) and node.op in ARITH_OPS:
        return [BinOp(o, node.left, node.right) for o in ARITH_OPS if o != node.op]
    if op is OperatorId.ROR and isinstance(node, BinOp) and node.op in REL_OPS:
        return [BinOp(o, node.left, node.right) for o in REL_OPS if o != node.op]
    if op is OperatorId.LCR and isinstance(node, BinOp) and node.op in ("&&", "||"):
        return [BinOp("||" if node.op == "&&" else "&&", node.left, node.right)]
    if op is OperatorId.OBBN and isinstance(node, BinOp) and node.op in BIT_OPS:
        return [BinOp(o, node.left, node.right) for o in BIT_OPS if o != node.op]
    if op is OperatorId.UOM:
        if isinstance(node, Var):
            forms = {
                "inc": BinOp("+", node, Const(1)),
                "dec": BinOp("-", node, Const(1)),
                "neg": UnOp("-", node),
                "not": UnOp("!", node),
            }
            return [forms[f] for f in UOM_FORMS if f in forms and f in uom_forms]
        if isinstance(node, UnOp) and "remove" in uom_forms:
            return [node.operand]
        return []
    if op is OperatorId.CRCR and isinstance(node, Const):
        c = node.value
        values = dict.fromkeys(wrap(v) for v in (0, 1, -1, c + 1, c - 1, -c))
        return [Const(v) for v in values if v != c]
    return []


def _with_expr(stmt: Statement, new: Expr) -> Statement:
    if isinstance(stmt, (If, While)):
        return dataclasses.replace(stmt, cond=new)
    return dataclasses.replace(stmt, value=new)


def _statement_mutations(
    stmt: Statement, op: OperatorId, uom_forms
) -> Iterator[tuple[Statement, str]]:
    """Yield (mutated statement, description) for one operator on one statement."""
    if op is OperatorId.SSDL:
        if not isinstance(stmt, Skip):
            yield Skip(stmt.line), f"{statement_header(stmt)} -> skip;"
        return
    if op is OperatorId.OCNG:
        if isinstance(stmt, (If, While)):
            neg = UnOp("!", stmt.cond)
            yield _with_expr(stmt, neg), f"{unparse_expr(stmt.cond)} -> {unparse_expr(neg)}"
        return
    if op is OperatorId.OAAA:
        if isinstance(stmt, CompoundAssign):
            for o in ARITH_OPS:
                if o != stmt.op:
                    yield (
                        dataclasses.replace(stmt, op=o),
                        f"{stmt.target} {stmt.op}= -> {stmt.target} {o}=",
                    )
        return
    for root in statement_exprs(stmt):
        for path, node in _sites(root):
            for new in _site_replacements(op, node, uom_forms):
                yield (
                    _with_expr(stmt, _replace(root, path, new)),
                    f"{unparse_expr(node)} -> {unparse_expr(new)}",
                )


def _substitute(body: tuple[Statement, ...], line: int, new: Statement) -> tuple[Statement, ...]:
    out = []
    for s in body:
        if s.line == line:
            out.append(new)
        elif isinstance(s, If):
            out.append(dataclasses.replace(
                s, then=_substitute(s.then, line, new), orelse=_substitute(s.orelse, line, new)
            ))
        elif isinstance(s, While):
            out.append(dataclasses.replace(s, body=_substitute(s.body, line, new)))
        else:
            out.append(s)
    return tuple(out)


def generate_mutants(
    p: Program,
    ops: Iterable[OperatorId | str] | None = None,
    uom_forms: Iterable[str] = UOM_FORMS,
) -> MutantSet:
    """All first-order mutants of ``p`` for the enabled operators, unpruned."""
    enabled = parse_operators(None if ops is None else [str(o) for o in ops])
    uom_forms = frozenset(uom_forms)
    unknown = uom_forms - set(UOM_FORMS)
    if unknown:
        raise ValueError(f"unknown UOM forms: {sorted(unknown)}")
    mutants = []
    for stmt in iter_statements(p.statements):
        for op in enabled:
            for k, (new_stmt, desc) in enumerate(_statement_mutations(stmt, op, uom_forms), 1):
                mutants.append(Mutant(
                    id=f"{op.value}-L{stmt.line}-{k}",
                    operator=op,
                    line=stmt.line,
                    program=dataclasses.replace(p, statements=_substitute(p.statements, stmt.line, new_stmt)),
                    description=desc,
                ))
    n = len(mutants)
    return MutantSet(p, tuple(mutants), MutantStats(generated=n, duplicates_removed=0, retained=n))


def prune_duplicates(ms: MutantSet) -> MutantSet:
    """Drop mutants equivalent to the original or to an earlier mutant."""
    seen = {canonicalize(ms.original): None}
    kept, pruned = [], list(ms.pruned)
    equivalent = ms.stats.equivalent
    for m in ms.mutants:
        form = canonicalize(m.program)
        if form in seen:
            rep = seen[form]
            pruned.append((m, rep))
            equivalent += rep is None
        else:
            seen[form] = m.id
            kept.append(m)
    removed = ms.stats.duplicates_removed + len(ms.mutants) - len(kept)
    stats = MutantStats(
        generated=ms.stats.generated,
        duplicates_removed=removed,
        retained=len(kept),
        equivalent=equivalent,
    )
    return MutantSet(ms.original, tuple(kept), stats, tuple(pruned))
