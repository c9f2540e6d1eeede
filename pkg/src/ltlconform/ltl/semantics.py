"""Finite-trace (FLTL) and ultimately-periodic (lasso) evaluation, plus NNF."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .formula import (
    FALSE,
    TRUE,
    Always,
    And,
    Atom,
    Eventually,
    FalseF,
    Formula,
    Iff,
    Implies,
    Next,
    Not,
    Or,
    Release,
    TrueF,
    Until,
    WeakNext,
    subformulas,
)

Assignment = Mapping[str, bool]
Trace = Sequence[Assignment]


@dataclass(frozen=True)
class LassoWord:
    """The infinite word ``prefix · loop^ω``."""

    prefix: tuple[Assignment, ...]
    loop: tuple[Assignment, ...]

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "loop", tuple(self.loop))
        if not self.loop:
            raise ValueError("lasso loop must be nonempty")

    def __len__(self):
        return len(self.prefix) + len(self.loop)

    def letter(self, pos: int) -> Assignment:
        n = len(self.prefix)
        return self.prefix[pos] if pos < n else self.loop[pos - n]

    def successor(self, pos: int) -> int:
        return pos + 1 if pos + 1 < len(self) else len(self.prefix)

    def unrolled(self) -> "LassoWord":
        """Same infinite word with one loop period moved into the prefix."""
        return LassoWord(self.prefix + self.loop, self.loop)


def eval_fltl(trace: Trace, phi: Formula) -> bool:
    """Decide ``trace, 0 |= phi`` under finite-trace LTL with strong/weak next.

    Every subformula is tabulated over all positions, right to left, so the
    cost is linear in ``|phi| * len(trace)``.
    """
    n = len(trace)
    if n == 0:
        raise ValueError("FLTL is undefined on the empty trace")
    table: dict[Formula, list[bool]] = {}
    for f in subformulas(phi):
        table[f] = _fltl_row(f, trace, table, n)
    return table[phi][0]


def _fltl_row(f: Formula, trace: Trace, table, n: int) -> list[bool]:
    if isinstance(f, TrueF):
        return [True] * n
    if isinstance(f, FalseF):
        return [False] * n
    if isinstance(f, Atom):
        return [bool(step[f.name]) for step in trace]
    if isinstance(f, Not):
        return [not v for v in table[f.arg]]
    if isinstance(f, (And, Or, Implies, Iff)):
        a, b = table[f.left], table[f.right]
        if isinstance(f, And):
            return [x and y for x, y in zip(a, b)]
        if isinstance(f, Or):
            return [x or y for x, y in zip(a, b)]
        if isinstance(f, Implies):
            return [(not x) or y for x, y in zip(a, b)]
        return [x == y for x, y in zip(a, b)]
    if isinstance(f, Next):
        a = table[f.arg]
        return a[1:] + [False]
    if isinstance(f, WeakNext):
        a = table[f.arg]
        return a[1:] + [True]
    row = [False] * n
    if isinstance(f, Until):
        a, b = table[f.left], table[f.right]
        later = False
        for i in range(n - 1, -1, -1):
            later = b[i] or (a[i] and later)
            row[i] = later
    elif isinstance(f, Release):
        a, b = table[f.left], table[f.right]
        later = True
        for i in range(n - 1, -1, -1):
            later = b[i] and (a[i] or later)
            row[i] = later
    elif isinstance(f, Eventually):
        a = table[f.arg]
        later = False
        for i in range(n - 1, -1, -1):
            later = a[i] or later
            row[i] = later
    elif isinstance(f, Always):
        a = table[f.arg]
        later = True
        for i in range(n - 1, -1, -1):
            later = a[i] and later
            row[i] = later
    else:
        raise TypeError(f"unknown formula node {f!r}")
    return row


def eval_ltl_lasso(word: LassoWord, phi: Formula) -> bool:
    """Decide ``u·v^ω |= phi`` for the infinite-word semantics.

    Each of the ``|u| + |v|`` lasso positions stands for one distinct suffix.
    Until-like operators are solved as least fixpoints (Release/Always as
    greatest fixpoints) by sweeping the positions until nothing changes.
    """
    n = len(word)
    succ = [word.successor(i) for i in range(n)]
    table: dict[Formula, list[bool]] = {}
    for f in subformulas(phi):
        if isinstance(f, TrueF):
            row = [True] * n
        elif isinstance(f, FalseF):
            row = [False] * n
        elif isinstance(f, Atom):
            row = [bool(word.letter(i)[f.name]) for i in range(n)]
        elif isinstance(f, Not):
            row = [not v for v in table[f.arg]]
        elif isinstance(f, And):
            row = [x and y for x, y in zip(table[f.left], table[f.right])]
        elif isinstance(f, Or):
            row = [x or y for x, y in zip(table[f.left], table[f.right])]
        elif isinstance(f, Implies):
            row = [(not x) or y for x, y in zip(table[f.left], table[f.right])]
        elif isinstance(f, Iff):
            row = [x == y for x, y in zip(table[f.left], table[f.right])]
        elif isinstance(f, (Next, WeakNext)):
            a = table[f.arg]
            row = [a[succ[i]] for i in range(n)]
        elif isinstance(f, Until):
            row = _fixpoint(table[f.left], table[f.right], succ, least=True)
        elif isinstance(f, Eventually):
            row = _fixpoint([True] * n, table[f.arg], succ, least=True)
        elif isinstance(f, Release):
            row = _fixpoint(table[f.left], table[f.right], succ, least=False)
        elif isinstance(f, Always):
            row = _fixpoint([False] * n, table[f.arg], succ, least=False)
        else:
            raise TypeError(f"unknown formula node {f!r}")
        table[f] = row
    return table[phi][0]


def _fixpoint(a: list[bool], b: list[bool], succ: list[int], least: bool) -> list[bool]:
    # until:   x[i] = b[i] or (a[i] and x[succ i]),  start all-false
    # release: x[i] = b[i] and (a[i] or x[succ i]),  start all-true
    n = len(a)
    x = [not least] * n
    changed = True
    while changed:
        changed = False
        for i in range(n - 1, -1, -1):
            if least:
                v = b[i] or (a[i] and x[succ[i]])
            else:
                v = b[i] and (a[i] or x[succ[i]])
            if v != x[i]:
                x[i] = v
                changed = True
    return x


def to_nnf(phi: Formula) -> Formula:
    """Negation normal form over ``true, false, a, !a, &, |, X, U, R``.

    Implications, equivalences, F and G are eliminated; WeakNext is treated
    as Next (they coincide on infinite words).
    """
    return _nnf(phi, False)


def _nnf(f: Formula, neg: bool) -> Formula:
    if isinstance(f, TrueF):
        return FALSE if neg else TRUE
    if isinstance(f, FalseF):
        return TRUE if neg else FALSE
    if isinstance(f, Atom):
        return Not(f) if neg else f
    if isinstance(f, Not):
        return _nnf(f.arg, not neg)
    if isinstance(f, And):
        op = Or if neg else And
        return op(_nnf(f.left, neg), _nnf(f.right, neg))
    if isinstance(f, Or):
        op = And if neg else Or
        return op(_nnf(f.left, neg), _nnf(f.right, neg))
    if isinstance(f, Implies):
        return _nnf(Or(Not(f.left), f.right), neg)
    if isinstance(f, Iff):
        both = And(f.left, f.right)
        neither = And(Not(f.left), Not(f.right))
        return _nnf(Or(both, neither), neg)
    if isinstance(f, (Next, WeakNext)):
        return Next(_nnf(f.arg, neg))
    if isinstance(f, Until):
        if neg:
            return Release(_nnf(f.left, True), _nnf(f.right, True))
        return Until(_nnf(f.left, False), _nnf(f.right, False))
    if isinstance(f, Release):
        if neg:
            return Until(_nnf(f.left, True), _nnf(f.right, True))
        return Release(_nnf(f.left, False), _nnf(f.right, False))
    if isinstance(f, Eventually):
        if neg:
            return Release(FALSE, _nnf(f.arg, True))
        return Until(TRUE, _nnf(f.arg, False))
    if isinstance(f, Always):
        if neg:
            return Until(TRUE, _nnf(f.arg, True))
        return Release(FALSE, _nnf(f.arg, False))
    raise TypeError(f"unknown formula node {f!r}")
