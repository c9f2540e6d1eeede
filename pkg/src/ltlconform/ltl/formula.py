"""LTL abstract syntax.

Formulas are frozen dataclasses, so structural equality and hashing come for
free and nodes can be shared between threads and used as dict keys.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterator

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
KEYWORDS = frozenset({"true", "false", "X", "F", "G", "U", "N", "R"})


class Formula:
    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        return ()

    def __str__(self) -> str:
        from .parser import pretty

        return pretty(self)


@dataclass(frozen=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class FalseF(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str

    def __post_init__(self):
        if not IDENT_RE.match(self.name) or self.name in KEYWORDS:
            raise ValueError(f"invalid proposition name {self.name!r}")


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class _Unary(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class _Binary(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


class And(_Binary):
    pass


class Or(_Binary):
    pass


class Implies(_Binary):
    pass


class Iff(_Binary):
    pass


class Until(_Binary):
    pass


class Release(_Binary):
    """Dual of Until; only produced by :func:`to_nnf`."""


class Next(_Unary):
    pass


class WeakNext(_Unary):
    pass


class Eventually(_Unary):
    pass


class Always(_Unary):
    pass


# dataclass(frozen=True) is inherited, but eq/hash must see the concrete class
for _cls in (And, Or, Implies, Iff, Until, Release, Next, WeakNext, Eventually, Always):
    dataclass(frozen=True)(_cls)

TRUE = TrueF()
FALSE = FalseF()

BOOLEAN_TYPES = (TrueF, FalseF, Atom, Not, And, Or, Implies, Iff)


def conjunction(parts) -> Formula:
    """Left-fold ``And`` over *parts*; the empty conjunction is ``true``."""
    parts = list(parts)
    if not parts:
        return TRUE
    return reduce(And, parts)


def subformulas(phi: Formula) -> Iterator[Formula]:
    """Yield every distinct subformula, children before parents."""
    seen: set[Formula] = set()
    stack: list[tuple[Formula, bool]] = [(phi, False)]
    while stack:
        node, expanded = stack.pop()
        if node in seen:
            continue
        if expanded:
            seen.add(node)
            yield node
        else:
            stack.append((node, True))
            for child in reversed(node.children()):
                if child not in seen:
                    stack.append((child, False))


def atoms(phi: Formula) -> set[str]:
    return {f.name for f in subformulas(phi) if isinstance(f, Atom)}


def is_propositional(phi: Formula) -> bool:
    return all(isinstance(f, BOOLEAN_TYPES) for f in subformulas(phi))


def size(phi: Formula) -> int:
    return sum(1 for _ in subformulas(phi))


def eval_prop(phi: Formula, letter) -> bool:
    """Evaluate a propositional formula under *letter* (name -> bool)."""
    if isinstance(phi, Atom):
        return bool(letter[phi.name])
    if isinstance(phi, TrueF):
        return True
    if isinstance(phi, FalseF):
        return False
    if isinstance(phi, Not):
        return not eval_prop(phi.arg, letter)
    if isinstance(phi, And):
        return eval_prop(phi.left, letter) and eval_prop(phi.right, letter)
    if isinstance(phi, Or):
        return eval_prop(phi.left, letter) or eval_prop(phi.right, letter)
    if isinstance(phi, Implies):
        return (not eval_prop(phi.left, letter)) or eval_prop(phi.right, letter)
    if isinstance(phi, Iff):
        return eval_prop(phi.left, letter) == eval_prop(phi.right, letter)
    raise TypeError(f"not a propositional formula: {phi}")
