"""LTL to Büchi automaton.

Tableau construction of Gerth, Peled, Vardi and Wolper on the negation
normal form, which yields a generalized Büchi automaton with one acceptance
set per Until subformula, followed by a level-counter degeneralization.
"""
from __future__ import annotations

import time
from functools import lru_cache

from ..ltl import (
    TRUE,
    And,
    Atom,
    FalseF,
    Formula,
    Next,
    Not,
    Or,
    Release,
    TrueF,
    Until,
    conjunction,
    pretty,
    subformulas,
    to_nnf,
)
from .nba import AutomatonTooLarge, Edge, Nba

INIT = -1


@lru_cache(maxsize=None)
def _key(f: Formula) -> str:
    return pretty(f)


def _sorted(fs) -> list[Formula]:
    return sorted(fs, key=_key)


class _Node:
    __slots__ = ("incoming", "old", "nxt")

    def __init__(self, incoming, old, nxt):
        self.incoming = incoming
        self.old = old
        self.nxt = nxt


def _literal_label(old: frozenset) -> Formula:
    lits = [f for f in old if isinstance(f, Atom) or (isinstance(f, Not) and isinstance(f.arg, Atom))]
    lits.sort(key=lambda f: (f.name if isinstance(f, Atom) else f.arg.name))
    return conjunction(lits) if lits else TRUE


def _tableau(phi: Formula, max_nodes: int, deadline: float | None) -> list[_Node]:
    nodes: list[_Node] = []
    index: dict[tuple[frozenset, frozenset], int] = {}
    # (incoming, new, old, next); `new` is an ordered list for determinism
    stack = [({INIT}, [phi], frozenset(), frozenset())]
    steps = 0
    while stack:
        steps += 1
        if deadline is not None and steps % 256 == 0 and time.monotonic() > deadline:
            raise TimeoutError("automaton construction exceeded the time budget")
        incoming, new, old, nxt = stack.pop()
        if not new:
            key = (old, nxt)
            found = index.get(key)
            if found is not None:
                nodes[found].incoming |= incoming
                continue
            if len(nodes) >= max_nodes:
                raise AutomatonTooLarge(f"tableau exceeded {max_nodes} nodes")
            idx = len(nodes)
            nodes.append(_Node(set(incoming), old, nxt))
            index[key] = idx
            stack.append(({idx}, _sorted(nxt), frozenset(), frozenset()))
            continue
        f, rest = new[0], new[1:]
        if f in old:
            stack.append((incoming, rest, old, nxt))
            continue
        if isinstance(f, FalseF):
            continue
        if isinstance(f, TrueF):
            stack.append((incoming, rest, old | {f}, nxt))
        elif isinstance(f, Atom) or isinstance(f, Not):
            neg = f.arg if isinstance(f, Not) else Not(f)
            if neg in old:
                continue
            stack.append((incoming, rest, old | {f}, nxt))
        elif isinstance(f, And):
            more = [g for g in (f.left, f.right) if g not in old]
            stack.append((incoming, rest + more, old | {f}, nxt))
        elif isinstance(f, Next):
            stack.append((incoming, rest, old | {f}, nxt | {f.arg}))
        elif isinstance(f, (Or, Until, Release)):
            old2 = old | {f}
            if isinstance(f, Or):
                first = (rest + [f.left], nxt)
                second = (rest + [f.right], nxt)
            elif isinstance(f, Until):
                first = (rest + [f.left], nxt | {f})
                second = (rest + [f.right], nxt)
            else:
                first = (rest + [f.right], nxt | {f})
                second = (rest + [f.left, f.right], nxt)
            # pushed in reverse so the first branch is expanded first
            stack.append((set(incoming), second[0], old2, second[1]))
            stack.append((set(incoming), first[0], old2, first[1]))
        else:
            raise TypeError(f"formula not in negation normal form: {f}")
    return nodes


def ltl_to_nba(
    phi: Formula,
    ap: tuple = (),
    max_states: int = 20000,
    deadline: float | None = None,
) -> Nba:
    """Build an NBA accepting exactly the infinite words satisfying *phi*.

    ``deadline`` is a :func:`time.monotonic` timestamp; construction raises
    :class:`TimeoutError` once it passes.
    """
    nnf = to_nnf(phi)
    nodes = _tableau(nnf, max_states, deadline)
    untils = _sorted(f for f in subformulas(nnf) if isinstance(f, Until))
    k = len(untils)
    fulfilled = [
        [u not in n.old or u.right in n.old for n in nodes]
        for u in untils
    ]
    labels = [_literal_label(n.old) for n in nodes]
    gba_succ: dict[int, list[int]] = {INIT: []}
    for i in range(len(nodes)):
        gba_succ[i] = []
    for i, n in enumerate(nodes):
        for p in sorted(n.incoming):
            gba_succ[p].append(i)

    # Degeneralize: a state is (node, level); level k is the accepting copy.
    # Entering node q from level l (l == k restarts at 0) climbs past every
    # acceptance set that q belongs to, in order.
    def level_after(level: int, q: int) -> int:
        j = 0 if level == k else level
        while j < k and fulfilled[j][q]:
            j += 1
        return j

    start = (INIT, 0 if k else k)
    ids = {start: 0}
    order = [start]
    edges: list[Edge] = []
    accepting: set[int] = set()
    frontier = 0
    while frontier < len(order):
        q, level = order[frontier]
        src = frontier
        frontier += 1
        for r in gba_succ[q]:
            target = (r, level_after(level, r))
            dst = ids.get(target)
            if dst is None:
                if len(order) >= max_states:
                    raise AutomatonTooLarge(f"automaton exceeded {max_states} states")
                dst = ids[target] = len(order)
                order.append(target)
            edges.append(Edge(src, labels[r], dst))
    for i, (q, level) in enumerate(order):
        # the initial state is visited once, so its acceptance is irrelevant
        # to the language; marking it lets reduce_nba merge more states
        if level == k:
            accepting.add(i)
    return Nba(len(order), 0, frozenset(accepting), tuple(edges), tuple(ap))


__all__ = ["ltl_to_nba"]
