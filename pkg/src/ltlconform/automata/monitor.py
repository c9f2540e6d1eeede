"""Deterministic prefix monitors derived from Büchi automata."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

from ..ltl import Atom, Formula, Not, atoms
from .boolean import simplify_minterms
from .nba import Nba, prune_empty, step_states


class MonitorTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class MonitorEdge:
    id: int
    src: int
    label: Formula
    dst: int


@dataclass(frozen=True, eq=False)
class Monitor:
    """Deterministic, partial automaton over letters of ``variables``.

    A letter with no entry in ``delta`` means the monitor cannot move, i.e.
    the observed prefix has no extension satisfying the property.
    """

    num_states: int
    init: int
    variables: tuple
    delta: Mapping
    edges: tuple
    _edge_of: dict = field(init=False, repr=False)

    def __post_init__(self):
        index = {(e.src, e.dst): e.id for e in self.edges}
        object.__setattr__(self, "_edge_of", index)

    def project(self, letter: Mapping[str, bool]) -> tuple:
        return tuple(bool(letter[v]) for v in self.variables)

    def step(self, state: int, letter: Mapping[str, bool]) -> int | None:
        return self.delta.get((state, self.project(letter)))

    def edge_for(self, state: int, letter: Mapping[str, bool]) -> MonitorEdge | None:
        dst = self.step(state, letter)
        if dst is None:
            return None
        return self.edges[self._edge_of[(state, dst)]]

    def accepts_prefix(self, trace) -> bool:
        state = self.init
        for letter in trace:
            state = self.step(state, letter)
            if state is None:
                return False
        return True


def build_monitor(nba: Nba, max_states: int = 5000, max_variables: int = 16) -> Monitor:
    """Subset construction on the pruned automaton, then Moore minimization.

    Only the propositions that occur in some edge label matter, so letters are
    enumerated over that support.
    """
    pruned = prune_empty(nba)
    used = set()
    for e in pruned.edges:
        used |= atoms(e.label)
    variables = tuple([a for a in pruned.ap if a in used] + sorted(used - set(pruned.ap)))
    if len(variables) > max_variables:
        raise MonitorTooLarge(f"{len(variables)} propositions exceed the letter enumeration cap")
    letters = list(itertools.product((False, True), repeat=len(variables)))
    letter_maps = [dict(zip(variables, values)) for values in letters]

    start = frozenset([pruned.init])
    subsets = [start]
    ids = {start: 0}
    trans: list[list[int | None]] = []
    i = 0
    while i < len(subsets):
        row: list[int | None] = []
        for lm in letter_maps:
            nxt = step_states(pruned, subsets[i], lm)
            if not nxt:
                row.append(None)
                continue
            j = ids.get(nxt)
            if j is None:
                if len(subsets) >= max_states:
                    raise MonitorTooLarge(f"subset construction exceeded {max_states} states")
                j = ids[nxt] = len(subsets)
                subsets.append(nxt)
            row.append(j)
        trans.append(row)
        i += 1

    block = _minimize(trans)
    # renumber blocks in order of first appearance (BFS order of subsets)
    renum: dict[int, int] = {}
    for s in range(len(subsets)):
        renum.setdefault(block[s], len(renum))
    delta = {}
    grouped: dict[tuple[int, int], list[tuple]] = {}
    done = set()
    for s, row in enumerate(trans):
        src = renum[block[s]]
        if src in done:
            continue
        done.add(src)
        for letter, t in zip(letters, row):
            if t is None:
                continue
            dst = renum[block[t]]
            delta[(src, letter)] = dst
            grouped.setdefault((src, dst), []).append(letter)
    edges = tuple(
        MonitorEdge(k, src, simplify_minterms(variables, ms), dst)
        for k, ((src, dst), ms) in enumerate(sorted(grouped.items()))
    )
    return Monitor(len(renum), renum[block[0]], variables, delta, edges)


def _minimize(trans: list[list[int | None]]) -> list[int]:
    """Moore partition refinement; every state accepts, missing moves go to a sink."""
    block = [0] * len(trans)
    count = 1
    while True:
        sigs: dict[tuple, int] = {}
        new = []
        for s, row in enumerate(trans):
            sig = (block[s], tuple(None if t is None else block[t] for t in row))
            new.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == count:
            return new
        block, count = new, len(sigs)


def literals(label: Formula) -> list[tuple[str, bool]]:
    """Signed atoms occurring syntactically in *label*, in first-occurrence order."""
    out: list[tuple[str, bool]] = []

    def walk(f: Formula, positive: bool):
        if isinstance(f, Atom):
            lit = (f.name, positive)
            if lit not in out:
                out.append(lit)
        elif isinstance(f, Not):
            walk(f.arg, not positive)
        else:
            for c in f.children():
                walk(c, positive)

    walk(label, True)
    return out


__all__ = ["Monitor", "MonitorEdge", "MonitorTooLarge", "build_monitor", "literals", "simplify_minterms"]
