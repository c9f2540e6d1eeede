"""State-based Büchi automata with propositional edge labels."""
from __future__ import annotations

import itertools
import math
import shlex
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from ..ltl import And, Atom, Formula, Iff, Implies, LassoWord, Not, Or, Spec
from ..ltl import FalseF, TrueF, atoms, conjunction, is_propositional, parse_ltl, pretty
from .graph import is_nontrivial, reachable, strongly_connected_components

StateSet = frozenset


class AutomatonTooLarge(RuntimeError):
    pass


def compile_label(phi: Formula):
    """Turn a propositional formula into a fast ``letter -> bool`` closure."""
    if isinstance(phi, TrueF):
        return lambda letter: True
    if isinstance(phi, FalseF):
        return lambda letter: False
    if isinstance(phi, Atom):
        name = phi.name
        return lambda letter: bool(letter[name])
    if isinstance(phi, Not):
        if isinstance(phi.arg, Atom):
            name = phi.arg.name
            return lambda letter: not letter[name]
        g = compile_label(phi.arg)
        return lambda letter: not g(letter)
    if isinstance(phi, (And, Or, Implies, Iff)):
        a, b = compile_label(phi.left), compile_label(phi.right)
        if isinstance(phi, And):
            return lambda letter: a(letter) and b(letter)
        if isinstance(phi, Or):
            return lambda letter: a(letter) or b(letter)
        if isinstance(phi, Implies):
            return lambda letter: (not a(letter)) or b(letter)
        return lambda letter: a(letter) == b(letter)
    raise TypeError(f"edge labels must be propositional, got {phi}")


def ordered_support(phi: Formula, order: Iterable[str] = ()) -> list[str]:
    """Atoms of *phi*, in *order* first and then alphabetically."""
    names = atoms(phi)
    first = [a for a in order if a in names]
    return first + sorted(names - set(first))


def minterms(phi: Formula, variables: list[str]):
    """Yield satisfying assignments of *phi* over *variables* (False before True)."""
    check = compile_label(phi)
    for values in itertools.product((False, True), repeat=len(variables)):
        letter = dict(zip(variables, values))
        if check(letter):
            yield letter


@dataclass(frozen=True)
class Edge:
    src: int
    label: Formula
    dst: int


@dataclass(frozen=True, eq=False)
class Nba:
    """Büchi automaton over ``2^AP``; states are ``0..num_states-1``."""

    num_states: int
    init: int
    accepting: frozenset
    edges: tuple
    ap: tuple = ()
    _out: tuple = field(init=False, repr=False)
    _checks: tuple = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "edges", tuple(self.edges))
        if not 0 <= self.init < self.num_states:
            raise ValueError("initial state out of range")
        if any(not 0 <= q < self.num_states for q in self.accepting):
            raise ValueError("accepting state out of range")
        out: list[list[int]] = [[] for _ in range(self.num_states)]
        for k, e in enumerate(self.edges):
            if not (0 <= e.src < self.num_states and 0 <= e.dst < self.num_states):
                raise ValueError(f"edge endpoint out of range: {e}")
            if not is_propositional(e.label):
                raise ValueError(f"edge label is not propositional: {e.label}")
            if next(minterms(e.label, ordered_support(e.label)), None) is None:
                raise ValueError(f"unsatisfiable edge label: {pretty(e.label)}")
            out[e.src].append(k)
        object.__setattr__(self, "_out", tuple(tuple(o) for o in out))
        object.__setattr__(self, "_checks", tuple(compile_label(e.label) for e in self.edges))

    @property
    def states(self) -> range:
        return range(self.num_states)

    def out_edges(self, q: int) -> tuple[int, ...]:
        """Indices into :attr:`edges` of the edges leaving *q*."""
        return self._out[q]

    def successors(self, q: int) -> list[int]:
        return [self.edges[k].dst for k in self._out[q]]

    def enabled(self, k: int, letter: Mapping[str, bool]) -> bool:
        return self._checks[k](letter)


def step_states(nba: Nba, current: Iterable[int], letter: Mapping[str, bool]) -> frozenset:
    """Successor state set on *letter*; empty means the prefix is dead."""
    out = set()
    for q in current:
        for k in nba.out_edges(q):
            if nba.enabled(k, letter):
                out.add(nba.edges[k].dst)
    return frozenset(out)


def nba_accepts_lasso(nba: Nba, word: LassoWord) -> bool:
    """Search the product of *nba* with the lasso positions for an accepting cycle."""
    n = len(word)
    letters = [word.letter(i) for i in range(n)]
    succ_pos = [word.successor(i) for i in range(n)]
    cache: dict[tuple[int, int], list[tuple[int, int]]] = {}

    def successors(node):
        out = cache.get(node)
        if out is None:
            q, pos = node
            letter = letters[pos]
            out = [
                (nba.edges[k].dst, succ_pos[pos]) for k in nba.out_edges(q) if nba.enabled(k, letter)
            ]
            cache[node] = out
        return out

    start = (nba.init, 0)
    for comp in strongly_connected_components([start], successors):
        if any(q in nba.accepting for q, _ in comp) and is_nontrivial(comp, successors):
            return True
    return False


def live_states(nba: Nba) -> set[int]:
    """States from which some accepting run exists."""
    good: set[int] = set()
    for comp in strongly_connected_components(nba.states, nba.successors):
        if is_nontrivial(comp, nba.successors) and any(q in nba.accepting for q in comp):
            good.update(comp)
    preds: list[list[int]] = [[] for _ in nba.states]
    for e in nba.edges:
        preds[e.dst].append(e.src)
    return reachable(good, lambda q: preds[q])


def prune_empty(nba: Nba) -> Nba:
    """Drop unreachable states and states with an empty residual language.

    If the whole language is empty the result is a lone, non-accepting
    initial state without edges.
    """
    keep = live_states(nba) & reachable([nba.init], nba.successors)
    if nba.init not in keep:
        return Nba(1, 0, frozenset(), (), nba.ap)
    # forward reachability again, restricted to live states
    keep = reachable([nba.init], lambda q: [d for d in nba.successors(q) if d in keep])
    order = sorted(keep)
    renum = {q: i for i, q in enumerate(order)}
    edges = [Edge(renum[e.src], e.label, renum[e.dst]) for e in nba.edges if e.src in keep and e.dst in keep]
    return Nba(len(order), renum[nba.init], frozenset(renum[q] for q in nba.accepting if q in keep), edges, nba.ap)


def reduce_nba(nba: Nba, max_variables: int = 10, merge: bool = True) -> Nba:
    """Prune, merge bisimilar states and fuse parallel edges into one label.

    Fusing matters for input expansion: a tableau may split ``!i | o`` into
    two edges ``!i`` and ``o``, and expanding ``o`` alone never sets ``i``.
    Labels are compared as truth tables, so this only runs when the labels
    mention at most *max_variables* propositions; otherwise only pruning is
    applied.  ``merge=False`` keeps every pruned state and only fuses edges.
    """
    from .boolean import simplify_minterms

    nba = prune_empty(nba)
    used: set[str] = set()
    for e in nba.edges:
        used |= atoms(e.label)
    variables = tuple(ordered_support(conjunction([Atom(a) for a in sorted(used)]), nba.ap))
    if len(variables) > max_variables:
        return nba
    letters = list(itertools.product((False, True), repeat=len(variables)))
    letter_maps = [dict(zip(variables, v)) for v in letters]
    masks = []
    for k in range(len(nba.edges)):
        check = nba._checks[k]
        masks.append(sum(1 << i for i, lm in enumerate(letter_maps) if check(lm)))

    def moves(q, block):
        out: dict[int, int] = {}
        for k in nba.out_edges(q):
            b = block[nba.edges[k].dst]
            out[b] = out.get(b, 0) | masks[k]
        return out

    block = [0] * nba.num_states
    count = 0
    if not merge:
        block = list(range(nba.num_states))
    while merge:
        sigs: dict = {}
        new = []
        for q in nba.states:
            sig = (q in nba.accepting, block[q], frozenset(moves(q, block).items()))
            new.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == count:
            break
        block, count = new, len(sigs)
    renum: dict[int, int] = {block[nba.init]: 0}
    for q in nba.states:
        renum.setdefault(block[q], len(renum))
    rep: dict[int, int] = {}
    for q in nba.states:
        rep.setdefault(renum[block[q]], q)
    edges = []
    for src in range(len(renum)):
        for b, mask in sorted(moves(rep[src], block).items(), key=lambda kv: renum[kv[0]]):
            ms = [letters[i] for i in range(len(letters)) if mask >> i & 1]
            edges.append(Edge(src, simplify_minterms(variables, ms), renum[b]))
    accepting = frozenset(renum[block[q]] for q in nba.accepting)
    return Nba(len(renum), 0, accepting, edges, nba.ap)


def distance_to_acceptance(nba: Nba) -> dict[int, float]:
    """Edge count of the shortest path to an accepting state (``math.inf`` if none)."""
    preds: list[list[int]] = [[] for _ in nba.states]
    for e in nba.edges:
        preds[e.dst].append(e.src)
    dist: dict[int, float] = {q: math.inf for q in nba.states}
    queue = deque()
    for q in sorted(nba.accepting):
        dist[q] = 0
        queue.append(q)
    while queue:
        q = queue.popleft()
        for p in preds[q]:
            if dist[p] == math.inf:
                dist[p] = dist[q] + 1
                queue.append(p)
    return dist


@dataclass(frozen=True)
class ExpandedEdge:
    """One concrete input choice refining a symbolic edge.

    ``output_cube`` only mentions outputs in the label's support; the rest
    are don't-cares.
    """

    id: int
    src: int
    dst: int
    input: Mapping[str, bool]
    output_cube: Mapping[str, bool]
    origin: int

    @property
    def input_key(self) -> tuple:
        return tuple(self.input.items())

    def __hash__(self):
        return hash(self.id)


def expand_edges(nba: Nba, spec: Spec) -> dict[int, tuple[ExpandedEdge, ...]]:
    """Enumerate label minterms per edge; inputs outside the support default to false."""
    inputs, outputs = spec.inputs, spec.outputs
    per_state: dict[int, list[ExpandedEdge]] = {q: [] for q in nba.states}
    seen: set = set()
    next_id = 0
    for q in nba.states:
        for k in nba.out_edges(q):
            e = nba.edges[k]
            support = ordered_support(e.label, spec.ap)
            unknown = set(support) - set(spec.ap)
            if unknown:
                raise ValueError(f"label mentions undeclared propositions {sorted(unknown)}")
            for m in minterms(e.label, support):
                inp = {i: m.get(i, False) for i in inputs}
                cube = {o: m[o] for o in outputs if o in m}
                key = (e.src, tuple(inp.items()), tuple(cube.items()), e.dst)
                if key in seen:
                    continue
                seen.add(key)
                per_state[q].append(ExpandedEdge(next_id, e.src, e.dst, inp, cube, k))
                next_id += 1
    return {q: tuple(v) for q, v in per_state.items()}


def dump_nba(nba: Nba) -> str:
    """Text form: ``init``/``accept`` headers then ``src "label" dst`` per edge."""
    lines = [f"states {nba.num_states}", f"init {nba.init}"]
    lines.append("accept" + "".join(f" {q}" for q in sorted(nba.accepting)))
    if nba.ap:
        lines.append("ap " + " ".join(nba.ap))
    for e in nba.edges:
        lines.append(f'{e.src} "{pretty(e.label)}" {e.dst}')
    return "\n".join(lines) + "\n"


def load_nba(text: str) -> Nba:
    num = init = None
    accepting: list[int] = []
    ap: tuple = ()
    edges = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        if head == "states":
            num = int(rest)
        elif head == "init":
            init = int(rest)
        elif head == "accept":
            accepting = [int(x) for x in rest.split()]
        elif head == "ap":
            ap = tuple(rest.split())
        else:
            src, label, dst = shlex.split(line)
            edges.append(Edge(int(src), parse_ltl(label), int(dst)))
    if init is None:
        raise ValueError("missing init line")
    if num is None:
        num = 1 + max([init, *accepting, *(e.src for e in edges), *(e.dst for e in edges)])
    return Nba(num, init, frozenset(accepting), tuple(edges), ap)


__all__ = [
    "AutomatonTooLarge",
    "Edge",
    "ExpandedEdge",
    "Nba",
    "StateSet",
    "compile_label",
    "distance_to_acceptance",
    "dump_nba",
    "expand_edges",
    "live_states",
    "load_nba",
    "minterms",
    "nba_accepts_lasso",
    "ordered_support",
    "prune_empty",
    "reduce_nba",
    "step_states",
]
