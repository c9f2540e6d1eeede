"""Exhaustive ground truth: does a Mealy machine satisfy a spec on all infinite runs?

Used to label mutants as correct or faulty independently of any test
generator.  The check searches the product of the machine with an automaton
for the negated requirements for a reachable accepting cycle.
"""
from __future__ import annotations

from .automata import Nba, ltl_to_nba, reduce_nba
from .automata.graph import is_nontrivial, strongly_connected_components
from .ltl import Not, Spec
from .sut import MealyMachine, all_assignments


def negation_automaton(spec: Spec) -> Nba:
    return reduce_nba(ltl_to_nba(Not(spec.conjunction), spec.ap))


def find_violation(machine: MealyMachine, spec: Spec, neg: Nba | None = None) -> bool:
    """True if some input sequence drives *machine* to violate *spec*."""
    if set(machine.inputs) != set(spec.inputs) or set(machine.outputs) != set(spec.outputs):
        raise ValueError("machine and spec disagree on the input/output propositions")
    neg = neg or negation_automaton(spec)
    keys = all_assignments(machine.inputs)
    cache: dict = {}

    def successors(node):
        out = cache.get(node)
        if out is None:
            s, q = node
            out = []
            for key in keys:
                nxt, outs = machine.table[s][key]
                letter = dict(zip(machine.inputs, key))
                letter.update(zip(machine.outputs, outs))
                for k in neg.out_edges(q):
                    if neg.enabled(k, letter):
                        out.append((nxt, neg.edges[k].dst))
            cache[node] = out
        return out

    start = (machine.init, neg.init)
    for comp in strongly_connected_components([start], successors):
        if any(q in neg.accepting for _, q in comp) and is_nontrivial(comp, successors):
            return True
    return False


def mealy_satisfies(machine: MealyMachine, spec: Spec, neg: Nba | None = None) -> bool:
    return not find_violation(machine, spec, neg)
