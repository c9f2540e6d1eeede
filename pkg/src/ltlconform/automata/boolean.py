"""Small two-level boolean helpers for edge labels."""
from __future__ import annotations

import itertools

from ..ltl import FALSE, TRUE, And, Atom, Formula, Not, Or


def simplify_minterms(variables: tuple, minterms: list[tuple]) -> Formula:
    """Small sum-of-products cover (Quine-McCluskey primes, greedy cover)."""
    n = len(variables)
    ms = set(minterms)
    if not ms:
        return FALSE
    if len(ms) == 2 ** n:
        return TRUE
    cubes = {tuple(int(b) for b in m) for m in ms}
    primes: set[tuple] = set()
    while cubes:
        merged: set[tuple] = set()
        used: set[tuple] = set()
        cube_list = sorted(cubes, key=lambda c: tuple(-1 if x is None else x for x in c))
        for a, b in itertools.combinations(cube_list, 2):
            diff = [i for i in range(n) if a[i] != b[i]]
            if len(diff) == 1 and a[diff[0]] is not None and b[diff[0]] is not None:
                c = list(a)
                c[diff[0]] = None
                merged.add(tuple(c))
                used.add(a)
                used.add(b)
        primes |= cubes - used
        cubes = merged

    def covers(cube, m):
        return all(c is None or c == int(v) for c, v in zip(cube, m))

    def order(c):
        return (sum(x is not None for x in c), tuple(-1 if x is None else x for x in c))

    uncovered = set(ms)
    chosen = []
    candidates = sorted(primes, key=order)
    while uncovered:
        best = max(candidates, key=lambda c: (sum(covers(c, m) for m in uncovered), -order(c)[0]))
        chosen.append(best)
        uncovered = {m for m in uncovered if not covers(best, m)}
    chosen.sort(key=order)
    terms = []
    for cube in chosen:
        lits = [Atom(v) if c == 1 else Not(Atom(v)) for v, c in zip(variables, cube) if c is not None]
        term = lits[0]
        for lit in lits[1:]:
            term = And(term, lit)
        terms.append(term)
    result = terms[0]
    for t in terms[1:]:
        result = Or(result, t)
    return result
