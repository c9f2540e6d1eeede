from __future__ import annotations

from typing import Callable, Hashable, Iterable, Sequence


def strongly_connected_components(
    nodes: Iterable[Hashable], successors: Callable[[Hashable], Iterable[Hashable]]
) -> list[list[Hashable]]:
    """Tarjan's algorithm, iterative so deep graphs don't hit the recursion limit.

    Components come out in reverse topological order (sinks first).
    """
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    result: list[list] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(successors(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                result.append(comp)
    return result


def is_nontrivial(component: Sequence, successors) -> bool:
    """True if the component contains a cycle (size > 1 or a self-loop)."""
    if len(component) > 1:
        return True
    v = component[0]
    return v in set(successors(v))


def reachable(start: Iterable, successors) -> set:
    seen = set(start)
    frontier = list(seen)
    while frontier:
        v = frontier.pop()
        for w in successors(v):
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return seen
