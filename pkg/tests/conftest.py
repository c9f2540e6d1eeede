import itertools
import random
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

from ltlconform.automata import Nba
from ltlconform.ltl import (
    FALSE,
    TRUE,
    Always,
    And,
    Atom,
    Eventually,
    Iff,
    Implies,
    LassoWord,
    Next,
    Not,
    Or,
    Until,
    parse_spec,
)
from ltlconform.sut import parse_mealy

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

DATA = Path(__file__).parent / "data"


# random formulas, shared by hypothesis tests and the seeded acceptance run

UNARY = (Not, Next, Eventually, Always)
BINARY = (And, Or, Implies, Iff, Until)


def random_formula(rng: random.Random, names, depth: int):
    """Uniform-ish formula of operator depth at most *depth*."""
    if depth == 0 or rng.random() < 0.2:
        r = rng.random()
        if r < 0.08:
            return TRUE
        if r < 0.16:
            return FALSE
        return Atom(rng.choice(names))
    if rng.random() < 0.4:
        return rng.choice(UNARY)(random_formula(rng, names, depth - 1))
    op = rng.choice(BINARY)
    return op(random_formula(rng, names, depth - 1), random_formula(rng, names, depth - 1))


def random_letter(rng, names):
    return {n: rng.random() < 0.5 for n in names}


def random_lasso(rng, names, max_prefix=4, max_loop=4):
    u = [random_letter(rng, names) for _ in range(rng.randint(0, max_prefix))]
    v = [random_letter(rng, names) for _ in range(rng.randint(1, max_loop))]
    return LassoWord(u, v)


def formulas(names=("a", "b", "c"), max_leaves=12):
    leaves = st.one_of(st.just(TRUE), st.just(FALSE), st.sampled_from(names).map(Atom))

    def extend(children):
        return st.one_of(
            st.tuples(st.sampled_from(UNARY), children).map(lambda t: t[0](t[1])),
            st.tuples(st.sampled_from(BINARY), children, children).map(lambda t: t[0](t[1], t[2])),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def letters(names=("a", "b", "c")):
    return st.fixed_dictionaries({n: st.booleans() for n in names})


def lassos(names=("a", "b", "c")):
    return st.builds(
        LassoWord,
        st.lists(letters(names), max_size=4),
        st.lists(letters(names), min_size=1, max_size=4),
    )


# brute-force oracles


def brute_force_runs(nba: Nba, trace):
    """All state sequences q0..qn compatible with *trace*, by plain enumeration."""
    runs = [[nba.init]]
    for letter in trace:
        nxt = []
        for run in runs:
            for k, e in enumerate(nba.edges):
                if e.src == run[-1] and nba.enabled(k, letter):
                    nxt.append(run + [e.dst])
        runs = nxt
    return runs


def all_words(names, length):
    letters_ = [dict(zip(names, v)) for v in itertools.product((False, True), repeat=len(names))]
    return itertools.product(letters_, repeat=length)


@pytest.fixture
def switch_spec():
    return parse_spec((DATA / "switch.ltl").read_text())


@pytest.fixture
def switch_machine():
    return parse_mealy((DATA / "switch.mealy").read_text())


def echo_spec():
    return parse_spec(".inputs i0\n.outputs o0\n.req G (i0 <-> o0)\n")


def echo_machine():
    return parse_mealy(".inputs i0\n.outputs o0\n.init 0\n0 | i0=0 -> 0 | o0=0\n0 | i0=1 -> 0 | o0=1\n")
