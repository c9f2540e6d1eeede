import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from ltlconform.automata import (
    AutomatonTooLarge,
    Edge,
    Nba,
    build_monitor,
    distance_to_acceptance,
    dump_nba,
    expand_edges,
    literals,
    load_nba,
    ltl_to_nba,
    nba_accepts_lasso,
    prune_empty,
    reduce_nba,
    simplify_minterms,
    step_states,
)
from ltlconform.automata.graph import is_nontrivial, reachable, strongly_connected_components
from ltlconform.automata.nba import compile_label, minterms
from ltlconform.ltl import (
    FALSE,
    TRUE,
    Always,
    Atom,
    Eventually,
    LassoWord,
    Not,
    atoms,
    eval_ltl_lasso,
    eval_prop,
    parse_ltl,
    parse_spec,
)

from conftest import all_words, brute_force_runs, formulas, lassos, random_lasso

a = Atom("a")


def L(u, v, name="a"):
    return LassoWord([{name: x} for x in u], [{name: x} for x in v])


# graph helpers


def test_scc_and_reachability():
    g = {0: [1], 1: [2], 2: [0, 3], 3: [3], 4: []}
    comps = [sorted(c) for c in strongly_connected_components(list(g), g.__getitem__)]
    assert sorted(comps) == [[0, 1, 2], [3], [4]]
    assert is_nontrivial([3], g.__getitem__)
    assert not is_nontrivial([4], g.__getitem__)
    assert reachable([3], g.__getitem__) == {3}
    assert reachable([0], g.__getitem__) == {0, 1, 2, 3}


def test_scc_deep_chain_is_iterative():
    n = 20000
    comps = list(strongly_connected_components([0], lambda q: [q + 1] if q + 1 < n else []))
    assert len(comps) == n


# boolean labels


@given(st.sets(st.tuples(st.booleans(), st.booleans(), st.booleans())))
def test_simplify_minterms_exact(ms):
    variables = ("a", "b", "c")
    f = simplify_minterms(variables, sorted(ms))
    for m in all_words(variables, 1):
        letter = m[0]
        assert eval_prop(f, letter) == (tuple(letter[v] for v in variables) in ms)


def test_simplify_minterms_constants():
    assert simplify_minterms(("a",), []) == FALSE
    assert simplify_minterms(("a",), [(False,), (True,)]) == TRUE
    assert simplify_minterms(("a", "b"), [(True, False), (True, True)]) == a


def test_compile_label_matches_eval():
    f = parse_ltl("(a | ! b) & (c <-> a)")
    check = compile_label(f)
    for (letter,) in all_words("abc", 1):
        assert check(letter) == eval_prop(f, letter)


def test_unsatisfiable_label_rejected():
    with pytest.raises(ValueError):
        Nba(1, 0, {0}, [Edge(0, parse_ltl("a & ! a"), 0)])
    with pytest.raises(ValueError):
        Nba(1, 0, {0}, [Edge(0, parse_ltl("X a"), 0)])


# translation


@pytest.mark.parametrize(
    "phi, word, expected",
    [
        ("F a", L([False], [True]), True),
        ("F a", L([], [False]), False),
        ("G F a", L([], [True, False]), True),
        ("G F a", L([True], [False]), False),
        ("F G a", L([False], [True]), True),
        ("a U X a", L([False, True], [False]), True),
        ("false", L([], [True]), False),
        ("true", L([], [False]), True),
    ],
)
def test_translation_cases(phi, word, expected):
    nba = ltl_to_nba(parse_ltl(phi), ("a",))
    assert nba_accepts_lasso(nba, word) is expected


@settings(max_examples=150)
@given(formulas(), st.lists(lassos(), min_size=5, max_size=5))
def test_translation_sound_and_complete(phi, words):
    nba = ltl_to_nba(phi, ("a", "b", "c"))
    for w in words:
        assert nba_accepts_lasso(nba, w) == eval_ltl_lasso(w, phi)


def test_translation_switch_formula():
    phi = parse_ltl("p0 <-> (X G p1 | ! F p1)")
    nba = reduce_nba(ltl_to_nba(phi, ("p0", "p1")))
    rng = random.Random(7)
    for _ in range(200):
        w = random_lasso(rng, ("p0", "p1"))
        assert nba_accepts_lasso(nba, w) == eval_ltl_lasso(w, phi)


def test_translation_deterministic():
    phi = parse_ltl("G (r -> F g) & (a U (b | X c))")
    assert dump_nba(ltl_to_nba(phi)) == dump_nba(ltl_to_nba(phi))


def test_translation_state_cap():
    phi = parse_ltl("G F a & G F b & G F c & (a U (b U (c U d)))")
    with pytest.raises(AutomatonTooLarge):
        ltl_to_nba(phi, max_states=2)


def test_translation_deadline():
    with pytest.raises(TimeoutError):
        ltl_to_nba(parse_ltl("G F a & G F b & G F c & (a U (b U (c U d)))"), deadline=0.0)


# pruning and reduction


def test_prune_removes_dead_sink():
    edges = [Edge(0, TRUE, 0), Edge(0, a, 1), Edge(1, TRUE, 1)]
    nba = Nba(2, 0, {0}, edges)
    pruned = prune_empty(nba)
    assert pruned.num_states == 1 and pruned.accepting == {0}


def test_prune_empty_language():
    nba = prune_empty(ltl_to_nba(parse_ltl("a & ! a")))
    assert nba.num_states == 1 and not nba.accepting and not nba.edges


def _random_nba(rng, n, names=("a", "b")):
    labels = [parse_ltl(s) for s in ("true", "a", "! a", "b", "a & b", "! a | b", "! b")]
    edges = []
    for q in range(n):
        for _ in range(rng.randint(0, 3)):
            edges.append(Edge(q, rng.choice(labels), rng.randrange(n)))
    acc = {q for q in range(n) if rng.random() < 0.2}
    return Nba(n, 0, acc, edges, names)


@pytest.mark.parametrize("seed", range(5))
def test_prune_and_reduce_preserve_language(seed):
    rng = random.Random(seed)
    nba = _random_nba(rng, 20)
    pruned, reduced = prune_empty(nba), reduce_nba(nba)
    for _ in range(100):
        w = random_lasso(rng, ("a", "b"))
        expected = nba_accepts_lasso(nba, w)
        assert nba_accepts_lasso(pruned, w) == expected
        assert nba_accepts_lasso(reduced, w) == expected


def test_pruned_distances_finite():
    for phi in ("G (a -> F b)", "a U b", "F G a | G F b"):
        nba = reduce_nba(ltl_to_nba(parse_ltl(phi), ("a", "b")))
        dist = distance_to_acceptance(nba)
        assert all(d < math.inf for d in dist.values())
        assert all((dist[q] == 0) == (q in nba.accepting) for q in nba.states)


def test_distance_chain():
    edges = [Edge(0, TRUE, 1), Edge(1, TRUE, 2), Edge(2, TRUE, 2), Edge(3, TRUE, 3)]
    dist = distance_to_acceptance(Nba(4, 0, {2}, edges))
    assert [dist[q] for q in range(3)] == [2, 1, 0]
    assert dist[3] == math.inf


def test_reduce_fuses_split_disjunction():
    # a tableau may split "!i | o" into two edges; fused, both literals survive
    nba = Nba(1, 0, {0}, [Edge(0, parse_ltl("! i"), 0), Edge(0, parse_ltl("o"), 0)], ("i", "o"))
    reduced = reduce_nba(nba)
    assert len(reduced.edges) == 1
    assert {name for name, _ in literals(reduced.edges[0].label)} == {"i", "o"}


def test_dump_load_round_trip():
    nba = reduce_nba(ltl_to_nba(parse_ltl("G (a -> F b)"), ("a", "b")))
    again = load_nba(dump_nba(nba))
    assert dump_nba(again) == dump_nba(nba)


# step_states against brute-force runs


@settings(max_examples=200)
@given(formulas(("a", "b"), max_leaves=8), st.lists(st.fixed_dictionaries({"a": st.booleans(), "b": st.booleans()}), max_size=5))
def test_step_states_matches_run_enumeration(phi, trace):
    nba = reduce_nba(ltl_to_nba(phi, ("a", "b")))
    current = frozenset([nba.init])
    for letter in trace:
        current = step_states(nba, current, letter)
    runs = brute_force_runs(nba, trace)
    assert bool(current) == bool(runs)
    assert current == {r[-1] for r in runs}


def test_step_states_always():
    nba = reduce_nba(ltl_to_nba(Always(a), ("a",)))
    assert step_states(nba, {nba.init}, {"a": True})
    assert not step_states(nba, {nba.init}, {"a": False})


# edge expansion


SPEC = parse_spec(".inputs p0\n.outputs p1\n")


def _expand(label):
    nba = Nba(1, 0, {0}, [Edge(0, parse_ltl(label), 0)], ("p0", "p1"))
    return [(e.input, e.output_cube) for e in expand_edges(nba, SPEC)[0]]


def test_expand_true_defaults_inputs_false():
    assert _expand("true") == [({"p0": False}, {})]


def test_expand_literal_cube():
    assert _expand("p0 & ! p1") == [({"p0": True}, {"p1": False})]


def test_expand_disjunction_three_ways():
    got = _expand("p0 | p1")
    assert len(got) == 3
    assert ({"p0": False}, {"p1": True}) in got


@given(formulas(("p0", "p1"), max_leaves=6))
def test_expansion_covers_every_input_choice(phi):
    """Each expanded edge's input, with its cube, satisfies the label; and every
    input that can satisfy the label with non-support inputs false appears."""
    nba = reduce_nba(ltl_to_nba(phi, ("p0", "p1")))
    ex = expand_edges(nba, SPEC)
    for q in nba.states:
        for e in ex[q]:
            label = nba.edges[e.origin].label
            for p1 in (False, True):
                letter = {**e.input, "p1": e.output_cube.get("p1", p1)}
                assert eval_prop(label, letter)
        for k in nba.out_edges(q):
            label = nba.edges[k].label
            for m in minterms(label, sorted(atoms(label))):
                inp = {"p0": m.get("p0", False)}
                assert any(e.origin == k and e.input == inp for e in ex[q])


# monitors


def test_monitor_for_eventually_is_trivial():
    mon = build_monitor(reduce_nba(ltl_to_nba(Eventually(Atom("o0")), ("i0", "o0"))))
    assert mon.num_states == 1
    assert len(mon.edges) == 1 and mon.edges[0].label == TRUE


def test_monitor_for_always():
    mon = build_monitor(reduce_nba(ltl_to_nba(Always(a), ("a",))))
    assert mon.num_states == 1
    assert mon.accepts_prefix([{"a": True}] * 3)
    assert not mon.accepts_prefix([{"a": True}, {"a": False}])


@settings(max_examples=80)
@given(formulas(("a", "b"), max_leaves=8), st.lists(st.fixed_dictionaries({"a": st.booleans(), "b": st.booleans()}), min_size=1, max_size=5))
def test_monitor_tracks_valid_prefixes(phi, trace):
    nba = reduce_nba(ltl_to_nba(phi, ("a", "b")))
    mon = build_monitor(nba)
    current = frozenset([nba.init])
    state = mon.init
    for letter in trace:
        current = step_states(nba, current, letter)
        state = mon.step(state, letter) if state is not None else None
        assert (state is not None) == bool(current)


@given(formulas(("a", "b"), max_leaves=8))
def test_monitor_deterministic(phi):
    mon = build_monitor(reduce_nba(ltl_to_nba(phi, ("a", "b"))))
    for q in range(mon.num_states):
        labels = [e.label for e in mon.edges if e.src == q]
        for (letter,) in all_words(("a", "b"), 1):
            assert sum(eval_prop(lab, letter) for lab in labels) <= 1


def test_literals():
    assert sorted(literals(parse_ltl("(a & ! b) | c"))) == [("a", True), ("b", False), ("c", True)]
    assert literals(TRUE) == []


def test_not_eventually_not():
    # sanity check on a classic duality through the whole pipeline
    nba = reduce_nba(ltl_to_nba(Not(Eventually(Not(a))), ("a",)))
    assert nba_accepts_lasso(nba, L([], [True]))
    assert not nba_accepts_lasso(nba, L([True], [True, False]))
