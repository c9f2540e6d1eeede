import pytest
from hypothesis import given, strategies as st

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
    LtlSyntaxError,
    Next,
    Not,
    Or,
    Release,
    SpecError,
    Until,
    WeakNext,
    atoms,
    conjunction,
    eval_fltl,
    eval_ltl_lasso,
    eval_prop,
    is_propositional,
    parse_ltl,
    parse_spec,
    pretty,
    subformulas,
    to_nnf,
)
from ltlconform.ltl.formula import size

from conftest import formulas, lassos, letters

a, b, c = Atom("a"), Atom("b"), Atom("c")


def tr(*rows, names="abc"):
    """Compact traces: tr("10", "01") over atoms a, b."""
    return [{n: ch == "1" for n, ch in zip(names, row)} for row in rows]


# parsing


@pytest.mark.parametrize(
    "text, expected",
    [
        ("a", a),
        ("true", TRUE),
        ("! a & b", And(Not(a), b)),
        ("a | b & c", Or(a, And(b, c))),
        ("a U b U c", Until(Until(a, b), c)),
        ("a -> b -> c", Implies(a, Implies(b, c))),
        ("a <-> b <-> c", Iff(a, Iff(b, c))),
        ("a & b U c", And(a, Until(b, c))),
        ("X F G a", Next(Eventually(Always(a)))),
        ("F a U b", Until(Eventually(a), b)),
        ("(a | b) & c", And(Or(a, b), c)),
        ("a->b", Implies(a, b)),
        ("p0 <-> (X G p1 | ! F p1)", Iff(Atom("p0"), Or(Next(Always(Atom("p1"))), Not(Eventually(Atom("p1")))))),
    ],
)
def test_parse_precedence(text, expected):
    assert parse_ltl(text) == expected


@pytest.mark.parametrize("text", ["a &", "(a", "a b", "a & & b", "", "a $ b", "U a"])
def test_parse_rejects_malformed(text):
    with pytest.raises(LtlSyntaxError):
        parse_ltl(text)


def test_weak_next_and_release_are_internal_only():
    with pytest.raises(LtlSyntaxError):
        parse_ltl("N a")
    with pytest.raises(LtlSyntaxError):
        parse_ltl("a R b")
    assert parse_ltl("N a", internal=True) == WeakNext(a)
    assert parse_ltl("a R b", internal=True) == Release(a, b)


def test_syntax_error_reports_position():
    with pytest.raises(LtlSyntaxError) as info:
        parse_ltl("a & (b | ")
    assert info.value.pos == 9


@given(formulas())
def test_pretty_round_trip(phi):
    assert parse_ltl(pretty(phi)) == phi


def test_atom_names_validated():
    with pytest.raises(ValueError):
        Atom("1x")
    with pytest.raises(ValueError):
        Atom("G")


# helpers


def test_conjunction_and_atoms():
    assert conjunction([]) == TRUE
    assert conjunction([a]) == a
    assert conjunction([a, b, c]) == And(And(a, b), c)
    assert atoms(Until(a, Not(b))) == {"a", "b"}
    assert is_propositional(Or(a, Not(b)))
    assert not is_propositional(Next(a))
    assert size(And(a, Not(b))) == 4


def test_subformulas_children_first():
    phi = Until(a, And(a, b))
    subs = list(subformulas(phi))
    assert subs[-1] == phi
    assert len(subs) == len(set(subs))
    for k, f in enumerate(subs):
        for ch in f.children():
            assert subs.index(ch) < k


# spec files


SPEC = """
# comment line
.inputs r
.outputs g   # trailing comment
.req G (r -> F g)
.req G (g -> r)
"""


def test_parse_spec():
    spec = parse_spec(SPEC)
    assert spec.inputs == ("r",) and spec.outputs == ("g",)
    assert len(spec.requirements) == 2
    assert spec.conjunction == And(spec.requirements[0], spec.requirements[1])
    assert spec.ap == ("r", "g")


@pytest.mark.parametrize(
    "text",
    [
        ".inputs a\n.outputs a\n.req a",  # overlap
        ".inputs a a\n.outputs b\n.req a",  # duplicate
        ".inputs a\n.outputs b\n.req c",  # undeclared
        ".inputs a\n.inputs c\n.outputs b\n.req a",  # declared twice
        ".outputs b\n.req b",  # missing inputs
        ".inputs a\n.outputs b\n.req a\n.inputs c",  # declaration after .req
        ".inputs X\n.outputs b\n.req b",  # keyword as name
        ".inputs a\n.outputs b\n.bogus a",
        ".inputs\n.outputs b",
    ],
)
def test_parse_spec_errors(text):
    with pytest.raises(SpecError):
        parse_spec(text)


def test_spec_syntax_error_has_line_and_column():
    with pytest.raises(LtlSyntaxError) as info:
        parse_spec(".inputs a\n.outputs b\n.req a & (b")
    assert info.value.line == 3
    assert "line 3, column 12" in str(info.value)


def test_empty_requirements_mean_true():
    assert parse_spec(".inputs a\n.outputs b\n").conjunction == TRUE


# finite-trace semantics


@pytest.mark.parametrize(
    "trace, phi, expected",
    [
        (tr("1"), Next(a), False),
        (tr("1"), WeakNext(a), True),
        (tr("0", "1"), Next(a), True),
        (tr("0", "0"), Eventually(a), False),
        (tr("0", "1"), Eventually(a), True),
        (tr("1", "1"), Always(a), True),
        (tr("1", "0"), Always(a), False),
        (tr("10", "10", "01"), Until(a, b), True),
        (tr("10", "10"), Until(a, b), False),
        (tr("10", "00", "01"), Until(a, b), False),
        (tr("10", "10"), Release(b, a), True),
        (tr("10", "00"), Release(b, a), False),
    ],
)
def test_fltl_cases(trace, phi, expected):
    assert eval_fltl(trace, phi) is expected


def test_fltl_rejects_empty_trace():
    with pytest.raises(ValueError):
        eval_fltl([], a)


def _fltl_direct(trace, phi, i=0):
    """Textbook recursive FLTL, exponential but obviously right."""
    n = len(trace)
    t = type(phi)
    if phi == TRUE:
        return True
    if phi == FALSE:
        return False
    if t is Atom:
        return trace[i][phi.name]
    if t is Not:
        return not _fltl_direct(trace, phi.arg, i)
    if t is And:
        return _fltl_direct(trace, phi.left, i) and _fltl_direct(trace, phi.right, i)
    if t is Or:
        return _fltl_direct(trace, phi.left, i) or _fltl_direct(trace, phi.right, i)
    if t is Implies:
        return not _fltl_direct(trace, phi.left, i) or _fltl_direct(trace, phi.right, i)
    if t is Iff:
        return _fltl_direct(trace, phi.left, i) == _fltl_direct(trace, phi.right, i)
    if t is Next:
        return i + 1 < n and _fltl_direct(trace, phi.arg, i + 1)
    if t is WeakNext:
        return i + 1 >= n or _fltl_direct(trace, phi.arg, i + 1)
    if t is Eventually:
        return any(_fltl_direct(trace, phi.arg, j) for j in range(i, n))
    if t is Always:
        return all(_fltl_direct(trace, phi.arg, j) for j in range(i, n))
    if t is Until:
        return any(
            _fltl_direct(trace, phi.right, j) and all(_fltl_direct(trace, phi.left, k) for k in range(i, j))
            for j in range(i, n)
        )
    raise AssertionError(t)


traces = st.lists(letters(), min_size=1, max_size=5)


@given(traces, formulas(max_leaves=6))
def test_fltl_matches_direct_recursion(trace, phi):
    assert eval_fltl(trace, phi) == _fltl_direct(trace, phi)


@given(traces, formulas())
def test_fltl_negation(trace, phi):
    assert eval_fltl(trace, Not(phi)) == (not eval_fltl(trace, phi))


@given(traces, formulas().filter(is_propositional))
def test_fltl_propositional_uses_first_letter(trace, phi):
    assert eval_fltl(trace, phi) == eval_prop(phi, trace[0])


def test_fltl_long_trace_is_linear():
    trace = tr(*(["10"] * 5000 + ["01"]))
    phi = Always(Implies(a, Until(a, b)))
    assert eval_fltl(trace, phi)


# lasso semantics


def lasso(u, v):
    return LassoWord(tr(*u), tr(*v))


@pytest.mark.parametrize(
    "word, phi, expected",
    [
        (lasso(["0"], ["1"]), Eventually(a), True),
        (lasso([], ["0"]), Eventually(a), False),
        (lasso([], ["1", "0"]), Always(Eventually(a)), True),
        (lasso(["1"], ["0"]), Always(Eventually(a)), False),
        (lasso(["0"], ["1"]), Eventually(Always(a)), True),
        (lasso([], ["10"]), Until(a, b), False),
        (lasso([], ["10"]), Release(b, a), True),
        (lasso(["1"], ["0"]), Next(a), False),
    ],
)
def test_lasso_cases(word, phi, expected):
    assert eval_ltl_lasso(word, phi) is expected


def test_lasso_needs_loop():
    with pytest.raises(ValueError):
        LassoWord([], [])


@given(lassos(), formulas())
def test_lasso_unroll_invariance(word, phi):
    assert eval_ltl_lasso(word, phi) == eval_ltl_lasso(word.unrolled(), phi)


@given(lassos(), formulas())
def test_lasso_loop_rotation(word, phi):
    # u·(v0 v1..vk)^ω is the same word as (u·v0)·(v1..vk v0)^ω
    v = word.loop
    rotated = LassoWord(word.prefix + v[:1], v[1:] + v[:1])
    assert eval_ltl_lasso(word, phi) == eval_ltl_lasso(rotated, phi)


@given(lassos(), formulas())
def test_lasso_negation(word, phi):
    assert eval_ltl_lasso(word, Not(phi)) == (not eval_ltl_lasso(word, phi))


@given(lassos(), formulas())
def test_lasso_weak_next_is_next(word, phi):
    assert eval_ltl_lasso(word, WeakNext(phi)) == eval_ltl_lasso(word, Next(phi))


# negation normal form

NNF_OPS = (And, Or, Next, Until, Release)


def _is_nnf(phi):
    if phi in (TRUE, FALSE) or isinstance(phi, Atom):
        return True
    if isinstance(phi, Not):
        return isinstance(phi.arg, Atom)
    return isinstance(phi, NNF_OPS) and all(_is_nnf(ch) for ch in phi.children())


@given(formulas())
def test_nnf_shape(phi):
    assert _is_nnf(to_nnf(phi))


@given(lassos(), formulas())
def test_nnf_preserves_lasso_semantics(word, phi):
    assert eval_ltl_lasso(word, to_nnf(phi)) == eval_ltl_lasso(word, phi)


def test_nnf_pushes_negation_through_next():
    assert to_nnf(Not(Next(a))) == Next(Not(a))
