"""Walk through one GDFS campaign on a small spec and a hand-made machine.

The spec says: p0 holds now exactly when, from the next step on, p1 either
stays high forever or never rises.  The machine below satisfies it.  We run
GDFS, print each test, then break one transition and watch it get caught.

    python3 demos/gdfs_walkthrough.py
"""
from ltlconform import GdfsConfig, TestModel, gdfs, parse_mealy, parse_spec

SPEC = """
.inputs p0
.outputs p1
.req p0 <-> (X G p1 | ! F p1)
"""

MACHINE = """
.inputs p0
.outputs p1
.init 0
0 | p0=0 -> 2 | p1=1
0 | p0=1 -> 1 | p1=1
1 | p0=0 -> 1 | p1=1
1 | p0=1 -> 1 | p1=1
2 | p0=0 -> 1 | p1=0
2 | p0=1 -> 1 | p1=0
"""


def show(letter):
    return " ".join(f"{k}={int(v)}" for k, v in letter.items())


def run(title, machine, model):
    print(f"== {title}")
    suite = gdfs(model, GdfsConfig(kmin=3, kmax=20), machine.session())
    for n, t in enumerate(suite.tests):
        steps = " ; ".join(show(x) for x in t.trace)
        print(f"  test {n}: {t.outcome.value:5s} {t.verdict.kind.value:20s} {steps}")
    print(f"  edges visited: {sum(v > 0 for v in suite.counters.values())}/{len(suite.counters)}")
    return suite


spec = parse_spec(SPEC)
model = TestModel.build(spec)
print(f"automaton: {model.nba.num_states} states, {model.edge_count()} expanded edges\n")

good = parse_mealy(MACHINE)
run("conformant machine", good, model)

# once p0 was high, p1 has to stay high; drop it in state 1
bad = good.replace(1, (False,), 1, (False,))
suite = run("p1 dropped in state 1", bad, model)
print(f"  killed by test {suite.first_failure}")
