"""Why safety monitors cannot test "eventually o0".

Every finite prefix can still be extended to satisfy F o0, so the monitor
built from it has one state and no labels to cover.  Coverage-driven walks
therefore never start a test.  GDFS walks the Buchi automaton instead and
judges the kmax-long trace with finite-trace semantics.

    python3 demos/liveness_blindness.py
"""
from ltlconform import Algorithm, GdfsConfig, TestModel, parse_mealy, parse_spec, run_algorithm
from ltlconform.generator import coverage_targets

spec = parse_spec(".inputs i0\n.outputs o0\n.req F o0\n")
model = TestModel.build(spec)
print(f"monitor states: {model.monitor.num_states}, coverage targets: {len(coverage_targets(model.monitor))}")

silent = parse_mealy(".inputs i0\n.outputs o0\n.init 0\n0 | i0=0 -> 0 | o0=0\n0 | i0=1 -> 0 | o0=0\n")
late = parse_mealy(
    ".inputs i0\n.outputs o0\n.init 0\n"
    "0 | i0=0 -> 1 | o0=0\n0 | i0=1 -> 1 | o0=0\n"
    "1 | i0=0 -> 1 | o0=1\n1 | i0=1 -> 1 | o0=1\n"
)

for label, machine in (("never asserts o0", silent), ("asserts o0 from step 1", late)):
    print(f"\n{label}")
    for algo in Algorithm:
        suite = run_algorithm(algo, model, GdfsConfig(kmin=3, kmax=100), machine.session())
        last = suite.tests[-1] if suite.tests else None
        detail = f"{last.verdict.kind.value}, length {len(last)}" if last else "no tests"
        print(f"  {algo.value:5s} tests={len(suite.tests):2d} failed={suite.failed!s:5s} {detail}")
