"""Mutation campaign over one bundled benchmark, GDFS against the two walks.

Each mutant changes one transition of a conformant machine.  A product
construction tells us which mutants really violate the spec, so the kill
counts can be read against ground truth.

    python3 demos/mutation_campaign.py [benchmark] [count]
"""
import sys

from ltlconform import Algorithm, CampaignConfig, SutFactory, benchmarks, run_campaign
from ltlconform.verify import mealy_satisfies, negation_automaton

name = sys.argv[1] if len(sys.argv) > 1 else "latch"
count = int(sys.argv[2]) if len(sys.argv) > 2 else 50

bench = benchmarks.load(name)
print(f"{name}: " + " & ".join(str(r) for r in bench.spec.requirements))

pairs = bench.mutants(count)
neg = negation_automaton(bench.spec)
faulty = [not mealy_satisfies(m, bench.spec, neg) for m, _ in pairs]
print(f"{count} mutants, {sum(faulty)} of them faulty\n")

suts = [SutFactory(f"m{k:03d}", m.session) for k, (m, _) in enumerate(pairs)]
configs = {
    "GDFS-1": CampaignConfig(Algorithm.GDFS, kmin=1),
    "GDFS-5": CampaignConfig(Algorithm.GDFS, kmin=5),
    "RW": CampaignConfig(Algorithm.RW, seed=1),
    "GW": CampaignConfig(Algorithm.GW, seed=1),
}
print(f"{'algo':8s} {'kills':>5s} {'false+':>6s} {'avg steps':>9s}")
for label, cfg in configs.items():
    report = run_campaign(bench.spec, suts, cfg, name)
    wrong = sum(r.killed and not f for r, f in zip(report.records, faulty))
    print(f"{label:8s} {report.kills:5d} {wrong:6d} {report.average_steps:9.1f}")

# the first surviving faulty mutant, if any, and why it survived GDFS-5
report = run_campaign(bench.spec, suts, configs["GDFS-5"], name)
for (m, mu), r, f in zip(pairs, report.records, faulty):
    if f and not r.killed:
        print(f"\nsurvivor {r.sut_id}: {mu.describe(bench.machine)}")
        break
