"""Command line: ``ltlconform translate|mutate|test|bench``.

Exit status is 0 when everything passes, 1 when a test fails (or a mutant is
killed), and 2 on usage, input or SUT errors.
"""
from __future__ import annotations

import argparse
import logging
import random
import shlex
import sys
from pathlib import Path

from . import __version__
from .automata import AutomatonTooLarge, dump_nba
from .generator import Algorithm, GdfsConfig, TestModel, run_algorithm
from .harness import CampaignConfig, SutFactory, run_repeated, write_report
from .ltl import parse_spec, pretty
from .oracle import Outcome
from .sut import SutError, dump_mealy, format_assignment, mutate, parse_mealy, subprocess_session

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _read_spec(path):
    return parse_spec(Path(path).read_text(encoding="utf-8"))


def _read_mealy(path):
    return parse_mealy(Path(path).read_text(encoding="utf-8"))


def cmd_translate(args) -> int:
    spec = _read_spec(args.spec)
    model = TestModel.build(spec)
    nba = model.nba
    print(f"requirements: {len(spec.requirements)}")
    print(f"formula: {pretty(spec.conjunction)}")
    print(f"states: {nba.num_states}  accepting: {len(nba.accepting)}  edges: {len(nba.edges)}")
    print(f"expanded edges: {model.edge_count()}")
    if args.dump_automaton:
        Path(args.dump_automaton).write_text(dump_nba(nba), encoding="utf-8")
        print(f"automaton written to {args.dump_automaton}")
    return EXIT_PASS


def cmd_mutate(args) -> int:
    machine = _read_mealy(args.mealy)
    if args.count < 0:
        raise UsageError("--count must be non-negative")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)
    width = max(3, len(str(max(args.count - 1, 0))))
    for k in range(args.count):
        mutant, m = mutate(machine, rng)
        path = out / f"mutant_{k:0{width}d}.mealy"
        path.write_text(dump_mealy(mutant, header=m.describe(machine)), encoding="utf-8")
    print(f"wrote {args.count} mutants to {out}")
    return EXIT_PASS


def _open_sut(kind, target, spec):
    if kind == "mealy":
        machine = _read_mealy(target)
        if set(machine.inputs) != set(spec.inputs) or set(machine.outputs) != set(spec.outputs):
            raise UsageError("machine and spec declare different inputs/outputs")
        return machine.session()
    if kind == "exec":
        return subprocess_session(shlex.split(target), spec)
    raise UsageError(f"unknown SUT kind {kind!r} (expected mealy or exec)")


def cmd_test(args) -> int:
    spec = _read_spec(args.spec)
    cfg = GdfsConfig(args.kmin, args.kmax, args.seed, early_stop=not args.no_early_stop)
    model = TestModel.build(spec)
    kind, target = args.sut
    env = _open_sut(kind, target, spec)
    try:
        suite = run_algorithm(args.algo, model, cfg, env)
    finally:
        close = getattr(env, "close", None)
        if close:
            close()
    names = list(spec.inputs) + list(spec.outputs)
    for k, t in enumerate(suite.tests):
        kind_s = t.verdict.kind.value if t.verdict else "-"
        print(f"test {k}: {t.outcome.value} ({kind_s}, {t.stop}) length {len(t)}")
        if args.verbose or t.outcome is not Outcome.PASS:
            for letter in t.trace:
                print("    " + format_assignment(names, letter))
        if t.error:
            print(f"    error: {t.error}")
    print(f"{len(suite.tests)} tests, {suite.total_steps} steps")
    if any(t.outcome is Outcome.ERROR and t.stop == "sut_error" for t in suite.tests):
        return EXIT_ERROR
    return EXIT_FAIL if suite.failed else EXIT_PASS


def _mutant_factories(directory):
    files = sorted(Path(directory).glob("*.mealy"))
    out = []
    for f in files:
        machine = _read_mealy(f)
        out.append(SutFactory(f.stem, machine.session))
    return out


def cmd_bench(args) -> int:
    spec = _read_spec(args.spec)
    if not Path(args.mutants).is_dir():
        raise UsageError(f"{args.mutants} is not a directory")
    suts = _mutant_factories(args.mutants)
    cfg = CampaignConfig(
        algorithm=args.algo,
        kmin=args.kmin,
        kmax=args.kmax,
        budget_secs=args.budget_secs,
        early_stop=True,
        seed=args.seed,
        workers=args.workers,
    )
    repeats = args.repeats if args.repeats is not None else (1 if cfg.algorithm is Algorithm.GDFS else 3)
    report = run_repeated(spec, suts, cfg, repeats, spec_name=Path(args.spec).stem)
    if args.report:
        write_report(report, args.format, args.report, timing=args.timing)
    agg = report.aggregates()
    print(f"{agg['kills']}/{agg['suts']} killed, average steps {agg['average_steps']:.3f}, timeouts {agg['timeouts']}")
    if report.build_error:
        print(f"automaton construction failed: {report.build_error}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_FAIL if report.kills else EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ltlconform", description="Conformance testing of reactive systems from LTL requirements.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true", help="print every trace and log disagreements")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("translate", help="build the automaton for a spec")
    t.add_argument("spec")
    t.add_argument("--dump-automaton", metavar="PATH")
    t.set_defaults(func=cmd_translate)

    m = sub.add_parser("mutate", help="write seeded single-fault mutants of a Mealy machine")
    m.add_argument("mealy")
    m.add_argument("--count", type=int, required=True)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--out", required=True, metavar="DIR")
    m.set_defaults(func=cmd_mutate)

    algos = [a.value for a in Algorithm]
    r = sub.add_parser("test", help="generate and run tests against one SUT")
    r.add_argument("spec")
    r.add_argument("--sut", nargs=2, metavar=("KIND", "TARGET"), required=True,
                   help="'mealy FILE' or 'exec CMD' (CMD is split shell-style)")
    r.add_argument("--algo", choices=algos, default="gdfs")
    r.add_argument("--kmin", type=int, default=1)
    r.add_argument("--kmax", type=int, default=100)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--no-early-stop", action="store_true", help="keep testing after the first failure")
    r.set_defaults(func=cmd_test)

    b = sub.add_parser("bench", help="mutation campaign over a directory of Mealy files")
    b.add_argument("spec")
    b.add_argument("--mutants", required=True, metavar="DIR")
    b.add_argument("--algo", choices=algos, default="gdfs")
    b.add_argument("--kmin", type=int, default=1)
    b.add_argument("--kmax", type=int, default=100)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--budget-secs", type=float, default=600.0)
    b.add_argument("--repeats", type=int, default=None, help="runs to take the median over (default 1 for gdfs, 3 otherwise)")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--report", metavar="PATH")
    b.add_argument("--format", choices=["csv", "json"], default="csv")
    b.add_argument("--timing", action="store_true", help="add per-SUT wall time to the report")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"ltlconform: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    # syntax, spec and Mealy format errors are all ValueErrors
    except (UsageError, ValueError, OSError, SutError, AutomatonTooLarge, TimeoutError) as exc:
        print(f"ltlconform: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
