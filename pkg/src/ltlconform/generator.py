"""Input generation by walking the specification automaton.

:func:`gdfs` is the visit-count guided depth-first walk over the Büchi
automaton.  :func:`run_baseline` implements the monitor-driven random (RW)
and guided (GW) walks with atomic proposition coverage as the objective.
"""
from __future__ import annotations

import dataclasses
import enum
import itertools
import random
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

from .automata import (
    ExpandedEdge,
    Nba,
    build_monitor,
    distance_to_acceptance,
    expand_edges,
    ltl_to_nba,
    reduce_nba,
    step_states,
)
from .automata.monitor import Monitor, literals
from .automata.nba import compile_label
from .ltl import Spec
from .oracle import Outcome, Verdict, evaluate
from .sut import SutError


class Algorithm(str, enum.Enum):
    GDFS = "gdfs"
    RW = "rw"
    GW = "gw"


class EmptyFrontier(RuntimeError):
    """The current automaton states have no outgoing edges."""


@dataclass(frozen=True)
class GdfsConfig:
    kmin: int = 1
    kmax: int = 100
    seed: int = 0
    early_stop: bool = True
    max_tests: int = 5000

    def __post_init__(self):
        if not 1 <= self.kmin < self.kmax:
            raise ValueError(f"need 1 <= kmin < kmax, got kmin={self.kmin}, kmax={self.kmax}")


@dataclass
class TestResult:
    __test__ = False  # not a pytest class

    trace: list
    outcome: Outcome
    stop: str
    verdict: Verdict | None = None
    error: str | None = None
    path: tuple = ()

    def __len__(self):
        return len(self.trace)


@dataclass
class TestSuite:
    __test__ = False  # not a pytest class

    tests: list = field(default_factory=list)
    timed_out: bool = False
    counters: dict = field(default_factory=dict)
    targets: int = 0
    covered: int = 0

    @property
    def failed(self) -> bool:
        return any(t.outcome is Outcome.FAIL for t in self.tests)

    @property
    def first_failure(self) -> int | None:
        for k, t in enumerate(self.tests):
            if t.outcome is Outcome.FAIL:
                return k
        return None

    @property
    def total_steps(self) -> int:
        return sum(len(t) for t in self.tests)


@dataclass(frozen=True, eq=False)
class TestModel:
    """Everything precomputed from a spec, shared read-only across SUTs."""

    __test__ = False

    spec: Spec
    nba: Nba
    expansions: Mapping[int, tuple]
    distances: Mapping[int, float]
    degree: Mapping[int, int]

    @classmethod
    def build(cls, spec: Spec, deadline: float | None = None, max_states: int = 20000) -> "TestModel":
        raw = ltl_to_nba(spec.conjunction, spec.ap, max_states=max_states, deadline=deadline)
        nba = reduce_nba(raw)
        expansions = expand_edges(nba, spec)
        degree = {q: len(expansions[q]) for q in nba.states}
        return cls(spec, nba, expansions, distance_to_acceptance(nba), degree)

    @cached_property
    def monitor(self) -> Monitor:
        return build_monitor(self.nba)

    def edge_count(self) -> int:
        return sum(len(v) for v in self.expansions.values())


def _expired(deadline: float | None) -> bool:
    return deadline is not None and time.monotonic() > deadline


def select_next_edge(frontier, counter: Mapping[int, int], distances, degree) -> ExpandedEdge:
    """Fewest visits first; ties go to the target closest to acceptance, then
    to the target with the larger out-degree, then to the lowest edge id."""
    if not frontier:
        raise EmptyFrontier("no outgoing edges from the current states")
    return min(frontier, key=lambda e: (counter.get(e.id, 0), distances[e.dst], -degree[e.dst], e.id))


def gdfs(model: TestModel, cfg: GdfsConfig, env, deadline: float | None = None) -> TestSuite:
    nba = model.nba
    counter: dict[int, int] = {e.id: 0 for e in model.expansions[nba.init]}
    suite = TestSuite(counters=counter)
    while any(v == 0 for v in counter.values()):
        if len(suite.tests) >= cfg.max_tests or _expired(deadline):
            suite.timed_out = _expired(deadline)
            break
        result = _gdfs_test(model, cfg, env, counter, deadline)
        suite.tests.append(result)
        if result.stop == "timeout":
            suite.timed_out = True
            break
        if result.outcome is Outcome.ERROR and result.stop == "sut_error":
            break
        if cfg.early_stop and result.outcome is Outcome.FAIL:
            break
    return suite


def _may_stop(model: TestModel, current, counter: dict, progressed: bool) -> bool:
    """Whether a test sitting in an accepting state may end here.

    Stopping at the first acceptance can strand edges that only appear deeper
    in the automaton, and the deterministic selection then repeats the same
    short tests forever.  So a test runs on while an unvisited edge is on
    offer, or while it has not yet visited any edge for the first time.
    """
    ahead = [e for q in current for e in model.expansions[q]]
    if any(counter.setdefault(e.id, 0) == 0 for e in ahead):
        return False
    return progressed or all(counter.values())


def _gdfs_test(model: TestModel, cfg: GdfsConfig, env, counter: dict, deadline) -> TestResult:
    nba = model.nba
    trace: list[dict] = []
    path: list[int] = []
    current = frozenset([nba.init])
    reached = progressed = False
    try:
        env.reset()
    except SutError as exc:
        return TestResult(trace, Outcome.ERROR, "sut_error", error=str(exc))
    while current and len(trace) < cfg.kmax:
        if _expired(deadline):
            return TestResult(trace, Outcome.ERROR, "timeout", error="budget expired", path=tuple(path))
        frontier = [e for q in sorted(current) for e in model.expansions[q]]
        for e in frontier:
            counter.setdefault(e.id, 0)
        try:
            chosen = select_next_edge(frontier, counter, model.distances, model.degree)
        except EmptyFrontier as exc:
            return TestResult(trace, Outcome.ERROR, "empty_frontier", error=str(exc), path=tuple(path))
        key = chosen.input_key
        for e in frontier:
            if e.input_key == key:
                progressed |= counter[e.id] == 0
                counter[e.id] += 1
        try:
            out = env.step(chosen.input)
        except SutError as exc:
            return TestResult(trace, Outcome.ERROR, "sut_error", error=str(exc), path=tuple(path))
        letter = {**chosen.input, **out}
        current = step_states(nba, current, letter)
        trace.append(letter)
        path.append(chosen.id)
        if len(trace) >= cfg.kmin and current & nba.accepting and _may_stop(model, current, counter, progressed):
            reached = True
            break
    verdict = evaluate(model.spec, trace, current, reached, nba)
    if not current:
        stop = "violation"
    elif reached:
        stop = "acceptance"
    else:
        stop = "kmax"
    return TestResult(trace, verdict.outcome, stop, verdict, path=tuple(path))


@dataclass(frozen=True)
class CoverageTarget:
    edge: int
    atom: str
    positive: bool


def coverage_targets(monitor: Monitor) -> list[CoverageTarget]:
    """Atomic proposition coverage: one target per signed atom per monitor edge."""
    return [CoverageTarget(e.id, name, pos) for e in monitor.edges for name, pos in literals(e.label)]


class _MonitorIndex:
    """Which inputs can move the monitor, and which targets each input can reach."""

    def __init__(self, monitor: Monitor, spec: Spec, targets: list[CoverageTarget]):
        self.monitor = monitor
        self.spec = spec
        self.inputs = [dict(zip(spec.inputs, v)) for v in itertools.product((False, True), repeat=len(spec.inputs))]
        self.output_letters = [
            dict(zip(spec.outputs, v)) for v in itertools.product((False, True), repeat=len(spec.outputs))
        ]
        self.checks = {e.id: compile_label(e.label) for e in monitor.edges}
        self.out_edges: dict[int, list] = {}
        for e in monitor.edges:
            self.out_edges.setdefault(e.src, []).append(e)
        self.by_edge: dict[int, list[int]] = {}
        for k, t in enumerate(targets):
            self.by_edge.setdefault(t.edge, []).append(k)
        self.targets = targets
        self._cache: dict = {}

    def options(self, state: int, k: int) -> tuple[bool, frozenset]:
        """(can input *k* move the monitor, targets reachable with it in one step)."""
        hit = self._cache.get((state, k))
        if hit is None:
            movable = False
            reach = set()
            for e in self.out_edges.get(state, ()):
                check = self.checks[e.id]
                for outs in self.output_letters:
                    letter = {**self.inputs[k], **outs}
                    if not check(letter):
                        continue
                    movable = True
                    for t in self.by_edge.get(e.id, ()):
                        tgt = self.targets[t]
                        if letter[tgt.atom] == tgt.positive:
                            reach.add(t)
            hit = self._cache[(state, k)] = (movable, frozenset(reach))
        return hit


def run_baseline(
    kind: Algorithm,
    model: TestModel,
    cfg: GdfsConfig,
    env,
    deadline: float | None = None,
    rng: random.Random | None = None,
) -> TestSuite:
    """Monitor-driven walk; a test ends on a new coverage target, on a monitor
    violation, or at ``kmax``.  The campaign ends when every target is covered.

    Only the monitor judges these tests: a step the monitor cannot follow is a
    failure, anything else passes.  The finite-trace verdict is still computed
    and kept on the result for comparison.
    """
    kind = Algorithm(kind)
    if kind is Algorithm.GDFS:
        raise ValueError("use gdfs() for the GDFS algorithm")
    rng = rng or random.Random(cfg.seed)
    monitor = model.monitor
    targets = coverage_targets(monitor)
    index = _MonitorIndex(monitor, model.spec, targets)
    uncovered = set(range(len(targets)))
    suite = TestSuite(targets=len(targets))
    while uncovered:
        if len(suite.tests) >= cfg.max_tests or _expired(deadline):
            suite.timed_out = _expired(deadline)
            break
        result = _baseline_test(kind, model, index, cfg, env, uncovered, rng, deadline)
        suite.tests.append(result)
        if result.stop == "timeout":
            suite.timed_out = True
            break
        if result.outcome is Outcome.ERROR and result.stop == "sut_error":
            break
        if cfg.early_stop and result.outcome is Outcome.FAIL:
            break
    suite.covered = len(targets) - len(uncovered)
    return suite


def _baseline_test(kind, model, index: _MonitorIndex, cfg, env, uncovered: set, rng, deadline) -> TestResult:
    monitor = index.monitor
    trace: list[dict] = []
    state = monitor.init
    current = frozenset([model.nba.init])
    stop = "kmax"
    try:
        env.reset()
    except SutError as exc:
        return TestResult(trace, Outcome.ERROR, "sut_error", error=str(exc))
    while len(trace) < cfg.kmax:
        if _expired(deadline):
            return TestResult(trace, Outcome.ERROR, "timeout", error="budget expired")
        opts = [(k, *index.options(state, k)) for k in range(len(index.inputs))]
        enabled = [k for k, movable, _ in opts if movable]
        if not enabled:
            return TestResult(trace, Outcome.ERROR, "empty_frontier", error="monitor state has no moves")
        pool = enabled
        if kind is Algorithm.GW:
            preferred = [k for k, movable, reach in opts if movable and reach & uncovered]
            if preferred:
                pool = preferred
        inputs = index.inputs[rng.choice(pool)]
        try:
            out = env.step(inputs)
        except SutError as exc:
            return TestResult(trace, Outcome.ERROR, "sut_error", error=str(exc))
        letter = {**inputs, **out}
        trace.append(letter)
        current = step_states(model.nba, current, letter)
        edge = monitor.edge_for(state, letter)
        if edge is None:
            stop = "violation"
            break
        state = edge.dst
        new = [t for t in index.by_edge.get(edge.id, ()) if t in uncovered
               and letter[index.targets[t].atom] == index.targets[t].positive]
        if new:
            uncovered.difference_update(new)
            stop = "objective"
            break
    verdict = evaluate(model.spec, trace, current, False, model.nba)
    outcome = Outcome.FAIL if stop == "violation" else Outcome.PASS
    return TestResult(trace, outcome, stop, dataclasses.replace(verdict, outcome=outcome))


def run_algorithm(algo, model: TestModel, cfg: GdfsConfig, env, deadline=None) -> TestSuite:
    algo = Algorithm(algo)
    if algo is Algorithm.GDFS:
        return gdfs(model, cfg, env, deadline)
    return run_baseline(algo, model, cfg, env, deadline)
