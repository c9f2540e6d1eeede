"""Campaign orchestration: one spec, many SUTs, one algorithm, one budget.

Report columns (CSV order; JSON records use the same keys in the same
order)::

    sut_id, killed, tests_run, total_steps, first_failure, timeout, errors,
    disagreements, acceptance_reached, kmax_fltl_pass, prefix_violation,
    kmax_fltl_fail[, wall_time]

``wall_time`` is only written when timing is requested, so that reports are
byte-for-byte reproducible by default.  Floats use three decimals.
"""
from __future__ import annotations

import csv
import io
import json
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

from .automata import AutomatonTooLarge
from .automata.monitor import MonitorTooLarge
from .generator import Algorithm, GdfsConfig, TestModel, TestSuite, run_algorithm
from .ltl import Spec
from .oracle import Kind, Outcome


@dataclass(frozen=True)
class SutFactory:
    """A named way to open a fresh session on one SUT."""

    id: str
    open: Callable


@dataclass(frozen=True)
class CampaignConfig:
    algorithm: Algorithm = Algorithm.GDFS
    kmin: int = 1
    kmax: int = 100
    budget_secs: float = 600.0
    early_stop: bool = True
    seed: int = 0
    workers: int = 1
    max_tests: int = 5000

    def __post_init__(self):
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        if self.budget_secs <= 0:
            raise ValueError("budget must be positive")
        if not 1 <= self.kmin < self.kmax:
            raise ValueError("need 1 <= kmin < kmax")
        if self.workers < 1:
            raise ValueError("need at least one worker")

    def generator_config(self) -> GdfsConfig:
        return GdfsConfig(self.kmin, self.kmax, self.seed, self.early_stop, self.max_tests)


KIND_COLUMNS = [k.value for k in Kind]
COLUMNS = ["sut_id", "killed", "tests_run", "total_steps", "first_failure", "timeout", "errors", "disagreements"]
COLUMNS += KIND_COLUMNS


@dataclass
class SutRecord:
    sut_id: str
    killed: bool = False
    tests_run: int = 0
    total_steps: int = 0
    first_failure: int | None = None
    timeout: bool = False
    errors: int = 0
    disagreements: int = 0
    kinds: dict = field(default_factory=lambda: {k: 0 for k in KIND_COLUMNS})
    wall_time: float = 0.0

    @classmethod
    def from_suite(cls, sut_id: str, suite: TestSuite, wall_time: float) -> "SutRecord":
        rec = cls(sut_id, wall_time=wall_time)
        rec.tests_run = len(suite.tests)
        rec.total_steps = suite.total_steps
        rec.first_failure = suite.first_failure
        rec.killed = rec.first_failure is not None
        rec.timeout = suite.timed_out and not rec.killed
        for t in suite.tests:
            if t.outcome is Outcome.ERROR:
                rec.errors += 1
            if t.verdict is not None:
                rec.kinds[t.verdict.kind.value] += 1
                rec.disagreements += t.verdict.disagreement
        return rec

    def row(self, timing: bool = False) -> dict:
        out = {
            "sut_id": self.sut_id,
            "killed": self.killed,
            "tests_run": self.tests_run,
            "total_steps": self.total_steps,
            "first_failure": self.first_failure,
            "timeout": self.timeout,
            "errors": self.errors,
            "disagreements": self.disagreements,
        }
        out.update(self.kinds)
        if timing:
            out["wall_time"] = round(self.wall_time, 3)
        return out


@dataclass
class CampaignReport:
    spec_name: str
    config: CampaignConfig
    records: list = field(default_factory=list)
    build_error: str | None = None
    repeat_kills: list = field(default_factory=list)

    @property
    def kills(self) -> int:
        return sum(r.killed for r in self.records)

    @property
    def timeouts(self) -> int:
        return sum(r.timeout for r in self.records)

    @property
    def average_steps(self) -> float:
        """Mean over SUTs of the summed test lengths."""
        if not self.records:
            return 0.0
        return sum(r.total_steps for r in self.records) / len(self.records)

    def aggregates(self) -> dict:
        return {
            "suts": len(self.records),
            "kills": self.kills,
            "average_steps": round(self.average_steps, 3),
            "timeouts": self.timeouts,
        }


def run_campaign(
    spec: Spec,
    suts: Sequence[SutFactory],
    config: CampaignConfig,
    spec_name: str = "spec",
    model: TestModel | None = None,
) -> CampaignReport:
    """Build the automaton once and test every SUT with early stop on the first kill.

    SUTs not finished when the budget runs out are recorded as timeouts.
    """
    start = time.monotonic()
    deadline = start + config.budget_secs
    report = CampaignReport(spec_name, config)
    try:
        if model is None:
            model = TestModel.build(spec, deadline=deadline)
        if config.algorithm is not Algorithm.GDFS:
            model.monitor
    except (TimeoutError, AutomatonTooLarge, MonitorTooLarge) as exc:
        report.build_error = str(exc)
        report.records = [SutRecord(s.id, timeout=True) for s in suts]
        return report
    gcfg = config.generator_config()

    def run_one(sut: SutFactory) -> SutRecord:
        if time.monotonic() > deadline:
            return SutRecord(sut.id, timeout=True)
        t0 = time.monotonic()
        env = sut.open()
        try:
            suite = run_algorithm(config.algorithm, model, gcfg, env, deadline)
        finally:
            close = getattr(env, "close", None)
            if close is not None:
                close()
        return SutRecord.from_suite(sut.id, suite, time.monotonic() - t0)

    if config.workers == 1:
        report.records = [run_one(s) for s in suts]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            report.records = list(pool.map(run_one, suts))
    return report


def run_repeated(spec: Spec, suts, config: CampaignConfig, repeats: int = 1, spec_name: str = "spec") -> CampaignReport:
    """Run with seeds ``seed, seed+1, ...`` and return the run with the median kill count."""
    reports = []
    for r in range(max(1, repeats)):
        reports.append(run_campaign(spec, suts, replace(config, seed=config.seed + r), spec_name))
    kills = [r.kills for r in reports]
    target = statistics.median_low(kills)
    chosen = next(r for r in reports if r.kills == target)
    chosen.repeat_kills = kills
    return chosen


def report_to_json(report: CampaignReport, timing: bool = False) -> str:
    cfg = report.config
    doc = {
        "spec": report.spec_name,
        "algorithm": cfg.algorithm.value,
        "kmin": cfg.kmin,
        "kmax": cfg.kmax,
        "seed": cfg.seed,
        "budget_secs": round(float(cfg.budget_secs), 3),
        "early_stop": cfg.early_stop,
        "build_error": report.build_error,
        "aggregates": report.aggregates(),
        "repeat_kills": report.repeat_kills,
        "records": [r.row(timing) for r in report.records],
    }
    return json.dumps(doc, indent=2) + "\n"


def report_to_csv(report: CampaignReport, timing: bool = False) -> str:
    buf = io.StringIO()
    columns = COLUMNS + (["wall_time"] if timing else [])
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for r in report.records:
        row = r.row(timing)
        row = {k: ("" if v is None else int(v) if isinstance(v, bool) else v) for k, v in row.items()}
        if timing:
            row["wall_time"] = f"{r.wall_time:.3f}"
        writer.writerow(row)
    return buf.getvalue()


def write_report(report: CampaignReport, fmt: str, path, timing: bool = False) -> None:
    if fmt == "json":
        text = report_to_json(report, timing)
    elif fmt == "csv":
        text = report_to_csv(report, timing)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
