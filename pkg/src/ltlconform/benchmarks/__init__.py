"""Bundled desk-scale benchmarks: a spec and a conformant Mealy machine each."""
from __future__ import annotations

import random
from dataclasses import dataclass
from importlib import resources

from ..ltl import Spec, parse_spec
from ..sut import MealyMachine, Mutation, mutate, parse_mealy


@dataclass(frozen=True)
class Benchmark:
    name: str
    spec: Spec
    machine: MealyMachine

    def mutants(self, count: int = 100, seed: int = 0) -> list[tuple[MealyMachine, Mutation]]:
        rng = random.Random(f"{self.name}:{seed}")
        return [mutate(self.machine, rng) for _ in range(count)]


def names() -> list[str]:
    files = resources.files(__name__)
    return sorted(p.name[:-4] for p in files.iterdir() if p.name.endswith(".ltl"))


def load(name: str) -> Benchmark:
    files = resources.files(__name__)
    spec = parse_spec(files.joinpath(f"{name}.ltl").read_text(encoding="utf-8"))
    machine = parse_mealy(files.joinpath(f"{name}.mealy").read_text(encoding="utf-8"))
    return Benchmark(name, spec, machine)


def load_all() -> list[Benchmark]:
    return [load(n) for n in names()]
