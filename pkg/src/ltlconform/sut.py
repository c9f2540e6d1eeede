"""Systems under test: Mealy machines, their mutants, and subprocess SUTs.

Mealy file format::

    .inputs i0 i1
    .outputs o0
    .init 0
    0 | i0=0 i1=0 -> 1 | o0=1
    ...

Wire protocol (one line each way, ``\\n`` terminated)::

    RESET            -> OK
    STEP i0=1 i1=0   -> o0=1
"""
from __future__ import annotations

import enum
import itertools
import queue
import random
import re
import subprocess
import sys
import threading
from dataclasses import dataclass
from typing import Mapping, Protocol, Sequence


class MealyFormatError(ValueError):
    pass


class SutError(RuntimeError):
    """The SUT failed to answer properly; the running test becomes an Error."""


class ProtocolError(SutError):
    pass


class SutSession(Protocol):
    def reset(self) -> None: ...

    def step(self, inputs: Mapping[str, bool]) -> dict[str, bool]: ...


def all_assignments(names: Sequence[str]) -> list[tuple[bool, ...]]:
    return list(itertools.product((False, True), repeat=len(names)))


def format_assignment(names: Sequence[str], values: Mapping[str, bool]) -> str:
    return " ".join(f"{n}={int(bool(values[n]))}" for n in names)


_ASSIGN_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)=([01])\Z")


def parse_assignment(names: Sequence[str], text: str) -> dict[str, bool]:
    """Parse ``a=1 b=0``; names must appear exactly once each, in order."""
    parts = text.split(" ") if text else []
    if len(parts) != len(names):
        raise ValueError(f"expected {len(names)} assignments, got {text!r}")
    out = {}
    for name, part in zip(names, parts):
        m = _ASSIGN_RE.match(part)
        if m is None or m.group(1) != name:
            raise ValueError(f"expected {name}=0|1, got {part!r}")
        out[name] = m.group(2) == "1"
    return out


@dataclass(frozen=True, eq=False)
class MealyMachine:
    """Deterministic Mealy machine with boolean input and output vectors.

    ``table[state][input_tuple] = (next_state, output_tuple)`` where the
    tuples follow the declaration order of ``inputs``/``outputs``.
    """

    num_states: int
    init: int
    inputs: tuple
    outputs: tuple
    table: tuple

    def __post_init__(self):
        if not 0 <= self.init < self.num_states:
            raise MealyFormatError("initial state out of range")
        keys = set(all_assignments(self.inputs))
        if len(self.table) != self.num_states:
            raise MealyFormatError("transition table must have one row per state")
        for s, row in enumerate(self.table):
            if set(row) != keys:
                raise MealyFormatError(f"state {s}: transitions must be total over the inputs")
            for nxt, out in row.values():
                if not 0 <= nxt < self.num_states or len(out) != len(self.outputs):
                    raise MealyFormatError(f"state {s}: malformed transition")

    def __eq__(self, other):
        return isinstance(other, MealyMachine) and (
            self.init, self.inputs, self.outputs, self.table
        ) == (other.init, other.inputs, other.outputs, other.table)

    def __hash__(self):
        return hash((self.init, self.inputs, self.outputs))

    def step(self, state: int, inputs: Mapping[str, bool]) -> tuple[int, dict[str, bool]]:
        key = tuple(bool(inputs[i]) for i in self.inputs)
        nxt, out = self.table[state][key]
        return nxt, dict(zip(self.outputs, out))

    def entries(self):
        """Yield ``(state, input_tuple)`` for every transition, in a fixed order."""
        for s in range(self.num_states):
            for key in all_assignments(self.inputs):
                yield s, key

    def replace(self, state: int, key: tuple, nxt: int, out: tuple) -> "MealyMachine":
        rows = [dict(r) for r in self.table]
        rows[state][key] = (nxt, tuple(out))
        return MealyMachine(self.num_states, self.init, self.inputs, self.outputs, tuple(rows))

    def session(self) -> "MealySession":
        return MealySession(self)


def mealy_step(machine: MealyMachine, state: int, inputs: Mapping[str, bool]):
    return machine.step(state, inputs)


class MealySession:
    def __init__(self, machine: MealyMachine):
        self.machine = machine
        self.state = machine.init

    def reset(self) -> None:
        self.state = self.machine.init

    def step(self, inputs: Mapping[str, bool]) -> dict[str, bool]:
        self.state, out = self.machine.step(self.state, inputs)
        return out

    def close(self) -> None:
        pass


def parse_mealy(text: str) -> MealyMachine:
    inputs = outputs = None
    init = None
    rows: dict[int, dict[tuple, tuple]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith(".inputs"):
                inputs = tuple(line.split()[1:])
            elif line.startswith(".outputs"):
                outputs = tuple(line.split()[1:])
            elif line.startswith(".init"):
                init = int(line.split()[1])
            else:
                if inputs is None or outputs is None:
                    raise MealyFormatError("declarations must precede transitions")
                lhs, arrow, rhs = line.partition("->")
                if not arrow:
                    raise MealyFormatError("missing '->'")
                src, _, ins = (p.strip() for p in lhs.partition("|"))
                dst, _, outs = (p.strip() for p in rhs.partition("|"))
                ins = " ".join(ins.split())
                outs = " ".join(outs.split())
                iv = parse_assignment(inputs, ins)
                ov = parse_assignment(outputs, outs)
                key = tuple(iv[i] for i in inputs)
                row = rows.setdefault(int(src), {})
                if key in row:
                    raise MealyFormatError(f"duplicate transition for state {src}")
                row[key] = (int(dst), tuple(ov[o] for o in outputs))
        except (ValueError, IndexError) as exc:
            raise MealyFormatError(f"line {lineno}: {exc}") from None
    if inputs is None or outputs is None or init is None:
        raise MealyFormatError("missing .inputs, .outputs or .init")
    states = set(rows) | {init} | {d for r in rows.values() for d, _ in r.values()}
    n = max(states) + 1
    table = tuple(rows.get(s, {}) for s in range(n))
    return MealyMachine(n, init, inputs, outputs, table)


def dump_mealy(machine: MealyMachine, header: str = "") -> str:
    lines = [f"# {h}" for h in header.splitlines()] if header else []
    lines += [
        ".inputs " + " ".join(machine.inputs),
        ".outputs " + " ".join(machine.outputs),
        f".init {machine.init}",
    ]
    for s, key in machine.entries():
        nxt, out = machine.table[s][key]
        ins = format_assignment(machine.inputs, dict(zip(machine.inputs, key)))
        outs = format_assignment(machine.outputs, dict(zip(machine.outputs, out)))
        lines.append(f"{s} | {ins} -> {nxt} | {outs}")
    return "\n".join(lines) + "\n"


class MutationRule(str, enum.Enum):
    RETARGET = "retarget"
    FLIP_OUTPUT = "flip_output"


@dataclass(frozen=True)
class Mutation:
    rule: MutationRule
    state: int
    input: tuple
    new_target: int | None = None
    output: str | None = None

    def describe(self, machine: MealyMachine) -> str:
        ins = format_assignment(machine.inputs, dict(zip(machine.inputs, self.input)))
        if self.rule is MutationRule.RETARGET:
            return f"retarget state {self.state} on [{ins}] to {self.new_target}"
        return f"flip {self.output} in state {self.state} on [{ins}]"


def mutate(machine: MealyMachine, rng: random.Random | int) -> tuple[MealyMachine, Mutation]:
    """Apply one random mutation: retarget a transition or flip one output bit."""
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    rules = []
    if machine.num_states >= 2:
        rules.append(MutationRule.RETARGET)
    if machine.outputs:
        rules.append(MutationRule.FLIP_OUTPUT)
    if not rules:
        raise ValueError("no applicable mutation for a single-state machine without outputs")
    rule = rng.choice(rules)
    state, key = rng.choice(list(machine.entries()))
    nxt, out = machine.table[state][key]
    if rule is MutationRule.RETARGET:
        target = rng.choice([s for s in range(machine.num_states) if s != nxt])
        return machine.replace(state, key, target, out), Mutation(rule, state, key, new_target=target)
    j = rng.randrange(len(machine.outputs))
    flipped = tuple(not v if i == j else v for i, v in enumerate(out))
    return machine.replace(state, key, nxt, flipped), Mutation(rule, state, key, output=machine.outputs[j])


class SubprocessSession:
    """Talk to an external SUT over stdin/stdout using the line protocol."""

    def __init__(self, command: Sequence[str], inputs: Sequence[str], outputs: Sequence[str], timeout: float = 5.0):
        self.inputs = tuple(inputs)
        self.outputs = tuple(outputs)
        self.timeout = timeout
        self.proc = subprocess.Popen(
            list(command),
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            stderr=subprocess.DEVNULL,
            text=True,
            encoding="ascii",
            bufsize=1,
        )
        self._lines: queue.Queue = queue.Queue()
        self._reader = threading.Thread(target=self._pump, daemon=True)
        self._reader.start()

    def _pump(self):
        for line in self.proc.stdout:
            self._lines.put(line)
        self._lines.put(None)

    def _request(self, line: str) -> str:
        try:
            self.proc.stdin.write(line + "\n")
            self.proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise SutError(f"SUT process is gone: {exc}") from None
        try:
            reply = self._lines.get(timeout=self.timeout)
        except queue.Empty:
            raise SutError(f"SUT did not answer {line!r} within {self.timeout}s") from None
        if reply is None:
            raise SutError(f"SUT exited with code {self.proc.poll()}")
        if not reply.endswith("\n"):
            raise ProtocolError(f"unterminated reply {reply!r}")
        return reply[:-1]

    def reset(self) -> None:
        reply = self._request("RESET")
        if reply != "OK":
            raise ProtocolError(f"expected OK after RESET, got {reply!r}")

    def step(self, inputs: Mapping[str, bool]) -> dict[str, bool]:
        reply = self._request("STEP " + format_assignment(self.inputs, inputs) if self.inputs else "STEP")
        try:
            return parse_assignment(self.outputs, reply)
        except ValueError as exc:
            raise ProtocolError(f"bad STEP reply {reply!r}: {exc}") from None

    def close(self) -> None:
        if self.proc.poll() is None:
            try:
                self.proc.stdin.close()
            except OSError:
                pass
            try:
                self.proc.wait(timeout=2)
            except subprocess.TimeoutExpired:
                self.proc.kill()
                self.proc.wait()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def subprocess_session(command, spec, timeout: float = 5.0) -> SubprocessSession:
    return SubprocessSession(command, spec.inputs, spec.outputs, timeout)


def serve(machine: MealyMachine, stdin=None, stdout=None) -> None:
    """Answer the line protocol for *machine* until end of input."""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    session = MealySession(machine)
    for raw in stdin:
        line = raw.rstrip("\n")
        if line == "RESET":
            session.reset()
            reply = "OK"
        elif line == "STEP" or line.startswith("STEP "):
            try:
                inputs = parse_assignment(machine.inputs, line[5:])
            except ValueError as exc:
                reply = f"ERROR {exc}"
            else:
                reply = format_assignment(machine.outputs, session.step(inputs))
        else:
            reply = "ERROR unknown command"
        stdout.write(reply + "\n")
        stdout.flush()


def mealy_command(path: str) -> list[str]:
    """Command line that serves the Mealy file at *path* over the protocol."""
    return [sys.executable, "-m", "ltlconform.serve", str(path)]
