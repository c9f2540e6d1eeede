"""Concrete syntax for LTL formulas and the line-oriented spec file format.

Formula grammar, loosest binding first::

    iff     := imp ('<->' iff)?          right-assoc
    imp     := or ('->' imp)?            right-assoc
    or      := and ('|' and)*
    and     := until ('&' until)*
    until   := unary ('U' unary)*        left-assoc
    unary   := ('!' | 'X' | 'F' | 'G') unary | atom
    atom    := 'true' | 'false' | IDENT | '(' iff ')'

``N`` (weak next) and ``R`` (release) are accepted only with
``internal=True``; they are not part of the user-facing syntax.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .formula import (
    FALSE,
    KEYWORDS,
    TRUE,
    Always,
    And,
    Atom,
    Eventually,
    FalseF,
    Formula,
    Iff,
    Implies,
    Next,
    Not,
    Or,
    Release,
    TrueF,
    Until,
    WeakNext,
    atoms,
    conjunction,
)

__all__ = ["LtlSyntaxError", "SpecError", "Spec", "parse_ltl", "parse_spec", "pretty"]


class LtlSyntaxError(ValueError):
    def __init__(self, message: str, pos: int, line: int | None = None):
        self.pos = pos
        self.line = line
        where = f"column {pos + 1}" if line is None else f"line {line}, column {pos + 1}"
        super().__init__(f"{message} at {where}")


class SpecError(ValueError):
    pass


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<op><->|->|[!&|()])|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<bad>\S))"
)
_UNARY = {"!": Not, "X": Next, "F": Eventually, "G": Always}
_KEYWORDS = KEYWORDS


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while True:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            break
        if m.group("bad") is not None:
            raise LtlSyntaxError(f"unexpected character {m.group('bad')!r}", m.start("bad"))
        kind = "op" if m.group("op") else "ident"
        tokens.append((m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("<eof>", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, internal: bool):
        self.tokens = _tokenize(text)
        self.i = 0
        self.internal = internal

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def pos(self) -> int:
        return self.tokens[self.i][1]

    def take(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def expect(self, tok: str):
        if self.peek() != tok:
            raise LtlSyntaxError(f"expected {tok!r}, found {self.peek()!r}", self.pos())
        self.take()

    def parse(self) -> Formula:
        phi = self.iff()
        if self.peek() != "<eof>":
            raise LtlSyntaxError(f"unexpected token {self.peek()!r}", self.pos())
        return phi

    def iff(self) -> Formula:
        left = self.imp()
        if self.peek() == "<->":
            self.take()
            return Iff(left, self.iff())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.peek() == "|":
            self.take()
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.until()
        while self.peek() == "&":
            self.take()
            left = And(left, self.until())
        return left

    def until(self) -> Formula:
        left = self.unary()
        while self.peek() == "U" or (self.internal and self.peek() == "R"):
            op = Until if self.take() == "U" else Release
            left = op(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok in _UNARY:
            self.take()
            return _UNARY[tok](self.unary())
        if tok == "N":
            if not self.internal:
                raise LtlSyntaxError("weak next 'N' is not supported", self.pos())
            self.take()
            return WeakNext(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        tok, pos = self.tokens[self.i]
        if tok == "(":
            self.take()
            phi = self.iff()
            self.expect(")")
            return phi
        if tok == "true":
            self.take()
            return TRUE
        if tok == "false":
            self.take()
            return FALSE
        if tok == "<eof>":
            raise LtlSyntaxError("unexpected end of formula", pos)
        if tok in _KEYWORDS or not tok[0].isalpha() and tok[0] != "_":
            raise LtlSyntaxError(f"unexpected token {tok!r}", pos)
        self.take()
        return Atom(tok)


def parse_ltl(text: str, internal: bool = False) -> Formula:
    """Parse a formula, e.g. ``parse_ltl("G (r -> F g)")``."""
    return _Parser(text, internal).parse()


_BINARY_OPS = {And: "&", Or: "|", Implies: "->", Iff: "<->", Until: "U", Release: "R"}
_UNARY_OPS = {Not: "!", Next: "X", WeakNext: "N", Eventually: "F", Always: "G"}


def pretty(phi: Formula) -> str:
    """Render *phi* so that ``parse_ltl(pretty(phi)) == phi``.

    Binary children are always parenthesized, which sidesteps precedence and
    associativity entirely.
    """

    def wrap(f: Formula) -> str:
        s = pretty(f)
        return f"({s})" if type(f) in _BINARY_OPS else s

    if isinstance(phi, TrueF):
        return "true"
    if isinstance(phi, FalseF):
        return "false"
    if isinstance(phi, Atom):
        return phi.name
    op = _UNARY_OPS.get(type(phi))
    if op is not None:
        return f"{op} {wrap(phi.arg)}"
    op = _BINARY_OPS[type(phi)]
    return f"{wrap(phi.left)} {op} {wrap(phi.right)}"


@dataclass(frozen=True)
class Spec:
    """Requirements plus the input/output partition of the propositions."""

    requirements: tuple[Formula, ...]
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    conjunction: Formula = field(init=False)

    def __post_init__(self):
        overlap = set(self.inputs) & set(self.outputs)
        if overlap:
            raise SpecError(f"propositions declared as both input and output: {sorted(overlap)}")
        for group in (self.inputs, self.outputs):
            if len(set(group)) != len(group):
                raise SpecError("duplicate proposition in declaration")
        object.__setattr__(self, "conjunction", conjunction(self.requirements))
        undeclared = atoms(self.conjunction) - set(self.ap)
        if undeclared:
            raise SpecError(f"undeclared propositions: {sorted(undeclared)}")

    @property
    def ap(self) -> tuple[str, ...]:
        return self.inputs + self.outputs


def parse_spec(text: str) -> Spec:
    """Parse a spec file (``.inputs``, ``.outputs``, ``.req`` lines)."""
    decls: dict[str, list[str]] = {}
    reqs: list[Formula] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        directive, _, rest = line.partition(" ")
        if directive in (".inputs", ".outputs"):
            if directive in decls:
                raise SpecError(f"line {lineno}: duplicate {directive} declaration")
            if reqs:
                raise SpecError(f"line {lineno}: {directive} must precede requirements")
            names = rest.split()
            if not names:
                raise SpecError(f"line {lineno}: {directive} needs at least one name")
            for name in names:
                if name in _KEYWORDS or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                    raise SpecError(f"line {lineno}: invalid proposition name {name!r}")
            decls[directive] = names
        elif directive == ".req":
            offset = raw.index(".req") + len(".req")
            try:
                reqs.append(parse_ltl(raw[offset:].split("#", 1)[0]))
            except LtlSyntaxError as exc:
                raise LtlSyntaxError(str(exc).rsplit(" at ", 1)[0], exc.pos + offset, lineno) from None
        else:
            raise SpecError(f"line {lineno}: unknown directive {directive!r}")
    for directive in (".inputs", ".outputs"):
        if directive not in decls:
            raise SpecError(f"missing {directive} declaration")
    return Spec(tuple(reqs), tuple(decls[".inputs"]), tuple(decls[".outputs"]))
