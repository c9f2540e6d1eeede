"""Test verdicts.

During a test the generator folds :func:`step_states` over the trace; the
fold being empty means the trace left the language of the specification
automaton.  At the end of a test the finite-trace semantics of the whole
requirement conjunction is the verdict of record.  The automaton's opinion
is kept next to it so disagreements can be inspected.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass

from .automata import Nba
from .ltl import Spec, Trace, eval_fltl

log = logging.getLogger(__name__)


class Outcome(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    ERROR = "error"


class Kind(str, enum.Enum):
    ACCEPTANCE_REACHED = "acceptance_reached"
    KMAX_FLTL_PASS = "kmax_fltl_pass"
    PREFIX_VIOLATION = "prefix_violation"
    KMAX_FLTL_FAIL = "kmax_fltl_fail"


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    kind: Kind
    fltl_verdict: bool
    automaton_verdict: bool | None
    disagreement: bool

    @property
    def passed(self) -> bool:
        return self.outcome is Outcome.PASS


def valid_prefix(nba: Nba, current) -> bool:
    return bool(current)


def automaton_opinion(nba: Nba, final_states) -> bool | None:
    """True when the run set touches acceptance, False when it is empty.

    In between, the automaton makes no claim about the finite trace.
    """
    if not final_states:
        return False
    if final_states & nba.accepting:
        return True
    return None


def evaluate(
    spec: Spec,
    trace: Trace,
    final_states,
    reached_acceptance_at_or_after_kmin: bool,
    nba: Nba,
) -> Verdict:
    if not trace:
        raise ValueError("cannot judge an empty trace")
    fltl = eval_fltl(trace, spec.conjunction)
    if not final_states:
        kind = Kind.PREFIX_VIOLATION
    elif reached_acceptance_at_or_after_kmin:
        kind = Kind.ACCEPTANCE_REACHED
    else:
        kind = Kind.KMAX_FLTL_PASS if fltl else Kind.KMAX_FLTL_FAIL
    opinion = automaton_opinion(nba, final_states)
    disagreement = opinion is not None and opinion != fltl
    if disagreement:
        log.info("automaton and FLTL disagree (%s, fltl=%s) on a trace of length %d", kind.value, fltl, len(trace))
    outcome = Outcome.PASS if fltl else Outcome.FAIL
    return Verdict(outcome, kind, fltl, opinion, disagreement)
