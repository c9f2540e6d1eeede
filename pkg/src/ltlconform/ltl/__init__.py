from .formula import (
    FALSE,
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
    eval_prop,
    is_propositional,
    subformulas,
)
from .parser import LtlSyntaxError, Spec, SpecError, parse_ltl, parse_spec, pretty
from .semantics import Assignment, LassoWord, Trace, eval_fltl, eval_ltl_lasso, to_nnf
