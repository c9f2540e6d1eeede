from .nba import (
    AutomatonTooLarge,
    Edge,
    ExpandedEdge,
    Nba,
    StateSet,
    distance_to_acceptance,
    dump_nba,
    expand_edges,
    load_nba,
    nba_accepts_lasso,
    prune_empty,
    reduce_nba,
    step_states,
)
from .translate import ltl_to_nba
from .monitor import Monitor, MonitorEdge, MonitorTooLarge, build_monitor, literals, simplify_minterms
