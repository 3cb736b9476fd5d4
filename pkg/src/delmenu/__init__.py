"""Exact toolkit for delegated-choice menus.

A principal restricts an informed, biased agent to a menu of actions; the
agent picks the action maximizing value-plus-bias, and the principal collects
the value.  This package evaluates menus exactly (rational arithmetic with a
symbolic tie-breaking infinitesimal), finds optimal menus and best threshold
menus, builds the worst-case families and hardness reductions that
characterize threshold performance, and checks the provable guarantees as
executable properties.
"""

from .evaluate import (
    Decomposition,
    EvalReport,
    InterferenceAction,
    decompose,
    derandomize_interference,
    eval_bruteforce_product,
    eval_correlated,
    eval_independent_dp,
    evaluate,
)
from .families import (
    from_assortment,
    gen_log_family,
    gen_outside_family,
    gen_random,
    gen_three_approx,
)
from .model import (
    Action,
    CapExceededError,
    CorrelatedInstance,
    DelegationError,
    IndependentInstance,
    Instance,
    InvalidInstanceError,
    Menu,
    NoFeasibleActionError,
    OUTSIDE,
    Profile,
    agent_choice,
    deterministic,
    full_menu,
    make_support,
    shift_biases,
    threshold_menu,
    validate_menu,
)
from .reductions import (
    Graph,
    PartitionInstance,
    has_partition,
    min_vertex_cover,
    minimal_valid_m,
    parse_graph,
    reduce_integer_partition,
    reduce_vertex_cover,
)
from .serialize import (
    ParseError,
    dump_instance,
    dumps_instance,
    load_instance,
    loads_instance,
)
from .solve import (
    BoundReport,
    SolveResult,
    best_threshold,
    bound_report,
    brute_force_opt,
    log2_at_least,
    solve,
    threshold_menus,
)
from .xnum import IOTA, ONE, XNum, ZERO, as_fraction, xnum, xsum

__version__ = "0.1.0"

__all__ = [
    "Action",
    "BoundReport",
    "CapExceededError",
    "CorrelatedInstance",
    "Decomposition",
    "DelegationError",
    "EvalReport",
    "Graph",
    "IOTA",
    "IndependentInstance",
    "Instance",
    "InterferenceAction",
    "InvalidInstanceError",
    "Menu",
    "NoFeasibleActionError",
    "ONE",
    "OUTSIDE",
    "ParseError",
    "PartitionInstance",
    "Profile",
    "SolveResult",
    "XNum",
    "ZERO",
    "agent_choice",
    "as_fraction",
    "best_threshold",
    "bound_report",
    "brute_force_opt",
    "decompose",
    "derandomize_interference",
    "deterministic",
    "dump_instance",
    "dumps_instance",
    "eval_bruteforce_product",
    "eval_correlated",
    "eval_independent_dp",
    "evaluate",
    "from_assortment",
    "full_menu",
    "gen_log_family",
    "gen_outside_family",
    "gen_random",
    "gen_three_approx",
    "has_partition",
    "load_instance",
    "loads_instance",
    "log2_at_least",
    "make_support",
    "min_vertex_cover",
    "minimal_valid_m",
    "parse_graph",
    "reduce_integer_partition",
    "reduce_vertex_cover",
    "shift_biases",
    "solve",
    "threshold_menu",
    "threshold_menus",
    "validate_menu",
    "xnum",
    "xsum",
]
