"""Toolkit for 2-factors with few cycles in claw-free graphs: closure, line
graph roots, dominating systems, improvement search and certificates."""

from __future__ import annotations

from .closure import ClosureTrace, check_trace, closure, closure_graph, find_claw, is_claw_free
from .degree import (
    HypothesisReport,
    build_extremal,
    check_degree_condition,
    check_hypotheses,
    independence_number,
    sigma_k,
)
from .domination import (
    RELAXED,
    STRICT,
    DominatingSystem,
    Star,
    has_dominating_closed_trail,
    min_system_exhaustive,
    system_to_two_factor,
    two_factor_to_system,
    validate,
)
from .errors import (
    BudgetExceeded,
    ClaimViolation,
    ClawfactorError,
    GraphFormatError,
    HypothesesFail,
    NotALineGraph,
    NotClawFree,
    NoTriangleFreeRoot,
    NoTwoFactor,
    ReductionFailed,
)
from .graph import ClosedTrail, Cycle, EdgeSubgraph, Graph, TwoFactor, parse_graph, serialize_graph
from .linegraph import RootCorrespondence, line_graph, root_graph
from .matching import max_matching_general, min_cycle_two_factor_bruteforce, two_factor
from .pipeline import (
    DegeneratePartition,
    PipelineCertificate,
    run_degenerate_partition,
    run_main_theorem,
    verify_certificate,
)
from .search import SigmaWitness, ViolationWitness, find_bounded_system

__version__ = "0.1.0"
