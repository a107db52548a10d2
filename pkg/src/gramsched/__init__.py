"""Exact time-varying actuator scheduling for LTI systems.

Maximizes the controllability-Grammian trace under a total actuation-time
budget by sorting (rearranging) the per-actuator gain profiles and taking
the top slice, with case classification, uniqueness diagnostics, and an
independent discretized cross-check.
"""

from .errors import (
    DomainMismatchError,
    InsufficientLevelSetError,
    IntervalOutOfRangeError,
    NegativeValueError,
    NonFiniteError,
    OutOfDomainError,
    ValidationError,
    ZeroColumnError,
)
from .gramian import (
    LtiSystem,
    SampledProfile,
    Schedule,
    budget,
    concat_profile,
    profile,
    profile_nodes,
    profile_point,
    trace_cost,
)
from .linalg import integrate_samples, mat_exp, propagate
from .oracle import CellSelection, OracleComparison, compare, knapsack_solve
from .rearrange import (
    Case,
    FlatInterval,
    RearrangedProfile,
    check_integral_identities,
    check_propositions,
    rearrange,
)
from .scheduler import (
    Classification,
    FlatDegreesOfFreedom,
    SolutionReport,
    classify,
    fill_flat,
    is_constant_profile,
    solve,
    threshold_schedule,
)

__version__ = "0.1.0"

__all__ = [
    "Case",
    "CellSelection",
    "Classification",
    "DomainMismatchError",
    "FlatDegreesOfFreedom",
    "FlatInterval",
    "InsufficientLevelSetError",
    "IntervalOutOfRangeError",
    "LtiSystem",
    "NegativeValueError",
    "NonFiniteError",
    "OracleComparison",
    "OutOfDomainError",
    "RearrangedProfile",
    "SampledProfile",
    "Schedule",
    "SolutionReport",
    "ValidationError",
    "ZeroColumnError",
    "budget",
    "check_integral_identities",
    "check_propositions",
    "classify",
    "compare",
    "concat_profile",
    "fill_flat",
    "integrate_samples",
    "is_constant_profile",
    "knapsack_solve",
    "mat_exp",
    "profile",
    "profile_nodes",
    "profile_point",
    "propagate",
    "rearrange",
    "solve",
    "threshold_schedule",
    "trace_cost",
]
